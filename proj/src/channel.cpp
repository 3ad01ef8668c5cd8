#include "proxysync/channel.hpp"

#include <algorithm>
#include <tuple>

#include "proxysync/rng.hpp"

namespace proxysync {

std::vector<Delivery> channel_deliver(const std::vector<Envelope>& msgs,
                                      const ChannelModel& model, double now) {
  std::vector<Delivery> out;
  out.reserve(msgs.size());
  for (const Envelope& e : msgs) {
    std::uint64_t key = model.seed;
    key = mix_words(key, e.room_id);
    key = mix_words(key, static_cast<std::uint64_t>(e.kind));
    key = mix_words(key, e.seq);
    key = mix_words(key, static_cast<std::uint64_t>(e.sent_at_us));
    Rng rng(key);
    if (rng.uniform01() < model.drop_prob) continue;
    double u = rng.uniform(-1.0, 1.0);
    double at = e.sent_at() + model.base_latency + model.jitter * u;
    at = std::max({at, e.sent_at(), now});
    out.push_back({at, e});
  }
  std::sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) {
    return std::tie(a.deliver_at, a.env.room_id, a.env.kind, a.env.seq, a.env.sent_at_us) <
           std::tie(b.deliver_at, b.env.room_id, b.env.kind, b.env.seq, b.env.sent_at_us);
  });
  return out;
}

}  // namespace proxysync
