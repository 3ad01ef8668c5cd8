#include "proxysync/channel.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"

using namespace proxysync;

namespace {

Envelope msg(MessageKind kind, std::uint8_t room, std::uint32_t seq, double sent_at) {
  Envelope e;
  e.kind = kind;
  e.room_id = room;
  e.seq = seq;
  e.sent_at_us = to_micros(sent_at);
  e.body.set("entity", "o").set_num("x", 0.0).set_num("y", 0.0);
  return e;
}

std::vector<Envelope> burst(int n, double spacing = 0.05) {
  std::vector<Envelope> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(msg(MessageKind::PoseUpdate, 1, static_cast<std::uint32_t>(i + 1),
                      i * spacing));
  }
  return out;
}

}  // namespace

TEST_CASE("a lossless jitter-free channel is a pure latency line") {
  const ChannelModel m{0.04, 0.0, 0.0, 9};
  const auto deliveries = channel_deliver(burst(50), m);
  REQUIRE(deliveries.size() == 50);
  for (const Delivery& d : deliveries) {
    CHECK(d.deliver_at == doctest::Approx(d.env.sent_at() + 0.04));
  }
  // Sorted by delivery time.
  CHECK(std::is_sorted(deliveries.begin(), deliveries.end(),
                       [](const Delivery& a, const Delivery& b) {
                         return a.deliver_at < b.deliver_at;
                       }));
}

TEST_CASE("the schedule is a pure function of the message set") {
  const ChannelModel m{0.04, 0.02, 0.1, 1234};
  auto msgs = burst(200);
  const auto once = channel_deliver(msgs, m);
  const auto again = channel_deliver(msgs, m);
  REQUIRE(once.size() == again.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].deliver_at == again[i].deliver_at);
    CHECK(once[i].env == again[i].env);
  }

  // Shuffling the submission order cannot change anything.
  std::mt19937_64 rng(5);
  std::shuffle(msgs.begin(), msgs.end(), rng);
  const auto shuffled = channel_deliver(msgs, m);
  REQUIRE(shuffled.size() == once.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(shuffled[i].deliver_at == once[i].deliver_at);
    CHECK(shuffled[i].env == once[i].env);
  }

  // Splitting the batch in two cannot either: each message's fate is its own.
  const auto all = burst(100);
  const std::vector<Envelope> first_half(all.begin(), all.begin() + 50);
  const std::vector<Envelope> second_half(all.begin() + 50, all.end());
  auto split = channel_deliver(first_half, m);
  const auto tail = channel_deliver(second_half, m);
  split.insert(split.end(), tail.begin(), tail.end());
  std::sort(split.begin(), split.end(), [](const Delivery& a, const Delivery& b) {
    return std::make_tuple(a.deliver_at, a.env.room_id, a.env.kind, a.env.seq) <
           std::make_tuple(b.deliver_at, b.env.room_id, b.env.kind, b.env.seq);
  });
  const auto whole = channel_deliver(all, m);
  REQUIRE(split.size() == whole.size());
  for (std::size_t i = 0; i < whole.size(); ++i) {
    CHECK(split[i].deliver_at == whole[i].deliver_at);
    CHECK(split[i].env == whole[i].env);
  }
}

TEST_CASE("drops converge on the configured probability") {
  const ChannelModel m{0.04, 0.02, 0.2, 77};
  const auto deliveries = channel_deliver(burst(10000, 0.001), m);
  const double survival = static_cast<double>(deliveries.size()) / 10000.0;
  CHECK(survival > 0.76);
  CHECK(survival < 0.84);
}

TEST_CASE("jitter stays inside the half-width and spreads across it") {
  const ChannelModel m{0.1, 0.05, 0.0, 31};
  const auto deliveries = channel_deliver(burst(2000, 0.01), m);
  REQUIRE(deliveries.size() == 2000);
  double lo = 1e9, hi = -1e9;
  for (const Delivery& d : deliveries) {
    const double latency = d.deliver_at - d.env.sent_at();
    CHECK(latency >= 0.05 - 1e-12);
    CHECK(latency <= 0.15 + 1e-12);
    lo = std::min(lo, latency);
    hi = std::max(hi, latency);
  }
  CHECK(lo < 0.075);  // the draw actually explores the range
  CHECK(hi > 0.125);
}

TEST_CASE("nothing is delivered into the past") {
  const ChannelModel m{0.04, 0.02, 0.0, 3};
  const auto deliveries = channel_deliver({msg(MessageKind::Ack, 2, 1, 1.0)}, m, 5.0);
  REQUIRE(deliveries.size() == 1);
  CHECK(deliveries[0].deliver_at >= 5.0);
}

TEST_CASE("different seeds and resends roll different dice") {
  auto msgs = burst(500, 0.01);
  const auto a = channel_deliver(msgs, {0.04, 0.02, 0.3, 1});
  const auto b = channel_deliver(msgs, {0.04, 0.02, 0.3, 2});
  CHECK(a.size() != b.size());  // overwhelmingly likely across 500 draws

  // The same seq retransmitted later is a new lottery ticket: over many
  // resends of a dropped message, some copy eventually survives.
  const ChannelModel lossy{0.04, 0.0, 0.5, 11};
  int survived = 0;
  for (int resend = 0; resend < 64; ++resend) {
    const auto out =
        channel_deliver({msg(MessageKind::GameEvent, 1, 42, 0.2 * resend)}, lossy);
    survived += static_cast<int>(out.size());
  }
  CHECK(survived > 0);
  CHECK(survived < 64);
}
