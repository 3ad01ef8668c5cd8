#pragma once

#include <cstdint>
#include <vector>

#include "proxysync/wire.hpp"

namespace proxysync {

// Deterministic lossy-link model. Every message's fate (drop decision and
// jitter draw) comes from a stream derived from (seed, room, kind, seq,
// sent_at_us), so the schedule is a pure function of the message set and the
// model: batching, call order, and interleaving cannot change it, while a
// retransmission (same seq, later send time) gets fresh draws.
struct ChannelModel {
  double base_latency = 0.0;  // s
  double jitter = 0.0;        // s, uniform half-width
  double drop_prob = 0.0;     // [0, 1]
  std::uint64_t seed = 0;
};

struct Delivery {
  double deliver_at = 0.0;
  Envelope env;
};

// Survivors of the drop lottery, scheduled at
//   max(now, sent_at, sent_at + base_latency + jitter * u),   u ~ U[-1, 1],
// and sorted by (deliver_at, room, kind, seq, sent_at_us) so ties break the
// same way everywhere.
std::vector<Delivery> channel_deliver(const std::vector<Envelope>& msgs,
                                      const ChannelModel& model, double now = 0.0);

}  // namespace proxysync
