#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <string>

#include "proxysync/geometry.hpp"

namespace proxysync {

// Total order over snapshot origins: sender logical time first, then sender
// sequence, then room id as the final tie-break.
struct Stamp {
  std::int64_t sent_at_us = 0;
  std::uint32_t seq = 0;
  std::uint8_t room_id = 0;
  auto operator<=>(const Stamp&) const = default;
};

struct EntitySnapshot {
  std::string entity_id;
  Pose2 pose;  // in the owning sender's canonical view frame
  Stamp stamp;
  bool operator==(const EntitySnapshot&) const = default;
};

// One stored snapshot per entity; last writer wins.
using Replica = std::map<std::string, EntitySnapshot>;

// Keep the incoming snapshot iff its stamp beats the stored one. Duplicates
// and stale arrivals are no-ops, which makes application commutative and
// idempotent over any delivery order. Returns whether the snapshot was kept.
bool reconcile(Replica& replica, const EntitySnapshot& snap);

// Replays a pose timeline a fixed delay late: a query at time t interpolates
// the recorded samples at t - delay (linear in position, shortest arc in
// heading). Queries earlier than the first sample raise Underflow; queries
// beyond the newest sample hold the last pose. Samples older than twice the
// delay (plus slack) behind the newest are pruned, keeping the horizon the
// queries need.
class DelayBuffer {
 public:
  explicit DelayBuffer(double delay) : delay_(delay) {}

  void push(double time, const Pose2& pose);
  Pose2 delayed_view(double t) const;

  double delay() const { return delay_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double oldest_time() const { return samples_.front().first; }
  double newest_time() const { return samples_.back().first; }

 private:
  double delay_;
  std::deque<std::pair<double, Pose2>> samples_;
};

// The proxy is in place iff it physically arrived no later than the user saw
// the contact happen.
inline bool mask_check(double robot_arrival, double rendered_contact) {
  return robot_arrival <= rendered_contact;
}

}  // namespace proxysync
