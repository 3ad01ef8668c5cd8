#include "proxysync/sync.hpp"

#include "proxysync/errors.hpp"

namespace proxysync {

bool reconcile(Replica& replica, const EntitySnapshot& snap) {
  auto it = replica.find(snap.entity_id);
  if (it != replica.end() && !(snap.stamp > it->second.stamp)) return false;
  replica[snap.entity_id] = snap;
  return true;
}

void DelayBuffer::push(double time, const Pose2& pose) {
  if (!samples_.empty() && time <= samples_.back().first) return;  // stale
  samples_.emplace_back(time, pose);
  const double horizon = 2.0 * delay_ + 0.5;
  while (samples_.size() > 2 && samples_.front().first < time - horizon) {
    samples_.pop_front();
  }
}

Pose2 DelayBuffer::delayed_view(double t) const {
  if (samples_.empty()) raise(Err::Underflow, "delay buffer has no samples");
  const double query = t - delay_;
  if (query < samples_.front().first - 1e-12) {
    raise(Err::Underflow, "query precedes the buffered horizon");
  }
  if (query >= samples_.back().first) return samples_.back().second;  // hold last
  // Find the bracketing pair around the query time.
  std::size_t hi = 1;
  while (samples_[hi].first < query) ++hi;
  const auto& [t0, p0] = samples_[hi - 1];
  const auto& [t1, p1] = samples_[hi];
  const double span = t1 - t0;
  const double alpha = span > 0.0 ? (query - t0) / span : 1.0;
  Pose2 out;
  out.position = p0.position + (p1.position - p0.position) * alpha;
  out.heading = wrap_angle(p0.heading + wrap_angle(p1.heading - p0.heading) * alpha);
  return out;
}

}  // namespace proxysync
