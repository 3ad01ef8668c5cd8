#include "proxysync/proxy.hpp"

#include <algorithm>
#include <cmath>

#include "proxysync/errors.hpp"

namespace proxysync {

const char* motion_status_name(MotionStatus s) {
  switch (s) {
    case MotionStatus::Idle: return "idle";
    case MotionStatus::Rotating: return "rotating";
    case MotionStatus::Translating: return "translating";
    case MotionStatus::Arrived: return "arrived";
    case MotionStatus::Carrying: return "carrying";
  }
  return "unknown";
}

RobotState step_robot(const RobotState& s, const MotionCommand& c, double dt,
                      const RobotLimits& lim) {
  if (!(dt > 0.0)) raise(Err::CommandOutOfLimits, "dt must be positive");
  const double eps = 1e-9;
  if (std::abs(c.v) > lim.v_max + eps || std::abs(c.w) > lim.w_max + eps) {
    raise(Err::CommandOutOfLimits, "motion command exceeds robot limits");
  }
  RobotState out = s;
  out.pose.heading = wrap_angle(s.pose.heading + c.w * dt);
  out.pose.position.x += c.v * dt * std::cos(out.pose.heading);
  out.pose.position.y += c.v * dt * std::sin(out.pose.heading);
  return out;
}

MotionCommand drive_to(RobotState& s, const Vec2& target, const RobotLimits& lim) {
  if (s.status == MotionStatus::Carrying) return {0.0, 0.0};
  const Vec2 delta = target - s.pose.position;
  const double dist = delta.norm();
  if (dist <= lim.arrive_pos_tol) {
    s.status = MotionStatus::Arrived;
    return {0.0, 0.0};
  }
  const double bearing = std::atan2(delta.y, delta.x);
  const double err = wrap_angle(bearing - s.pose.heading);
  const double w = std::clamp(err / kControlDt, -lim.w_max, lim.w_max);
  if (std::abs(err) > lim.arrive_heading_tol) {
    s.status = MotionStatus::Rotating;
    return {0.0, w};
  }
  s.status = MotionStatus::Translating;
  const double v = std::min(lim.v_max, dist / kControlDt);
  return {v, w};
}

double travel_time_bound(const RobotState& s, const Vec2& target,
                         const RobotLimits& lim) {
  const double margin = 0.2;
  const double dist = distance(s.pose.position, target);
  if (dist <= lim.arrive_pos_tol) return margin;
  return kPi / lim.w_max + dist / lim.v_max + margin;
}

}  // namespace proxysync
