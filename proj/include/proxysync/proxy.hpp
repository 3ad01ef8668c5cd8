#pragma once

#include "proxysync/geometry.hpp"

namespace proxysync {

// Fixed control period of the simulation loop. The go-to-goal controller is a
// deadbeat law expressed in terms of this period, so it is part of the
// contract rather than a tunable.
inline constexpr double kControlDt = 0.02;

struct RobotLimits {
  double v_max = 0.5;          // m/s
  double w_max = 2.0 * kPi;    // rad/s
  double arrive_pos_tol = 0.01;      // m
  double arrive_heading_tol = 0.1;   // rad
};

enum class MotionStatus { Idle, Rotating, Translating, Arrived, Carrying };

const char* motion_status_name(MotionStatus s);

struct RobotState {
  Pose2 pose;
  MotionStatus status = MotionStatus::Idle;
};

struct MotionCommand {
  double v = 0.0;  // forward, m/s
  double w = 0.0;  // yaw rate, rad/s
};

// Unicycle integration: heading first, then position along the new heading.
// Raises CommandOutOfLimits if |v| or |w| exceeds the limits, and if dt <= 0.
RobotState step_robot(const RobotState& s, const MotionCommand& c, double dt,
                      const RobotLimits& lim);

// Rotate-then-translate go-to-goal law, updating s.status as a side effect:
//  - within arrive_pos_tol of the target: stop, status Arrived;
//  - bearing error above arrive_heading_tol: rotate in place toward the
//    target, saturating at w_max but never past the exact landing rate
//    (error/kControlDt), status Rotating;
//  - otherwise translate at v_max, capping speed to land within one control
//    step (distance/kControlDt) while steering the residual bearing error,
//    status Translating.
// A Carrying robot is hand-held: the command is always (0, 0) and the status
// is left alone.
MotionCommand drive_to(RobotState& s, const Vec2& target, const RobotLimits& lim);

// Conservative arrival-time bound for a drive_to journey: full half-turn at
// w_max, straight-line run at v_max, plus a 0.2 s settle margin. Zero-distance
// targets cost only the margin. Simulated arrival never exceeds this bound.
double travel_time_bound(const RobotState& s, const Vec2& target,
                         const RobotLimits& lim);

}  // namespace proxysync
