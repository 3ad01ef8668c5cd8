#include "proxysync/proxy.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace proxysync;

namespace {

const RobotLimits kLim{};  // 0.5 m/s, 2*pi rad/s, 0.01 m, 0.1 rad

double settle(RobotState& s, const Vec2& target, const RobotLimits& lim,
              double max_time = 60.0) {
  double t = 0.0;
  while (t < max_time) {
    const MotionCommand cmd = drive_to(s, target, lim);
    if (s.status == MotionStatus::Arrived) return t;
    s = step_robot(s, cmd, kControlDt, lim);
    t += kControlDt;
  }
  return max_time;
}

}  // namespace

TEST_CASE("step_robot integrates heading first, then position") {
  const RobotState s{make_pose(0.0, 0.0, 0.0), MotionStatus::Idle};
  const RobotState r = step_robot(s, {0.5, kPi}, 0.02, kLim);
  const double h = kPi * 0.02;
  CHECK(r.pose.heading == doctest::Approx(h));
  CHECK(r.pose.position.x == doctest::Approx(0.01 * std::cos(h)));
  CHECK(r.pose.position.y == doctest::Approx(0.01 * std::sin(h)));

  // Pure rotation holds position; pure translation holds heading.
  const RobotState rot = step_robot(s, {0.0, 2.0 * kPi}, 0.02, kLim);
  CHECK(rot.pose.position == Vec2{0.0, 0.0});
  CHECK(rot.pose.heading == doctest::Approx(0.04 * kPi));
  const RobotState fwd = step_robot(s, {0.5, 0.0}, 0.02, kLim);
  CHECK(fwd.pose.position.x == doctest::Approx(0.01));
  CHECK(fwd.pose.heading == doctest::Approx(0.0));
}

TEST_CASE("step_robot rejects out-of-limit commands and bad dt") {
  const RobotState s;
  CHECK_THROWS_AS(step_robot(s, {0.51, 0.0}, 0.02, kLim), Error);
  CHECK_THROWS_AS(step_robot(s, {-0.51, 0.0}, 0.02, kLim), Error);
  CHECK_THROWS_AS(step_robot(s, {0.0, 6.3}, 0.02, kLim), Error);
  CHECK_THROWS_AS(step_robot(s, {0.1, 0.0}, 0.0, kLim), Error);
  CHECK_THROWS_AS(step_robot(s, {0.1, 0.0}, -0.02, kLim), Error);
}

TEST_CASE("drive_to stops inside the arrival tolerance") {
  RobotState s{make_pose(0.0, 0.0, 2.0), MotionStatus::Idle};
  const MotionCommand cmd = drive_to(s, {0.008, 0.0}, kLim);
  CHECK(s.status == MotionStatus::Arrived);
  CHECK(cmd.v == doctest::Approx(0.0));
  CHECK(cmd.w == doctest::Approx(0.0));
}

TEST_CASE("drive_to rotates in place while the bearing error is large") {
  RobotState s{make_pose(0.0, 0.0, 0.0), MotionStatus::Idle};
  const MotionCommand cmd = drive_to(s, {0.0, 1.0}, kLim);
  CHECK(s.status == MotionStatus::Rotating);
  CHECK(cmd.v == doctest::Approx(0.0));
  CHECK(cmd.w == doctest::Approx(kLim.w_max));  // saturated quarter-turn

  // A tiny residual error rotates at exactly the landing rate instead.
  RobotState t{make_pose(0.0, 0.0, 0.12), MotionStatus::Idle};
  const MotionCommand fine = drive_to(t, {1.0, 0.0}, kLim);
  CHECK(t.status == MotionStatus::Rotating);
  CHECK(fine.w == doctest::Approx(-0.12 / kControlDt));
}

TEST_CASE("drive_to translates at v_max, capped to land in one step") {
  RobotState s{make_pose(0.0, 0.0, 0.0), MotionStatus::Idle};
  const MotionCommand cruise = drive_to(s, {1.0, 0.0}, kLim);
  CHECK(s.status == MotionStatus::Translating);
  CHECK(cruise.v == doctest::Approx(0.5));
  CHECK(cruise.w == doctest::Approx(0.0));

  // With a tolerance tighter than one full-speed step, the landing cap bites:
  // 8 mm to go in one 20 ms step is 0.4 m/s.
  RobotLimits tight = kLim;
  tight.arrive_pos_tol = 0.001;
  RobotState t{make_pose(0.0, 0.0, 0.0), MotionStatus::Idle};
  const MotionCommand landing = drive_to(t, {0.008, 0.0}, tight);
  CHECK(t.status == MotionStatus::Translating);
  CHECK(landing.v == doctest::Approx(0.4));

  // Small bearing errors are steered during translation, not stopped for.
  RobotState u{make_pose(0.0, 0.0, 0.05), MotionStatus::Idle};
  const MotionCommand steer = drive_to(u, {1.0, 0.0}, kLim);
  CHECK(u.status == MotionStatus::Translating);
  CHECK(steer.v == doctest::Approx(0.5));
  CHECK(steer.w == doctest::Approx(-0.05 / kControlDt));
}

TEST_CASE("a carrying robot ignores drive_to") {
  RobotState s{make_pose(0.1, 0.1, 0.0), MotionStatus::Carrying};
  const MotionCommand cmd = drive_to(s, {1.0, 1.0}, kLim);
  CHECK(s.status == MotionStatus::Carrying);
  CHECK(cmd.v == doctest::Approx(0.0));
  CHECK(cmd.w == doctest::Approx(0.0));
}

TEST_CASE("travel_time_bound frozen values") {
  const RobotState s{make_pose(0.0, 0.0, 0.0), MotionStatus::Idle};
  // Half-turn at w_max (0.5 s) + 2 m at 0.5 m/s + settle margin.
  CHECK(travel_time_bound(s, {1.0, 0.0}, kLim) == doctest::Approx(2.7));
  const double diag = std::hypot(0.25, 0.25);
  CHECK(travel_time_bound(s, {0.25, 0.25}, kLim) ==
        doctest::Approx(0.5 + diag / 0.5 + 0.2));
  // Already there: only the settle margin.
  CHECK(travel_time_bound(s, {0.005, 0.0}, kLim) == doctest::Approx(0.2));
}

TEST_CASE("closed-loop journeys arrive within the bound and within limits") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    RobotState s{make_pose(coord(rng), coord(rng), ang(rng)), MotionStatus::Idle};
    const Vec2 target{coord(rng), coord(rng)};
    const double bound = travel_time_bound(s, target, kLim);

    RobotState sim = s;
    double t = 0.0;
    while (t < bound + 1.0) {
      const MotionCommand cmd = drive_to(sim, target, kLim);
      if (sim.status == MotionStatus::Arrived) break;
      CHECK(std::abs(cmd.v) <= kLim.v_max + 1e-12);
      CHECK(std::abs(cmd.w) <= kLim.w_max + 1e-12);
      sim = step_robot(sim, cmd, kControlDt, kLim);
      t += kControlDt;
    }
    CHECK(sim.status == MotionStatus::Arrived);
    CHECK(t <= bound);
    CHECK(distance(sim.pose.position, target) <= kLim.arrive_pos_tol);
  }
}

TEST_CASE("arrival never overshoots past the target") {
  RobotState s{make_pose(-0.3, 0.0, 0.0), MotionStatus::Idle};
  const double t = settle(s, {0.3, 0.0}, kLim);
  CHECK(s.status == MotionStatus::Arrived);
  CHECK(t <= travel_time_bound({make_pose(-0.3, 0.0, 0.0), MotionStatus::Idle},
                               {0.3, 0.0}, kLim));
  CHECK(s.pose.position.x <= 0.3 + kLim.arrive_pos_tol);
}
