#include "proxysync/sync.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"

using namespace proxysync;

namespace {

EntitySnapshot snap(const std::string& id, double x, std::int64_t us, std::uint32_t seq,
                    std::uint8_t room) {
  return {id, make_pose(x, 0.0, 0.0), {us, seq, room}};
}

}  // namespace

TEST_CASE("stamps order by time, then sequence, then room") {
  CHECK(Stamp{1000, 5, 1} < Stamp{2000, 0, 0});
  CHECK(Stamp{1000, 5, 1} < Stamp{1000, 6, 0});
  CHECK(Stamp{1000, 5, 1} < Stamp{1000, 5, 2});
  CHECK(Stamp{1000, 5, 1} == Stamp{1000, 5, 1});
  CHECK_FALSE(Stamp{2000, 0, 0} < Stamp{1000, 5, 1});
}

TEST_CASE("reconcile keeps the newest stamp and ignores the rest") {
  Replica r;
  CHECK(reconcile(r, snap("mug", 0.1, 1000, 1, 1)));
  CHECK(r.at("mug").pose.position.x == doctest::Approx(0.1));

  // Stale and duplicate arrivals are no-ops.
  CHECK_FALSE(reconcile(r, snap("mug", 0.9, 500, 9, 9)));
  CHECK_FALSE(reconcile(r, snap("mug", 0.9, 1000, 1, 1)));
  CHECK(r.at("mug").pose.position.x == doctest::Approx(0.1));

  CHECK(reconcile(r, snap("mug", 0.2, 1000, 2, 1)));  // same time, higher seq
  CHECK(r.at("mug").pose.position.x == doctest::Approx(0.2));

  CHECK(reconcile(r, snap("jug", 0.5, 100, 1, 2)));  // entities are independent
  CHECK(r.size() == 2);
}

TEST_CASE("replica state is independent of delivery order") {
  std::vector<EntitySnapshot> updates;
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    updates.push_back(snap("e" + std::to_string(i % 5), (i % 17) * 0.01,
                           1000 * (rng() % 50), static_cast<std::uint32_t>(rng() % 20),
                           static_cast<std::uint8_t>(1 + (rng() % 2))));
  }

  Replica in_order;
  for (const auto& u : updates) reconcile(in_order, u);

  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = updates;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Replica r;
    for (const auto& u : shuffled) reconcile(r, u);
    REQUIRE(r.size() == in_order.size());
    for (const auto& [id, s] : in_order) {
      CHECK(r.at(id) == s);
    }
  }
}

TEST_CASE("delay buffer replays the timeline a fixed delay late") {
  DelayBuffer buf(1.0);
  CHECK(buf.empty());
  buf.push(0.0, make_pose(0.0, 0.0, 0.0));
  buf.push(1.0, make_pose(1.0, 0.5, 0.0));
  CHECK(buf.size() == 2);

  // Linear interpolation at t - delay.
  const Pose2 mid = buf.delayed_view(1.5);
  CHECK(mid.position.x == doctest::Approx(0.5));
  CHECK(mid.position.y == doctest::Approx(0.25));

  // Exactly on a sample.
  CHECK(buf.delayed_view(1.0).position.x == doctest::Approx(0.0));
  CHECK(buf.delayed_view(2.0).position.x == doctest::Approx(1.0));

  // Beyond the newest sample the last pose holds.
  CHECK(buf.delayed_view(10.0).position.x == doctest::Approx(1.0));

  // Before the recorded timeline there is nothing to show.
  CHECK_THROWS_AS(buf.delayed_view(0.5), Error);
}

TEST_CASE("heading interpolates along the shortest arc") {
  DelayBuffer buf(0.0);
  buf.push(0.0, make_pose(0.0, 0.0, 3.0));
  buf.push(1.0, make_pose(0.0, 0.0, -3.0));
  // Halfway between 3.0 and -3.0 through the pi seam.
  const double h = buf.delayed_view(0.5).heading;
  CHECK(std::abs(wrap_angle(h - kPi)) < 1e-9);
  // A quarter of the way: 3.0 plus a quarter of the 0.2832 rad gap.
  const double q = buf.delayed_view(0.25).heading;
  CHECK(q == doctest::Approx(3.0 + 0.25 * (2.0 * kPi - 6.0)));
}

TEST_CASE("old samples are pruned but the query horizon survives") {
  DelayBuffer buf(0.5);
  for (int i = 0; i <= 1000; ++i) {
    buf.push(i * 0.02, make_pose(i * 0.01, 0.0, 0.0));
  }
  // Everything the delayed queries can reach is still there...
  CHECK(buf.oldest_time() <= buf.newest_time() - 2.0 * buf.delay() + 1e-9);
  // ...but the buffer does not hoard the whole history.
  CHECK(buf.size() < 200);

  const Pose2 p = buf.delayed_view(buf.newest_time());
  CHECK(p.position.x == doctest::Approx((buf.newest_time() - 0.5) * 0.5));
}

TEST_CASE("mask_check is a closed comparison of arrival and contact") {
  CHECK(mask_check(1.0, 2.0));
  CHECK(mask_check(2.0, 2.0));
  CHECK_FALSE(mask_check(2.01, 2.0));
}
