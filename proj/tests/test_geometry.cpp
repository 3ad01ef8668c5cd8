#include "proxysync/geometry.hpp"

#include <random>

#include "doctest.h"

using namespace proxysync;

namespace {

RoomConfig demo_room_a() { return {1, {0.6, 0.4}, -kPi / 2.0}; }
RoomConfig demo_room_b() { return {2, {0.5, 0.35}, 0.0}; }

}  // namespace

TEST_CASE("wrap_angle maps onto the half-open interval (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // -pi is excluded
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(5.0) == doctest::Approx(5.0 - 2.0 * kPi));
  CHECK(wrap_angle(-5.0) == doctest::Approx(2.0 * kPi - 5.0));
  CHECK(wrap_angle(0.1 - 6.0 * kPi) == doctest::Approx(0.1));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> big(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = big(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    // Same direction: the difference is a whole number of turns.
    const double turns = (a - w) / (2.0 * kPi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  }
}

TEST_CASE("Vec2 arithmetic and norms") {
  const Vec2 a{3.0, 4.0};
  const Vec2 b{-1.0, 2.0};
  CHECK((a + b) == Vec2{2.0, 6.0});
  CHECK((a - b) == Vec2{4.0, 2.0});
  CHECK((a * 0.5) == Vec2{1.5, 2.0});
  CHECK(a.dot(b) == doctest::Approx(5.0));
  CHECK(a.norm() == doctest::Approx(5.0));
  CHECK(distance(a, b) == doctest::Approx(std::sqrt(16.0 + 4.0)));
  CHECK(normalized(a).x == doctest::Approx(0.6));
  CHECK(normalized(a).y == doctest::Approx(0.8));
  CHECK_THROWS_AS(normalized(Vec2{0.0, 0.0}), Error);
}

TEST_CASE("make_pose wraps the heading") {
  CHECK(make_pose(0, 0, 3.0 * kPi).heading == doctest::Approx(kPi));
  CHECK(make_pose(0, 0, -kPi / 2.0).heading == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("rigid transforms rotate about the origin then translate") {
  const RigidTransform2 quarter{kPi / 2.0, {1.0, 0.0}};
  const Vec2 p = apply(quarter, Vec2{1.0, 0.0});
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(1.0));

  const Pose2 q = apply(quarter, make_pose(0.0, 1.0, 0.0));
  CHECK(q.position.x == doctest::Approx(0.0));
  CHECK(q.position.y == doctest::Approx(0.0));
  CHECK(q.heading == doctest::Approx(kPi / 2.0));
}

TEST_CASE("compose and inverse round-trip random points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> ang(-8.0, 8.0);
  for (int i = 0; i < 500; ++i) {
    const RigidTransform2 t{wrap_angle(ang(rng)), {coord(rng), coord(rng)}};
    const RigidTransform2 u{wrap_angle(ang(rng)), {coord(rng), coord(rng)}};
    const Vec2 p{coord(rng), coord(rng)};
    const Vec2 via_compose = apply(compose(t, u), p);
    const Vec2 via_both = apply(t, apply(u, p));
    CHECK(via_compose.x == doctest::Approx(via_both.x));
    CHECK(via_compose.y == doctest::Approx(via_both.y));
    const Vec2 back = apply(inverse(t), apply(t, p));
    CHECK(back.x == doctest::Approx(p.x));
    CHECK(back.y == doctest::Approx(p.y));
  }
}

TEST_CASE("is_cardinal accepts quarter turns only") {
  CHECK(is_cardinal(0.0));
  CHECK(is_cardinal(kPi / 2.0));
  CHECK(is_cardinal(-kPi));
  CHECK(is_cardinal(2.0 * kPi));
  CHECK(is_cardinal(kPi / 2.0 + 1e-12));
  CHECK_FALSE(is_cardinal(0.3));
  CHECK_FALSE(is_cardinal(kPi / 4.0));
  CHECK(is_cardinal(kPi / 4.0, kPi));  // tolerance is honoured
}

TEST_CASE("localize_room rotates the seat onto the canonical south edge") {
  CHECK(localize_room(demo_room_a()).rotation == doctest::Approx(0.0));
  CHECK(localize_room(demo_room_a()).translation == Vec2{0.0, 0.0});
  CHECK(localize_room(demo_room_b()).rotation == doctest::Approx(-kPi / 2.0));

  RoomConfig north{3, {0.5, 0.5}, kPi / 2.0};
  CHECK(localize_room(north).rotation == doctest::Approx(kPi));  // wrapped from -pi
  RoomConfig east{4, {0.5, 0.5}, kPi};
  CHECK(localize_room(east).rotation == doctest::Approx(kPi / 2.0));

  // Whatever the seat, the user lands on the south edge.
  for (double seat : {0.0, kPi / 2.0, kPi, -kPi / 2.0}) {
    RoomConfig rc{5, {0.5, 0.5}, seat};
    const Vec2 seat_pos{0.5 * std::cos(seat), 0.5 * std::sin(seat)};
    const Vec2 in_view = apply(localize_room(rc), seat_pos);
    CHECK(in_view.x == doctest::Approx(0.0));
    CHECK(in_view.y == doctest::Approx(-0.5));
  }

  RoomConfig skew{6, {0.5, 0.5}, 0.3};
  CHECK_THROWS_AS(validate_room(skew), Error);
  CHECK_THROWS_AS(shared_workspace({skew}), Error);  // non-cardinal rotation
  RoomConfig flat{7, {0.0, 0.5}, 0.0};
  CHECK_THROWS_AS(validate_room(flat), Error);
}

TEST_CASE("transformed_extents swaps half-extents on quarter turns") {
  const Rect r{0.5, 0.35};
  CHECK(transformed_extents(r, {0.0, {}}) == Rect{0.5, 0.35});
  CHECK(transformed_extents(r, {kPi / 2.0, {}}) == Rect{0.35, 0.5});
  CHECK(transformed_extents(r, {-kPi / 2.0, {}}) == Rect{0.35, 0.5});
  CHECK(transformed_extents(r, {kPi, {}}) == Rect{0.5, 0.35});
  CHECK_THROWS_AS(transformed_extents(r, {0.4, {}}), Error);
}

TEST_CASE("shared workspace is the componentwise minimum of localized tables") {
  const SharedWorkspace ws = shared_workspace({demo_room_a(), demo_room_b()});
  CHECK(ws.bounds.half_width == doctest::Approx(0.35));
  CHECK(ws.bounds.half_depth == doctest::Approx(0.4));

  // A single room is its own workspace.
  const SharedWorkspace solo = shared_workspace({demo_room_a()});
  CHECK(solo.bounds == Rect{0.6, 0.4});

  CHECK_THROWS_AS(shared_workspace({}), Error);
}

TEST_CASE("clamping to rectangles") {
  const Rect r{0.5, 0.35};
  CHECK(clamp_to_rect({0.7, -1.0}, r) == Vec2{0.5, -0.35});
  CHECK(clamp_to_rect({0.1, 0.2}, r) == Vec2{0.1, 0.2});
  const SharedWorkspace ws{{0.35, 0.4}};
  CHECK(clamp_to_workspace({-9.0, 9.0}, ws) == Vec2{-0.35, 0.4});
}

TEST_CASE("tile numbering walks far row to near row, left to right") {
  const SharedWorkspace ws{{0.35, 0.4}};
  // Frozen centres for the demo pair workspace.
  const Vec2 c1 = tile_center(1, ws);
  CHECK(c1.x == doctest::Approx(-0.7 / 3.0));
  CHECK(c1.y == doctest::Approx(0.8 / 3.0));
  CHECK(tile_center(5, ws) == Vec2{0.0, 0.0});
  const Vec2 c9 = tile_center(9, ws);
  CHECK(c9.x == doctest::Approx(0.7 / 3.0));
  CHECK(c9.y == doctest::Approx(-0.8 / 3.0));
  CHECK(tile_center(2, ws).y == doctest::Approx(0.8 / 3.0));
  CHECK(tile_center(4, ws).x == doctest::Approx(-0.7 / 3.0));

  for (int tile = 1; tile <= 9; ++tile) {
    CHECK(tile_of(tile_center(tile, ws), ws) == tile);
  }

  const SharedWorkspace wide{{0.6, 0.4}};
  CHECK(tile_center(4, wide).x == doctest::Approx(-0.4));
  CHECK(tile_center(6, wide).x == doctest::Approx(0.4));
  for (int tile = 1; tile <= 9; ++tile) {
    CHECK(tile_of(tile_center(tile, wide), wide) == tile);
  }

  CHECK_THROWS_AS(tile_center(0, ws), Error);
  CHECK_THROWS_AS(tile_center(10, ws), Error);

  // Corners land in the corner tiles; out-of-bounds points clamp first.
  CHECK(tile_of({-0.35, 0.4}, ws) == 1);
  CHECK(tile_of({0.35, 0.4}, ws) == 3);
  CHECK(tile_of({-0.35, -0.4}, ws) == 7);
  CHECK(tile_of({0.35, -0.4}, ws) == 9);
  CHECK(tile_of({-99.0, 99.0}, ws) == 1);
  CHECK(tile_of({99.0, -99.0}, ws) == 9);
  CHECK(tile_of({0.0, 0.0}, ws) == 5);
}
