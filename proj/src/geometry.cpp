#include "proxysync/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace proxysync {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;            // half-open at -pi, closed at +pi
  return r;
}

Vec2 normalized(Vec2 v) {
  double n = v.norm();
  if (n < 1e-12) raise(Err::DegenerateAxis, "cannot normalize zero-length vector");
  return {v.x / n, v.y / n};
}

Vec2 apply(const RigidTransform2& t, Vec2 p) {
  double c = std::cos(t.rotation), s = std::sin(t.rotation);
  return {c * p.x - s * p.y + t.translation.x, s * p.x + c * p.y + t.translation.y};
}

Pose2 apply(const RigidTransform2& t, const Pose2& p) {
  return {apply(t, p.position), wrap_angle(p.heading + t.rotation)};
}

RigidTransform2 compose(const RigidTransform2& a, const RigidTransform2& b) {
  return {wrap_angle(a.rotation + b.rotation), apply(a, b.translation)};
}

RigidTransform2 inverse(const RigidTransform2& t) {
  double c = std::cos(t.rotation), s = std::sin(t.rotation);
  // R(-rot) * (-translation)
  Vec2 inv_t{-(c * t.translation.x + s * t.translation.y),
             -(-s * t.translation.x + c * t.translation.y)};
  return {wrap_angle(-t.rotation), inv_t};
}

bool is_cardinal(double angle, double tol) {
  double k = std::round(angle / (kPi / 2.0));
  return std::abs(angle - k * (kPi / 2.0)) <= tol;
}

void validate_room(const RoomConfig& room) {
  if (!(room.table.half_width > 0.0) || !(room.table.half_depth > 0.0))
    raise(Err::ScriptValidation,
          "room " + std::to_string(room.room_id) + " has non-positive table extents");
  if (!is_cardinal(room.seat_angle))
    raise(Err::NonCardinalRotation,
          "room " + std::to_string(room.room_id) + " seat is not on a table edge");
}

RigidTransform2 localize_room(const RoomConfig& room) {
  return {wrap_angle(kCanonicalSeatAngle - room.seat_angle), {0.0, 0.0}};
}

Rect transformed_extents(const Rect& table, const RigidTransform2& t) {
  double k = std::round(t.rotation / (kPi / 2.0));
  if (std::abs(t.rotation - k * (kPi / 2.0)) > 1e-9)
    raise(Err::NonCardinalRotation, "rotation is not a quarter-turn multiple");
  bool quarter = (static_cast<long long>(k) % 2) != 0;
  return quarter ? Rect{table.half_depth, table.half_width} : table;
}

SharedWorkspace shared_workspace(const std::vector<RoomConfig>& rooms) {
  if (rooms.empty()) raise(Err::EmptyRoomSet, "no rooms to intersect");
  Rect bounds{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  for (const RoomConfig& room : rooms) {
    Rect r = transformed_extents(room.table, localize_room(room));
    bounds.half_width = std::min(bounds.half_width, r.half_width);
    bounds.half_depth = std::min(bounds.half_depth, r.half_depth);
  }
  return {bounds};
}

Vec2 clamp_to_rect(Vec2 p, const Rect& r) {
  return {std::clamp(p.x, -r.half_width, r.half_width),
          std::clamp(p.y, -r.half_depth, r.half_depth)};
}

Vec2 clamp_to_workspace(Vec2 p, const SharedWorkspace& ws) {
  return clamp_to_rect(p, ws.bounds);
}

int tile_of(Vec2 p, const SharedWorkspace& ws) {
  p = clamp_to_workspace(p, ws);
  double cw = 2.0 * ws.bounds.half_width / 3.0;
  double cd = 2.0 * ws.bounds.half_depth / 3.0;
  int col = std::clamp(static_cast<int>(std::floor((p.x + ws.bounds.half_width) / cw)), 0, 2);
  int row = std::clamp(static_cast<int>(std::floor((ws.bounds.half_depth - p.y) / cd)), 0, 2);
  return row * 3 + col + 1;
}

Vec2 tile_center(int tile, const SharedWorkspace& ws) {
  if (tile < 1 || tile > 9) raise(Err::BadTileIndex, "tile " + std::to_string(tile));
  int col = (tile - 1) % 3;
  int row = (tile - 1) / 3;
  return {(col - 1) * (2.0 * ws.bounds.half_width / 3.0),
          (1 - row) * (2.0 * ws.bounds.half_depth / 3.0)};
}

}  // namespace proxysync
