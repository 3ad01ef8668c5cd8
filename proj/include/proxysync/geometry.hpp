#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "proxysync/errors.hpp"

namespace proxysync {

inline constexpr double kPi = 3.14159265358979323846;

// Normalize an angle to (-pi, pi].
double wrap_angle(double a);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

// Unit vector along v; zero-length input raises DegenerateAxis.
Vec2 normalized(Vec2 v);

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// A planar pose: position plus heading normalized to (-pi, pi].
struct Pose2 {
  Vec2 position;
  double heading = 0.0;
  bool operator==(const Pose2&) const = default;
};

inline Pose2 make_pose(double x, double y, double heading) {
  return Pose2{{x, y}, wrap_angle(heading)};
}

// Rigid planar motion: rotate about the origin, then translate.
struct RigidTransform2 {
  double rotation = 0.0;  // normalized to (-pi, pi]
  Vec2 translation;
};

Vec2 apply(const RigidTransform2& t, Vec2 p);
Pose2 apply(const RigidTransform2& t, const Pose2& p);
RigidTransform2 compose(const RigidTransform2& a, const RigidTransform2& b);
RigidTransform2 inverse(const RigidTransform2& t);

// Axis-aligned table extents measured from the table centre.
struct Rect {
  double half_width = 0.0;
  double half_depth = 0.0;
  bool operator==(const Rect&) const = default;
};

struct RoomConfig {
  int room_id = 0;
  Rect table;
  double seat_angle = 0.0;  // angular position of the seated user, local frame
};

struct SharedWorkspace {
  Rect bounds;
};

// Canonical seat: every room's user is mapped to the south edge.
inline constexpr double kCanonicalSeatAngle = -kPi / 2.0;

bool is_cardinal(double angle, double tol = 1e-9);

// Raises NonCardinalRotation unless the seat sits on a table edge
// (seat_angle a multiple of pi/2) and the table extents are positive.
void validate_room(const RoomConfig& room);

// Local -> canonical-view transform rotating the user's seat to the
// canonical south seat; rotation = wrap(-pi/2 - seat_angle), translation zero
// (the local frame is already centred on the table).
RigidTransform2 localize_room(const RoomConfig& room);

// Extents of a table after a cardinal rotation (quarter turns swap the
// half-extents). Raises NonCardinalRotation otherwise.
Rect transformed_extents(const Rect& table, const RigidTransform2& t);

// Componentwise minimum of all localized table extents; the largest region
// reachable on every physical table. Raises EmptyRoomSet.
SharedWorkspace shared_workspace(const std::vector<RoomConfig>& rooms);

Vec2 clamp_to_rect(Vec2 p, const Rect& r);
Vec2 clamp_to_workspace(Vec2 p, const SharedWorkspace& ws);

// 3x3 partition of the workspace. Seen from the canonical south seat the far
// row is tiles 1,2,3 (left to right), the middle row 4,5,6, the near row
// 7,8,9. Points outside the bounds are clamped first.
int tile_of(Vec2 p, const SharedWorkspace& ws);

// Centre of tile 1..9; raises BadTileIndex otherwise.
Vec2 tile_center(int tile, const SharedWorkspace& ws);

// A labelled point in the plane (scene object, demand site, ...).
struct NamedPoint {
  std::string id;
  Vec2 position;
};

}  // namespace proxysync
