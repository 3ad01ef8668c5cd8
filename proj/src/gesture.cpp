#include "proxysync/gesture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxysync/errors.hpp"

namespace proxysync {

const char* gesture_phase_name(GesturePhase p) {
  switch (p) {
    case GesturePhase::Idle: return "idle";
    case GesturePhase::Targeting: return "targeting";
    case GesturePhase::Locked: return "locked";
    case GesturePhase::Grabbing: return "grabbing";
  }
  return "unknown";
}

const char* gesture_command_name(GestureCommandKind k) {
  switch (k) {
    case GestureCommandKind::Push: return "push";
    case GestureCommandKind::Pull: return "pull";
    case GestureCommandKind::Slide: return "slide";
    case GestureCommandKind::Grab: return "grab";
    case GestureCommandKind::Release: return "release";
  }
  return "unknown";
}

namespace {

// Nearest object within the aim cone, or nothing. Objects directly under the
// wrist count as aimed (the ray direction is meaningless there).
std::optional<std::string> aimed_object(const WristSample& sample,
                                        const std::vector<NamedPoint>& objects,
                                        const GestureConfig& cfg) {
  std::optional<std::string> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const NamedPoint& obj : objects) {
    Vec2 to_obj = obj.position - sample.pose.position;
    double dist = to_obj.norm();
    if (dist >= 1e-9) {
      double cos_err = std::clamp(sample.palm_dir.dot(to_obj) / dist, -1.0, 1.0);
      if (std::acos(cos_err) > cfg.aim_half_angle) continue;
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = obj.id;
    }
  }
  return best;
}

}  // namespace

GestureState update_targeting(const GestureState& state, const WristSample& sample,
                              const std::vector<NamedPoint>& objects,
                              const GestureConfig& cfg, double dt,
                              std::vector<GestureCueEvent>& events) {
  if (state.phase == GesturePhase::Grabbing) return state;
  std::optional<std::string> aimed = aimed_object(sample, objects, cfg);

  switch (state.phase) {
    case GesturePhase::Idle:
      if (aimed) {
        events.push_back({GestureCue::Shake, *aimed});
        return {GesturePhase::Targeting, *aimed, 0.0};
      }
      return state;
    case GesturePhase::Targeting: {
      if (!aimed) return {};
      if (*aimed != state.object_id) {
        events.push_back({GestureCue::Shake, *aimed});
        return {GesturePhase::Targeting, *aimed, 0.0};
      }
      double dwell = state.dwell_elapsed + dt;
      if (dwell >= cfg.dwell_target) {
        events.push_back({GestureCue::Glow, state.object_id});
        return {GesturePhase::Locked, state.object_id, 0.0};
      }
      return {GesturePhase::Targeting, state.object_id, dwell};
    }
    case GesturePhase::Locked:
      if (aimed && *aimed != state.object_id) {
        events.push_back({GestureCue::Shake, *aimed});
        return {GesturePhase::Targeting, *aimed, 0.0};
      }
      return state;
    case GesturePhase::Grabbing:
      break;
  }
  return state;
}

std::optional<GestureCommand> classify_motion(const std::vector<WristSample>& window,
                                              const Vec2& user_pos,
                                              const Vec2& object_pos,
                                              const GestureConfig& cfg) {
  if ((object_pos - user_pos).norm() < 1e-6) {
    raise(Err::DegenerateAxis, "object coincides with the user position");
  }
  if (window.size() < 2) return std::nullopt;
  double span = window.back().time - window.front().time;
  if (span < cfg.window) return std::nullopt;

  Vec2 mean_v = (window.back().pose.position - window.front().pose.position) * (1.0 / span);
  Vec2 axis = normalized(object_pos - user_pos);
  double radial = mean_v.dot(axis);
  Vec2 lateral = mean_v - axis * radial;

  if (radial > cfg.v_thresh) return GestureCommand{GestureCommandKind::Push, {}};
  if (radial < -cfg.v_thresh) return GestureCommand{GestureCommandKind::Pull, {}};
  if (lateral.norm() > cfg.v_thresh) {
    return GestureCommand{GestureCommandKind::Slide, normalized(lateral)};
  }
  return std::nullopt;
}

namespace {

// Entry/exit parameters of the ray p(t) = origin + t*dir against the
// workspace rectangle (the classic slab intersection).
struct RaySpan {
  double enter = 0.0;
  double exit = 0.0;
  bool hit = false;
};

RaySpan ray_span(const Vec2& origin, const Vec2& dir, const Rect& r) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const double o[2] = {origin.x, origin.y};
  const double d[2] = {dir.x, dir.y};
  const double bound[2] = {r.half_width, r.half_depth};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-12) {
      if (std::abs(o[axis]) > bound[axis]) return {};
      continue;
    }
    double t1 = (-bound[axis] - o[axis]) / d[axis];
    double t2 = (bound[axis] - o[axis]) / d[axis];
    lo = std::max(lo, std::min(t1, t2));
    hi = std::min(hi, std::max(t1, t2));
  }
  if (lo > hi || hi < 0.0) return {};
  return {std::max(lo, 0.0), hi, true};
}

}  // namespace

Vec2 command_target(const GestureCommand& cmd, const Vec2& object_pos,
                    const Vec2& user_pos, const SharedWorkspace& ws) {
  int tile = tile_of(object_pos, ws);
  switch (cmd.kind) {
    case GestureCommandKind::Push:
    case GestureCommandKind::Pull: {
      Vec2 dir = object_pos - user_pos;
      if (dir.norm() >= 1e-9) {
        RaySpan span = ray_span(user_pos, dir, ws.bounds);
        if (span.hit) {
          double t = cmd.kind == GestureCommandKind::Push ? span.exit : span.enter;
          tile = tile_of(user_pos + dir * t, ws);
        }
      }
      break;
    }
    case GestureCommandKind::Slide: {
      int col = (tile - 1) % 3;
      int row = (tile - 1) / 3;
      if (std::abs(cmd.slide_dir.x) >= std::abs(cmd.slide_dir.y)) {
        col = std::clamp(col + (cmd.slide_dir.x > 0.0 ? 1 : -1), 0, 2);
      } else {
        row = std::clamp(row + (cmd.slide_dir.y > 0.0 ? -1 : 1), 0, 2);
      }
      tile = row * 3 + col + 1;
      break;
    }
    case GestureCommandKind::Grab:
    case GestureCommandKind::Release:
      break;  // no travel destination; keep the current tile
  }
  return tile_center(tile, ws);
}

bool grab_check(const Vec2& wrist, const Vec2& object_pos, const GestureConfig& cfg) {
  return distance(wrist, object_pos) <= cfg.reach;
}

}  // namespace proxysync
