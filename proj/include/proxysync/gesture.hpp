#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxysync/geometry.hpp"

namespace proxysync {

// One tracked wrist observation on the table plane.
struct WristSample {
  double time = 0.0;
  Pose2 pose;     // wrist position + palm yaw
  Vec2 palm_dir;  // unit facing direction projected onto the table
};

struct GestureConfig {
  double aim_half_angle = 0.26;  // rad, ~15 degrees
  double dwell_target = 0.5;     // s of continuous aim to lock
  double v_thresh = 0.3;         // m/s stroke classification threshold
  double window = 0.3;           // s of samples a stroke is judged over
  double reach = 0.15;           // m direct-grab range
};

enum class GesturePhase { Idle, Targeting, Locked, Grabbing };

const char* gesture_phase_name(GesturePhase p);

// Per-user targeting machine state. At most one object is ever non-Idle, and
// dwell_elapsed stays below the lock threshold (promotion happens the moment
// it would reach it).
struct GestureState {
  GesturePhase phase = GesturePhase::Idle;
  std::string object_id;
  double dwell_elapsed = 0.0;
};

// Visual cues the machine emits: Shake on entering Targeting, Glow on lock.
enum class GestureCue { Shake, Glow };

struct GestureCueEvent {
  GestureCue cue = GestureCue::Shake;
  std::string object_id;
};

enum class GestureCommandKind { Push, Pull, Slide, Grab, Release };

const char* gesture_command_name(GestureCommandKind k);

struct GestureCommand {
  GestureCommandKind kind = GestureCommandKind::Push;
  Vec2 slide_dir;  // unit vector, Slide only
};

// Advance the targeting machine by one sample:
//  - an object is aimed at when the angle between the palm direction and the
//    wrist-to-object ray is within aim_half_angle; the nearest aimed object
//    wins (ties keep the earlier list entry);
//  - Idle -> Targeting(Shake) on aim; holding aim accumulates dwell and
//    promotes to Locked(Glow) once the dwell target is met; breaking aim
//    while Targeting resets to Idle;
//  - Locked persists until a command executes (callers reset the state) or
//    the user aims at a different object, which restarts Targeting;
//  - Grabbing is externally owned and passes through untouched.
GestureState update_targeting(const GestureState& state, const WristSample& sample,
                              const std::vector<NamedPoint>& objects,
                              const GestureConfig& cfg, double dt,
                              std::vector<GestureCueEvent>& events);

// Classify a locked stroke from the mean wrist velocity across the window,
// decomposed against the user-to-object axis: radial beyond the threshold is
// Push/Pull, otherwise a lateral component beyond the threshold is Slide.
// Returns nothing when the window is too short or the motion is below
// threshold. Raises DegenerateAxis when the object sits on the user.
std::optional<GestureCommand> classify_motion(const std::vector<WristSample>& window,
                                              const Vec2& user_pos,
                                              const Vec2& object_pos,
                                              const GestureConfig& cfg);

// Destination tile centre for a motion command:
//  - Push: the farthest tile the user-to-object ray crosses before leaving
//    the workspace;
//  - Pull: the first tile that ray crosses when entering the workspace;
//  - Slide: the neighbouring tile along the dominant axis of the slide
//    direction, clamped at the grid edge (no wrap).
Vec2 command_target(const GestureCommand& cmd, const Vec2& object_pos,
                    const Vec2& user_pos, const SharedWorkspace& ws);

// True when the wrist is close enough to pick the object up directly.
bool grab_check(const Vec2& wrist, const Vec2& object_pos, const GestureConfig& cfg);

}  // namespace proxysync
