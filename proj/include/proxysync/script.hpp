#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proxysync/channel.hpp"
#include "proxysync/geometry.hpp"
#include "proxysync/gesture.hpp"
#include "proxysync/mapping.hpp"
#include "proxysync/proxy.hpp"
#include "proxysync/record.hpp"

namespace proxysync {

// How each room targets its proxies: chase the freshest replica pose
// ("live") or the delay-compensated rendered pose ("rendered").
enum class TrackMode { Live, Rendered };

const char* track_mode_name(TrackMode mode);

enum class ActionKind {
  WristWarp,   // teleport the wrist, optionally setting the palm direction
  WristMove,   // trapezoidal wrist move toward a point
  Aim,         // keep the palm pointed at an object ("off" to stop)
  Stroke,      // constant wrist velocity for a fixed duration
  Reach,       // close on an object's rendered pose until it can be grabbed
  Grab,        // grab an object (retries until within reach)
  Release,     // let go of whatever is held
  ObjectMove,  // scripted straight glide of an object
  TttMove,     // full board move: approach, grab, carry to cell, release
};

const char* action_kind_name(ActionKind kind);

struct ScriptAction {
  double t = 0.0;       // start time; for triggered actions, delay after fire
  int room = 0;
  ActionKind kind = ActionKind::WristWarp;
  std::string object;   // Aim/Reach/Grab/ObjectMove target ("off" clears aim)
  Vec2 point;           // destination (WristWarp/WristMove/ObjectMove)
  Vec2 palm;            // palm direction for WristWarp (0,0 keeps current)
  Vec2 velocity;        // Stroke velocity
  double speed = 0.0;   // WristMove/Reach/ObjectMove speed
  double duration = 0.0;  // Stroke duration
  int cell = 0;         // TttMove board cell (1..9)
  std::string trigger;  // non-empty: starts when this trigger fires
};

// Fires once when the named object's rendered pose in `room` comes within
// `radius` of `point` (room view frame); releases all actions that carry
// its id.
struct ScriptTrigger {
  std::string id;
  int room = 0;
  std::string object;
  Vec2 point;
  double radius = 0.0;
};

// Records a latched contact when the rendered poses of `a` and `b` in
// `room` come within `radius` of each other.
struct ContactWatch {
  int room = 0;
  std::string a;
  std::string b;
  double radius = 0.0;
};

struct ScriptObject {
  std::string id;
  int owner = 0;  // room id
  Pose2 pose;     // initial pose in the owner's view frame
};

struct ScriptProxy {
  int proxy_id = 0;
  int room = 0;
  Pose2 pose;  // initial pose in the room's local frame
};

struct BindingSpec {
  MappingPolicy policy = MappingPolicy::OneToOne;
  std::vector<std::string> objects;  // OneToOne/ManyToOne: one; OneToMany: pool
  int proxy_id = 0;                  // OneToOne only
  double margin = 0.05;              // OneToMany hysteresis margin
};

struct ScenarioScript {
  std::string name;
  double dt = 0.02;
  double duration = 0.0;
  double delay = 0.0;  // render delay applied to remote entities
  std::uint64_t seed = 0;
  TrackMode track = TrackMode::Live;
  double glide_speed = 0.45;  // commanded-object travel speed
  double carry_speed = 0.25;  // wrist speed while carrying a board token
  ChannelModel channel{0.0, 0.0, 0.0, 0};  // seed field unused; run seed wins
  RobotLimits limits;
  GestureConfig gesture;
  std::vector<RoomConfig> rooms;
  std::vector<ScriptObject> objects;
  std::vector<ScriptProxy> proxies;
  std::vector<BindingSpec> bindings;
  std::vector<ScriptAction> timeline;
  std::vector<ScriptTrigger> triggers;
  std::vector<ContactWatch> watches;
};

// Canonical text form: one record per line, deterministic field order.
std::string serialize_script(const ScenarioScript& script);
ScenarioScript parse_script(const std::string& text);

// Raises Err::ScriptValidation (with a location hint) on any structural
// problem: unknown references, duplicate ids, non-cardinal seats, channel
// parameters out of range, unsorted timeline, bad action parameters.
void validate_script(const ScenarioScript& script);

}  // namespace proxysync
