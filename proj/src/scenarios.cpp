#include "proxysync/scenarios.hpp"

#include <algorithm>

#include "proxysync/errors.hpp"

namespace proxysync {

namespace {

// Every literal below is exact at six decimals, so a script dumped to text
// and parsed back reproduces the builder bit for bit (the trace equality
// tests rely on this). That is also why the yaw-limit default appears as
// 6.283185 rather than 2*pi.

void common_config(ScenarioScript& s) {
  s.dt = 0.02;
  s.glide_speed = 0.45;
  s.carry_speed = 0.25;
  s.limits.v_max = 0.5;
  s.limits.w_max = 6.283185;
  s.limits.arrive_pos_tol = 0.01;
  s.limits.arrive_heading_tol = 0.1;
  s.gesture.aim_half_angle = 0.26;
  s.gesture.dwell_target = 0.5;
  s.gesture.v_thresh = 0.3;
  s.gesture.window = 0.3;
  s.gesture.reach = 0.15;
}

// The two linked demo rooms: a wide table with a south seat and a smaller
// one seen from the east, overlapping in a 0.35 x 0.4 shared workspace.
void demo_room_pair(ScenarioScript& s) {
  s.rooms.push_back({1, {0.6, 0.4}, -kPi / 2.0});
  s.rooms.push_back({2, {0.5, 0.35}, 0.0});
  s.channel.base_latency = 0.04;
  s.channel.jitter = 0.02;
  s.channel.drop_prob = 0.05;
}

ScriptAction act(double t, int room, ActionKind kind) {
  ScriptAction a;
  a.t = t;
  a.room = room;
  a.kind = kind;
  return a;
}

ScenarioScript pass_the_mug() {
  ScenarioScript s;
  s.name = "pass_the_mug";
  common_config(s);
  demo_room_pair(s);
  s.seed = 1;
  s.delay = 1.0;
  s.duration = 8.0;
  s.track = TrackMode::Live;

  s.objects.push_back({"mug", 1, make_pose(0.0, -0.266667, 0.0)});
  s.proxies.push_back({2, 2, make_pose(-0.266667, 0.0, -3.141592)});
  BindingSpec b;
  b.policy = MappingPolicy::OneToOne;
  b.objects = {"mug"};
  b.proxy_id = 2;
  s.bindings.push_back(b);

  ScriptAction a = act(0.2, 2, ActionKind::WristWarp);
  a.point = {0.0, -0.5};
  a.palm = {0.0, -1.0};
  s.timeline.push_back(a);

  a = act(0.5, 1, ActionKind::WristWarp);
  a.point = {0.0, -0.55};
  a.palm = {0.0, 1.0};
  s.timeline.push_back(a);
  a = act(0.5, 1, ActionKind::Aim);
  a.object = "mug";
  s.timeline.push_back(a);
  a = act(1.3, 1, ActionKind::Stroke);
  a.velocity = {0.0, 0.4};
  a.duration = 0.4;
  s.timeline.push_back(a);
  a = act(1.9, 1, ActionKind::Aim);
  a.object = "off";
  s.timeline.push_back(a);

  ScriptTrigger handoff;
  handoff.id = "mug_arrives";
  handoff.room = 2;
  handoff.object = "mug";
  handoff.point = {0.0, -0.266667};
  handoff.radius = 0.05;
  s.triggers.push_back(handoff);

  a = act(0.0, 2, ActionKind::Reach);
  a.object = "mug";
  a.speed = 0.4;
  a.trigger = "mug_arrives";
  s.timeline.push_back(a);
  return s;
}

ScenarioScript clinking_drinks() {
  ScenarioScript s;
  s.name = "clinking_drinks";
  common_config(s);
  demo_room_pair(s);
  s.seed = 2;
  s.delay = 1.0;
  s.duration = 8.0;
  s.track = TrackMode::Live;

  s.objects.push_back({"mug_a", 1, make_pose(0.0, -0.26, 0.0)});
  s.objects.push_back({"mug_b", 2, make_pose(0.0, -0.26, 0.0)});
  s.proxies.push_back({1, 1, make_pose(0.0, 0.26, 1.570796)});
  s.proxies.push_back({2, 2, make_pose(-0.26, 0.0, -3.141592)});
  BindingSpec b;
  b.policy = MappingPolicy::OneToOne;
  b.objects = {"mug_b"};
  b.proxy_id = 1;
  s.bindings.push_back(b);
  b.objects = {"mug_a"};
  b.proxy_id = 2;
  s.bindings.push_back(b);

  ScriptAction a = act(3.0, 1, ActionKind::ObjectMove);
  a.object = "mug_a";
  a.point = {0.0, -0.05};
  a.speed = 0.35;
  s.timeline.push_back(a);
  a = act(3.0, 2, ActionKind::ObjectMove);
  a.object = "mug_b";
  a.point = {0.0, -0.05};
  a.speed = 0.35;
  s.timeline.push_back(a);

  s.watches.push_back({1, "mug_a", "mug_b", 0.12});
  s.watches.push_back({2, "mug_a", "mug_b", 0.12});
  return s;
}

ScenarioScript tic_tac_toe() {
  ScenarioScript s;
  s.name = "tic_tac_toe";
  common_config(s);
  demo_room_pair(s);
  s.seed = 3;
  s.delay = 1.0;
  s.duration = 32.0;
  s.track = TrackMode::Rendered;

  s.objects.push_back({"token", 1, make_pose(0.0, 0.0, 0.0)});
  s.proxies.push_back({1, 1, make_pose(0.0, 0.0, 0.0)});
  s.proxies.push_back({2, 2, make_pose(0.0, 0.0, 0.0)});
  BindingSpec b;
  b.policy = MappingPolicy::ManyToOne;
  b.objects = {"token"};
  s.bindings.push_back(b);

  const int cells[5] = {1, 2, 5, 3, 9};
  for (int i = 0; i < 5; ++i) {
    ScriptAction a = act(2.0 + 6.0 * i, i % 2 == 0 ? 1 : 2, ActionKind::TttMove);
    a.cell = cells[i];
    s.timeline.push_back(a);
  }
  return s;
}

ScenarioScript city_builder() {
  ScenarioScript s;
  s.name = "city_builder";
  common_config(s);
  s.rooms.push_back({1, {0.6, 0.4}, -kPi / 2.0});
  s.seed = 4;
  s.delay = 0.0;
  s.duration = 8.0;
  s.track = TrackMode::Live;

  s.objects.push_back({"b1", 1, make_pose(-0.2, 0.0, 0.0)});
  s.objects.push_back({"b2", 1, make_pose(0.2, 0.0, 0.0)});
  s.objects.push_back({"b3", 1, make_pose(0.0, 0.25, 0.0)});
  s.proxies.push_back({1, 1, make_pose(0.0, -0.3, 0.0)});
  BindingSpec b;
  b.policy = MappingPolicy::OneToMany;
  b.objects = {"b1", "b2", "b3"};
  b.margin = 0.05;
  s.bindings.push_back(b);

  ScriptAction a = act(0.5, 1, ActionKind::WristWarp);
  a.point = {-0.25, -0.15};
  a.palm = {0.0, -1.0};
  s.timeline.push_back(a);
  a = act(1.0, 1, ActionKind::WristMove);
  a.point = {0.25, -0.15};
  a.speed = 0.2;
  s.timeline.push_back(a);
  a = act(5.5, 1, ActionKind::Reach);
  a.object = "b2";
  a.speed = 0.4;
  s.timeline.push_back(a);
  return s;
}

// Single-room gesture fixture: push/pull/slide the mug and check it lands on
// the numbered tile. One fixture per destination tile.
ScenarioScript tile_fixture(int dest_tile) {
  ScenarioScript s;
  s.name = "pass_the_mug_tile_" + std::to_string(dest_tile);
  common_config(s);
  s.rooms.push_back({1, {0.6, 0.4}, -kPi / 2.0});
  s.seed = 10 + static_cast<std::uint64_t>(dest_tile);
  s.delay = 0.0;
  s.duration = 6.0;
  s.track = TrackMode::Live;

  // Mug start and stroke velocity per destination. Tile columns sit at
  // x = -0.4/0/0.4 for this table; strokes are judged against the
  // wrist-to-mug axis, so pushes/pulls run along +y/-y and slides across.
  Vec2 start;
  Vec2 stroke;
  switch (dest_tile) {
    case 1: start = {-0.4, 0.0}; stroke = {0.0, 0.4}; break;
    case 2: start = {0.0, 0.0}; stroke = {0.0, 0.4}; break;
    case 3: start = {0.4, 0.0}; stroke = {0.0, 0.4}; break;
    case 4: start = {0.0, 0.0}; stroke = {-0.35, 0.0}; break;
    case 5: start = {-0.4, 0.0}; stroke = {0.35, 0.0}; break;
    case 6: start = {0.0, 0.0}; stroke = {0.35, 0.0}; break;
    case 7: start = {-0.4, 0.0}; stroke = {0.0, -0.4}; break;
    case 8: start = {0.0, 0.0}; stroke = {0.0, -0.4}; break;
    case 9: start = {0.4, 0.0}; stroke = {0.0, -0.4}; break;
    default: raise(Err::BadTileIndex, "fixture tile out of range");
  }

  s.objects.push_back({"mug", 1, Pose2{start, 0.0}});
  s.proxies.push_back({1, 1, Pose2{start, 0.0}});
  BindingSpec b;
  b.policy = MappingPolicy::OneToOne;
  b.objects = {"mug"};
  b.proxy_id = 1;
  s.bindings.push_back(b);

  ScriptAction a = act(0.5, 1, ActionKind::WristWarp);
  a.point = {start.x, -0.55};
  a.palm = {0.0, 1.0};
  s.timeline.push_back(a);
  a = act(0.5, 1, ActionKind::Aim);
  a.object = "mug";
  s.timeline.push_back(a);
  a = act(1.3, 1, ActionKind::Stroke);
  a.velocity = stroke;
  a.duration = 0.4;
  s.timeline.push_back(a);
  a = act(1.9, 1, ActionKind::Aim);
  a.object = "off";
  s.timeline.push_back(a);
  return s;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names = {"pass_the_mug", "clinking_drinks",
                                    "tic_tac_toe", "city_builder"};
  for (int i = 1; i <= 9; ++i)
    names.push_back("pass_the_mug_tile_" + std::to_string(i));
  return names;
}

bool is_builtin_scenario(const std::string& name) {
  const std::vector<std::string> names = builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ScenarioScript builtin_scenario(const std::string& name) {
  ScenarioScript s;
  if (name == "pass_the_mug") {
    s = pass_the_mug();
  } else if (name == "clinking_drinks") {
    s = clinking_drinks();
  } else if (name == "tic_tac_toe") {
    s = tic_tac_toe();
  } else if (name == "city_builder") {
    s = city_builder();
  } else if (name.rfind("pass_the_mug_tile_", 0) == 0 && name.size() == 19 &&
             name[18] >= '1' && name[18] <= '9') {
    s = tile_fixture(name[18] - '0');
  } else {
    raise(Err::ScriptValidation, "unknown scenario '" + name + "'");
  }
  validate_script(s);
  return s;
}

}  // namespace proxysync
