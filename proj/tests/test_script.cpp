#include "proxysync/script.hpp"

#include "doctest.h"

#include "proxysync/scenarios.hpp"

using namespace proxysync;

namespace {

// Minimal structurally valid two-room scenario to mutate in the tests.
ScenarioScript base_script() {
  ScenarioScript s;
  s.name = "fixture";
  s.duration = 2.0;
  s.delay = 0.5;
  s.seed = 7;
  s.channel = {0.04, 0.02, 0.05, 0};
  s.rooms = {{1, {0.6, 0.4}, -kPi / 2.0}, {2, {0.5, 0.35}, 0.0}};
  s.objects = {{"mug", 1, make_pose(0.0, -0.2, 0.0)}};
  s.proxies = {{2, 2, make_pose(-0.2, 0.0, 0.0)}};
  s.bindings = {{MappingPolicy::OneToOne, {"mug"}, 2, 0.05}};

  ScriptAction warp;
  warp.t = 0.2;
  warp.room = 1;
  warp.kind = ActionKind::WristWarp;
  warp.point = {0.0, -0.5};
  warp.palm = {0.0, 1.0};
  s.timeline.push_back(warp);

  ScriptTrigger trig;
  trig.id = "arrival";
  trig.room = 2;
  trig.object = "mug";
  trig.point = {0.0, -0.2};
  trig.radius = 0.05;
  s.triggers.push_back(trig);

  ScriptAction reach;
  reach.t = 0.0;
  reach.room = 2;
  reach.kind = ActionKind::Reach;
  reach.object = "mug";
  reach.speed = 0.4;
  reach.trigger = "arrival";
  s.timeline.push_back(reach);

  ContactWatch watch;
  watch.room = 1;
  watch.a = "mug";
  watch.b = "mug";
  s.watches.push_back(watch);
  s.watches.clear();  // watches exercised separately

  return s;
}

}  // namespace

TEST_CASE("the canonical text form round-trips byte for byte") {
  const ScenarioScript s = base_script();
  validate_script(s);
  const std::string text = serialize_script(s);
  const ScenarioScript back = parse_script(text);
  validate_script(back);
  CHECK(serialize_script(back) == text);
}

TEST_CASE("every built-in scenario validates and round-trips") {
  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    const ScenarioScript s = builtin_scenario(name);
    const std::string text = serialize_script(s);
    const ScenarioScript back = parse_script(text);
    validate_script(back);
    CHECK(serialize_script(back) == text);
    CHECK(back.name == name);
    CHECK(is_builtin_scenario(name));
  }
  CHECK_FALSE(is_builtin_scenario("no_such_thing"));
  CHECK_THROWS_AS(builtin_scenario("no_such_thing"), Error);
}

TEST_CASE("integer seat degrees survive the text form exactly") {
  ScenarioScript s = base_script();
  const std::string text = serialize_script(s);
  const ScenarioScript back = parse_script(text);
  REQUIRE(back.rooms.size() == 2);
  // A cardinal seat must still be cardinal at the engine's 1e-9 tolerance
  // after a round-trip, or localization would reject the file.
  CHECK(is_cardinal(back.rooms[0].seat_angle));
  CHECK(is_cardinal(back.rooms[1].seat_angle));
  CHECK(back.rooms[0].seat_angle == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("parse rejects unknown record kinds and missing fields") {
  CHECK_THROWS_AS(parse_script("kind=volcano lava=1\n"), Error);
  CHECK_THROWS_AS(parse_script("kind=meta name=x\n"), Error);  // no dt/duration
  CHECK_THROWS_AS(parse_script(""), Error);
  // Events with an unknown action name fail at parse time.
  ScenarioScript s = base_script();
  std::string text = serialize_script(s);
  const std::string needle = "action=wrist_warp";
  text.replace(text.find(needle), needle.size(), "action=wrist_warpp");
  CHECK_THROWS_AS(parse_script(text), Error);
}

TEST_CASE("validation pinpoints structural problems") {
  auto expect_invalid = [](ScenarioScript s) {
    CHECK_THROWS_AS(validate_script(s), Error);
  };

  {
    ScenarioScript s = base_script();
    s.name = "";
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.dt = 0.0;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.duration = -1.0;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.delay = -0.5;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.channel.drop_prob = 1.5;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.rooms.push_back({3, {0.5, 0.5}, 0.0});
    expect_invalid(s);  // more than two rooms
  }
  {
    ScenarioScript s = base_script();
    s.rooms[1].room_id = 1;
    expect_invalid(s);  // duplicate room id
  }
  {
    ScenarioScript s = base_script();
    s.rooms[0].seat_angle = 0.4;
    expect_invalid(s);  // seat not on a table edge
  }
  {
    ScenarioScript s = base_script();
    s.objects.push_back({"mug", 2, {}});
    expect_invalid(s);  // duplicate object id
  }
  {
    ScenarioScript s = base_script();
    s.objects[0].owner = 9;
    expect_invalid(s);  // owner is not a room
  }
  {
    ScenarioScript s = base_script();
    s.proxies.push_back({2, 1, {}});
    expect_invalid(s);  // duplicate proxy id
  }
  {
    ScenarioScript s = base_script();
    s.bindings[0].objects = {"ghost"};
    expect_invalid(s);  // binding references a missing object
  }
  {
    ScenarioScript s = base_script();
    s.bindings[0].proxy_id = 42;
    expect_invalid(s);  // binding references a missing proxy
  }
  {
    ScenarioScript s = base_script();
    s.bindings.push_back({MappingPolicy::OneToOne, {"mug"}, 2, 0.05});
    expect_invalid(s);  // the same object bound twice
  }
  {
    ScenarioScript s = base_script();
    s.timeline[0].room = 5;
    expect_invalid(s);  // event in an unknown room
  }
  {
    ScenarioScript s = base_script();
    ScriptAction late = s.timeline[0];
    late.t = 0.1;  // scheduled after the t=0.2 warp: out of order
    s.timeline.push_back(late);
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.timeline[1].trigger = "no_such_trigger";
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.timeline[1].speed = -0.1;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    ScriptAction ttt;
    ttt.t = 1.0;
    ttt.room = 1;
    ttt.kind = ActionKind::TttMove;
    ttt.cell = 11;
    s.timeline.insert(s.timeline.begin() + 1, ttt);
    expect_invalid(s);  // board cells are 1..9
  }
  {
    ScenarioScript s = base_script();
    s.triggers[0].radius = 0.0;
    expect_invalid(s);
  }
  {
    ScenarioScript s = base_script();
    s.triggers.push_back(s.triggers[0]);
    expect_invalid(s);  // duplicate trigger id
  }
  {
    ScenarioScript s = base_script();
    ContactWatch w;
    w.room = 1;
    w.a = "mug";
    w.b = "ghost";
    w.radius = 0.1;
    s.watches.push_back(w);
    expect_invalid(s);  // watch references a missing object
  }
  {
    ScenarioScript s = base_script();
    BindingSpec many;
    many.policy = MappingPolicy::ManyToOne;
    many.objects = {"mug"};
    s.bindings = {many};
    expect_invalid(s);  // many_to_one needs one proxy in every room
  }
}

TEST_CASE("trigger-released actions may sit out of time order") {
  ScenarioScript s = base_script();
  // The triggered reach has t=0.0 but sits after the t=0.2 warp: legal,
  // because its t is a delay after the trigger fires, not a schedule slot.
  CHECK(s.timeline[1].t < s.timeline[0].t);
  CHECK_NOTHROW(validate_script(s));
}

TEST_CASE("mode and action names are stable") {
  CHECK(std::string(track_mode_name(TrackMode::Live)) == "live");
  CHECK(std::string(track_mode_name(TrackMode::Rendered)) == "rendered");
  CHECK(std::string(action_kind_name(ActionKind::WristWarp)) == "wrist_warp");
  CHECK(std::string(action_kind_name(ActionKind::TttMove)) == "ttt_move");
  CHECK(std::string(action_kind_name(ActionKind::ObjectMove)) == "object_move");
}
