#include "proxysync/script.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "proxysync/errors.hpp"

namespace proxysync {

namespace {

constexpr double kEps = 1e-9;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  raise(Err::ScriptValidation, where + ": " + what);
}

}  // namespace

const char* track_mode_name(TrackMode mode) {
  return mode == TrackMode::Live ? "live" : "rendered";
}

const char* action_kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::WristWarp: return "wrist_warp";
    case ActionKind::WristMove: return "wrist_move";
    case ActionKind::Aim: return "aim";
    case ActionKind::Stroke: return "stroke";
    case ActionKind::Reach: return "reach";
    case ActionKind::Grab: return "grab";
    case ActionKind::Release: return "release";
    case ActionKind::ObjectMove: return "object_move";
    case ActionKind::TttMove: return "ttt_move";
  }
  return "?";
}

namespace {

ActionKind action_kind_from(const std::string& name, const std::string& where) {
  for (ActionKind k : {ActionKind::WristWarp, ActionKind::WristMove,
                       ActionKind::Aim, ActionKind::Stroke, ActionKind::Reach,
                       ActionKind::Grab, ActionKind::Release,
                       ActionKind::ObjectMove, ActionKind::TttMove}) {
    if (name == action_kind_name(k)) return k;
  }
  fail(where, "unknown action '" + name + "'");
}

TrackMode track_mode_from(const std::string& name, const std::string& where) {
  if (name == "live") return TrackMode::Live;
  if (name == "rendered") return TrackMode::Rendered;
  fail(where, "unknown track mode '" + name + "'");
}

MappingPolicy policy_from(const std::string& name, const std::string& where) {
  if (name == "one_to_one") return MappingPolicy::OneToOne;
  if (name == "many_to_one") return MappingPolicy::ManyToOne;
  if (name == "one_to_many") return MappingPolicy::OneToMany;
  fail(where, "unknown policy '" + name + "'");
}

const char* policy_name(MappingPolicy policy) {
  switch (policy) {
    case MappingPolicy::OneToOne: return "one_to_one";
    case MappingPolicy::ManyToOne: return "many_to_one";
    case MappingPolicy::OneToMany: return "one_to_many";
  }
  return "?";
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += '|';
    out += ids[i];
  }
  return out;
}

std::vector<std::string> split_ids(const std::string& joined) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : joined) {
    if (c == '|') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Record event_record(const ScriptAction& a) {
  Record r;
  r.set("kind", "event");
  if (!a.trigger.empty()) r.set("trigger", a.trigger);
  r.set_num("t", a.t);
  r.set_int("room", a.room);
  r.set("action", action_kind_name(a.kind));
  switch (a.kind) {
    case ActionKind::WristWarp:
      r.set_num("x", a.point.x);
      r.set_num("y", a.point.y);
      if (a.palm.x != 0.0 || a.palm.y != 0.0) {
        r.set_num("palm_x", a.palm.x);
        r.set_num("palm_y", a.palm.y);
      }
      break;
    case ActionKind::WristMove:
      r.set_num("x", a.point.x);
      r.set_num("y", a.point.y);
      r.set_num("speed", a.speed);
      break;
    case ActionKind::Aim:
      r.set("object", a.object);
      break;
    case ActionKind::Stroke:
      r.set_num("vx", a.velocity.x);
      r.set_num("vy", a.velocity.y);
      r.set_num("duration", a.duration);
      break;
    case ActionKind::Reach:
      r.set("object", a.object);
      r.set_num("speed", a.speed);
      break;
    case ActionKind::Grab:
      r.set("object", a.object);
      break;
    case ActionKind::Release:
      break;
    case ActionKind::ObjectMove:
      r.set("object", a.object);
      r.set_num("x", a.point.x);
      r.set_num("y", a.point.y);
      r.set_num("speed", a.speed);
      break;
    case ActionKind::TttMove:
      r.set_int("cell", a.cell);
      break;
  }
  return r;
}

ScriptAction event_from(const Record& r, const std::string& where) {
  ScriptAction a;
  a.trigger = r.get_or("trigger", "");
  a.t = r.get_num("t");
  a.room = static_cast<int>(r.get_int("room"));
  a.kind = action_kind_from(r.get("action"), where);
  switch (a.kind) {
    case ActionKind::WristWarp:
      a.point = {r.get_num("x"), r.get_num("y")};
      a.palm = {r.get_num_or("palm_x", 0.0), r.get_num_or("palm_y", 0.0)};
      break;
    case ActionKind::WristMove:
      a.point = {r.get_num("x"), r.get_num("y")};
      a.speed = r.get_num("speed");
      break;
    case ActionKind::Aim:
      a.object = r.get("object");
      break;
    case ActionKind::Stroke:
      a.velocity = {r.get_num("vx"), r.get_num("vy")};
      a.duration = r.get_num("duration");
      break;
    case ActionKind::Reach:
      a.object = r.get("object");
      a.speed = r.get_num("speed");
      break;
    case ActionKind::Grab:
      a.object = r.get("object");
      break;
    case ActionKind::Release:
      break;
    case ActionKind::ObjectMove:
      a.object = r.get("object");
      a.point = {r.get_num("x"), r.get_num("y")};
      a.speed = r.get_num("speed");
      break;
    case ActionKind::TttMove:
      a.cell = static_cast<int>(r.get_int("cell"));
      break;
  }
  return a;
}

}  // namespace

std::string serialize_script(const ScenarioScript& s) {
  std::vector<Record> records;

  Record meta;
  meta.set("kind", "meta");
  meta.set("name", s.name);
  meta.set_num("dt", s.dt);
  meta.set_num("duration", s.duration);
  meta.set_num("delay", s.delay);
  meta.set_int("seed", static_cast<long long>(s.seed));
  meta.set("track", track_mode_name(s.track));
  meta.set_num("glide", s.glide_speed);
  meta.set_num("carry", s.carry_speed);
  records.push_back(meta);

  Record chan;
  chan.set("kind", "channel");
  chan.set_num("base", s.channel.base_latency);
  chan.set_num("jitter", s.channel.jitter);
  chan.set_num("drop", s.channel.drop_prob);
  records.push_back(chan);

  Record lim;
  lim.set("kind", "limits");
  lim.set_num("v_max", s.limits.v_max);
  lim.set_num("w_max", s.limits.w_max);
  lim.set_num("pos_tol", s.limits.arrive_pos_tol);
  lim.set_num("heading_tol", s.limits.arrive_heading_tol);
  records.push_back(lim);

  Record ges;
  ges.set("kind", "gesture");
  ges.set_num("aim", s.gesture.aim_half_angle);
  ges.set_num("dwell", s.gesture.dwell_target);
  ges.set_num("v_thresh", s.gesture.v_thresh);
  ges.set_num("window", s.gesture.window);
  ges.set_num("reach", s.gesture.reach);
  records.push_back(ges);

  for (const RoomConfig& room : s.rooms) {
    Record r;
    r.set("kind", "room");
    r.set_int("room", room.room_id);
    r.set_num("half_width", room.table.half_width);
    r.set_num("half_depth", room.table.half_depth);
    // Seats are quarter-turn positions; whole degrees keep them exact across
    // the text round trip (deg/180*pi is an exact power-of-two scaling of pi).
    r.set_int("seat_deg", std::llround(room.seat_angle * 180.0 / kPi));
    records.push_back(r);
  }
  for (const ScriptObject& o : s.objects) {
    Record r;
    r.set("kind", "object");
    r.set("object", o.id);
    r.set_int("owner", o.owner);
    r.set_num("x", o.pose.position.x);
    r.set_num("y", o.pose.position.y);
    r.set_num("heading", o.pose.heading);
    records.push_back(r);
  }
  for (const ScriptProxy& p : s.proxies) {
    Record r;
    r.set("kind", "proxy");
    r.set_int("proxy", p.proxy_id);
    r.set_int("room", p.room);
    r.set_num("x", p.pose.position.x);
    r.set_num("y", p.pose.position.y);
    r.set_num("heading", p.pose.heading);
    records.push_back(r);
  }
  for (const BindingSpec& b : s.bindings) {
    Record r;
    r.set("kind", "binding");
    r.set("policy", policy_name(b.policy));
    switch (b.policy) {
      case MappingPolicy::OneToOne:
        r.set("object", b.objects.at(0));
        r.set_int("proxy", b.proxy_id);
        break;
      case MappingPolicy::ManyToOne:
        r.set("object", b.objects.at(0));
        break;
      case MappingPolicy::OneToMany:
        r.set("objects", join_ids(b.objects));
        r.set_num("margin", b.margin);
        break;
    }
    records.push_back(r);
  }
  for (const ScriptTrigger& t : s.triggers) {
    Record r;
    r.set("kind", "trigger");
    r.set("trigger", t.id);
    r.set_int("room", t.room);
    r.set("object", t.object);
    r.set_num("x", t.point.x);
    r.set_num("y", t.point.y);
    r.set_num("radius", t.radius);
    records.push_back(r);
  }
  for (const ContactWatch& w : s.watches) {
    Record r;
    r.set("kind", "watch");
    r.set_int("room", w.room);
    r.set("a", w.a);
    r.set("b", w.b);
    r.set_num("radius", w.radius);
    records.push_back(r);
  }
  for (const ScriptAction& a : s.timeline) records.push_back(event_record(a));

  return serialize_records(records);
}

ScenarioScript parse_script(const std::string& text) {
  ScenarioScript s;
  bool saw_meta = false;
  std::vector<Record> records;
  try {
    records = parse_records(text);
  } catch (const Error& e) {
    fail("script", e.what());
  }
  int line = 0;
  for (const Record& r : records) {
    ++line;
    const std::string where = "record " + std::to_string(line);
    std::string kind;
    try {
      kind = r.get("kind");
    } catch (const Error&) {
      fail(where, "missing kind field");
    }
    try {
      if (kind == "meta") {
        saw_meta = true;
        s.name = r.get("name");
        s.dt = r.get_num("dt");
        s.duration = r.get_num("duration");
        s.delay = r.get_num("delay");
        s.seed = static_cast<std::uint64_t>(r.get_int("seed"));
        s.track = track_mode_from(r.get("track"), where);
        s.glide_speed = r.get_num("glide");
        s.carry_speed = r.get_num("carry");
      } else if (kind == "channel") {
        s.channel.base_latency = r.get_num("base");
        s.channel.jitter = r.get_num("jitter");
        s.channel.drop_prob = r.get_num("drop");
      } else if (kind == "limits") {
        s.limits.v_max = r.get_num("v_max");
        s.limits.w_max = r.get_num("w_max");
        s.limits.arrive_pos_tol = r.get_num("pos_tol");
        s.limits.arrive_heading_tol = r.get_num("heading_tol");
      } else if (kind == "gesture") {
        s.gesture.aim_half_angle = r.get_num("aim");
        s.gesture.dwell_target = r.get_num("dwell");
        s.gesture.v_thresh = r.get_num("v_thresh");
        s.gesture.window = r.get_num("window");
        s.gesture.reach = r.get_num("reach");
      } else if (kind == "room") {
        RoomConfig room;
        room.room_id = static_cast<int>(r.get_int("room"));
        room.table.half_width = r.get_num("half_width");
        room.table.half_depth = r.get_num("half_depth");
        room.seat_angle = static_cast<double>(r.get_int("seat_deg")) / 180.0 * kPi;
        s.rooms.push_back(room);
      } else if (kind == "object") {
        ScriptObject o;
        o.id = r.get("object");
        o.owner = static_cast<int>(r.get_int("owner"));
        o.pose = make_pose(r.get_num("x"), r.get_num("y"), r.get_num("heading"));
        s.objects.push_back(o);
      } else if (kind == "proxy") {
        ScriptProxy p;
        p.proxy_id = static_cast<int>(r.get_int("proxy"));
        p.room = static_cast<int>(r.get_int("room"));
        p.pose = make_pose(r.get_num("x"), r.get_num("y"), r.get_num("heading"));
        s.proxies.push_back(p);
      } else if (kind == "binding") {
        BindingSpec b;
        b.policy = policy_from(r.get("policy"), where);
        switch (b.policy) {
          case MappingPolicy::OneToOne:
            b.objects = {r.get("object")};
            b.proxy_id = static_cast<int>(r.get_int("proxy"));
            break;
          case MappingPolicy::ManyToOne:
            b.objects = {r.get("object")};
            break;
          case MappingPolicy::OneToMany:
            b.objects = split_ids(r.get("objects"));
            b.margin = r.get_num("margin");
            break;
        }
        s.bindings.push_back(b);
      } else if (kind == "trigger") {
        ScriptTrigger t;
        t.id = r.get("trigger");
        t.room = static_cast<int>(r.get_int("room"));
        t.object = r.get("object");
        t.point = {r.get_num("x"), r.get_num("y")};
        t.radius = r.get_num("radius");
        s.triggers.push_back(t);
      } else if (kind == "watch") {
        ContactWatch w;
        w.room = static_cast<int>(r.get_int("room"));
        w.a = r.get("a");
        w.b = r.get("b");
        w.radius = r.get_num("radius");
        s.watches.push_back(w);
      } else if (kind == "event") {
        s.timeline.push_back(event_from(r, where));
      } else {
        fail(where, "unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Err::ScriptValidation) throw;
      fail(where, e.what());
    }
  }
  if (!saw_meta) fail("script", "missing meta record");
  return s;
}

void validate_script(const ScenarioScript& s) {
  if (s.name.empty()) fail("meta", "empty scenario name");
  if (!(s.dt > 0.0)) fail("meta", "dt must be positive");
  if (!(s.duration > 0.0)) fail("meta", "duration must be positive");
  if (s.delay < 0.0) fail("meta", "delay must be non-negative");
  if (!(s.glide_speed > 0.0)) fail("meta", "glide speed must be positive");
  if (!(s.carry_speed > 0.0)) fail("meta", "carry speed must be positive");
  if (s.channel.base_latency < 0.0) fail("channel", "base latency must be non-negative");
  if (s.channel.jitter < 0.0) fail("channel", "jitter must be non-negative");
  if (s.channel.drop_prob < 0.0 || s.channel.drop_prob > 1.0)
    fail("channel", "drop probability must lie in [0, 1]");
  if (!(s.limits.v_max > 0.0) || !(s.limits.w_max > 0.0))
    fail("limits", "speed limits must be positive");
  if (!(s.limits.arrive_pos_tol > 0.0) || !(s.limits.arrive_heading_tol > 0.0))
    fail("limits", "arrival tolerances must be positive");

  if (s.rooms.empty()) fail("rooms", "at least one room required");
  if (s.rooms.size() > 2) fail("rooms", "at most two rooms supported");
  std::set<int> room_ids;
  for (const RoomConfig& room : s.rooms) {
    const std::string where = "room " + std::to_string(room.room_id);
    if (!room_ids.insert(room.room_id).second) fail(where, "duplicate room id");
    try {
      validate_room(room);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  std::set<std::string> object_ids;
  for (const ScriptObject& o : s.objects) {
    const std::string where = "object " + o.id;
    if (o.id.empty()) fail("object", "empty object id");
    if (!object_ids.insert(o.id).second) fail(where, "duplicate object id");
    if (!room_ids.count(o.owner)) fail(where, "unknown owner room");
  }

  std::set<int> proxy_ids;
  std::map<int, int> proxies_per_room;
  for (const ScriptProxy& p : s.proxies) {
    const std::string where = "proxy " + std::to_string(p.proxy_id);
    if (!proxy_ids.insert(p.proxy_id).second) fail(where, "duplicate proxy id");
    if (!room_ids.count(p.room)) fail(where, "unknown room");
    ++proxies_per_room[p.room];
  }

  std::set<std::string> bound_objects;
  for (std::size_t i = 0; i < s.bindings.size(); ++i) {
    const BindingSpec& b = s.bindings[i];
    const std::string where = "binding " + std::to_string(i + 1);
    if (b.objects.empty()) fail(where, "no objects listed");
    for (const std::string& id : b.objects) {
      if (!object_ids.count(id)) fail(where, "unknown object '" + id + "'");
      if (!bound_objects.insert(id).second)
        fail(where, "object '" + id + "' bound more than once");
    }
    switch (b.policy) {
      case MappingPolicy::OneToOne:
        if (!proxy_ids.count(b.proxy_id)) fail(where, "unknown proxy");
        break;
      case MappingPolicy::ManyToOne:
        for (const RoomConfig& room : s.rooms) {
          if (proxies_per_room[room.room_id] != 1)
            fail(where, "many_to_one needs exactly one proxy per room");
        }
        break;
      case MappingPolicy::OneToMany:
        if (!(b.margin > 0.0)) fail(where, "margin must be positive");
        break;
    }
  }

  std::set<std::string> trigger_ids;
  for (const ScriptTrigger& t : s.triggers) {
    const std::string where = "trigger " + t.id;
    if (t.id.empty()) fail("trigger", "empty trigger id");
    if (!trigger_ids.insert(t.id).second) fail(where, "duplicate trigger id");
    if (!room_ids.count(t.room)) fail(where, "unknown room");
    if (!object_ids.count(t.object)) fail(where, "unknown object");
    if (!(t.radius > 0.0)) fail(where, "radius must be positive");
  }

  for (std::size_t i = 0; i < s.watches.size(); ++i) {
    const ContactWatch& w = s.watches[i];
    const std::string where = "watch " + std::to_string(i + 1);
    if (!room_ids.count(w.room)) fail(where, "unknown room");
    if (!object_ids.count(w.a)) fail(where, "unknown object '" + w.a + "'");
    if (!object_ids.count(w.b)) fail(where, "unknown object '" + w.b + "'");
    if (!(w.radius > 0.0)) fail(where, "radius must be positive");
  }

  double last_t = -1.0;
  for (std::size_t i = 0; i < s.timeline.size(); ++i) {
    const ScriptAction& a = s.timeline[i];
    const std::string where = "event " + std::to_string(i + 1);
    if (a.t < 0.0) fail(where, "negative start time");
    if (!room_ids.count(a.room)) fail(where, "unknown room");
    if (a.trigger.empty()) {
      if (a.t < last_t - kEps) fail(where, "timeline events out of order");
      last_t = std::max(last_t, a.t);
    } else if (!trigger_ids.count(a.trigger)) {
      fail(where, "unknown trigger '" + a.trigger + "'");
    }
    switch (a.kind) {
      case ActionKind::Aim:
        if (a.object != "off" && !object_ids.count(a.object))
          fail(where, "unknown object '" + a.object + "'");
        break;
      case ActionKind::Reach:
      case ActionKind::Grab:
      case ActionKind::ObjectMove:
        if (!object_ids.count(a.object))
          fail(where, "unknown object '" + a.object + "'");
        if (a.kind != ActionKind::Grab && !(a.speed > 0.0))
          fail(where, "speed must be positive");
        break;
      case ActionKind::WristMove:
        if (!(a.speed > 0.0)) fail(where, "speed must be positive");
        break;
      case ActionKind::Stroke:
        if (!(a.duration > 0.0)) fail(where, "duration must be positive");
        break;
      case ActionKind::TttMove:
        if (a.cell < 1 || a.cell > 9) fail(where, "cell must lie in 1..9");
        break;
      case ActionKind::WristWarp:
      case ActionKind::Release:
        break;
    }
  }
}

}  // namespace proxysync
