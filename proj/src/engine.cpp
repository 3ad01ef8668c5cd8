#include "proxysync/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "proxysync/channel.hpp"
#include "proxysync/errors.hpp"
#include "proxysync/gesture.hpp"
#include "proxysync/mapping.hpp"
#include "proxysync/reliable.hpp"
#include "proxysync/sync.hpp"
#include "proxysync/tictactoe.hpp"
#include "proxysync/wire.hpp"

namespace proxysync {

namespace {

constexpr double kPublishHz = 20.0;       // pose republish rate per room
constexpr double kSafetyDistance = 0.06;  // min proxy separation, metres
constexpr double kMoveJump = 0.05;        // target jump that counts as a move
constexpr double kWristAccel = 4.0;       // trapezoid accel for wrist moves

// The partner room's view frame is the own view rotated by half a turn:
// localization pins each user to the south seat, so the same scene seen from
// the opposite seat is the point-reflected one.
Pose2 flip(const Pose2& p) {
  return {{-p.position.x, -p.position.y}, wrap_angle(p.heading + kPi)};
}

struct ObjectSim {
  std::string id;
  int owner = 0;
  Pose2 pose;  // owner view frame
  enum class Motion { Static, Glide, Attached } motion = Motion::Static;
  Vec2 glide_target;
  double glide_speed = 0.0;
  Vec2 attach_offset;  // pose = owner wrist + offset while Attached
};

struct WristSim {
  Vec2 pos{0.0, -0.55};
  Vec2 palm{0.0, -1.0};
  std::string aim_object;
  enum class Mode { Hold, Move, Stroke, Reach } mode = Mode::Hold;
  Vec2 move_from, move_to;
  double move_speed = 0.0, move_elapsed = 0.0, move_dist = 0.0;
  Vec2 stroke_v;
  double stroke_left = 0.0;
  std::string reach_object;
  double reach_speed = 0.0;
  std::string grab_pending;  // object to grab as soon as it is in reach
};

struct RobotSim {
  int proxy_id = 0;
  int room = 0;
  RobotState state;  // room-local frame
  bool has_target = false;
  Vec2 target;  // room-local frame
};

struct TttSim {
  enum class Phase { None, Approach, Carry } phase = Phase::None;
  int cell = 0;
};

struct RoomSim {
  RoomConfig cfg;
  RigidTransform2 to_view;   // local -> room view
  RigidTransform2 to_local;  // room view -> local
  WristSim wrist;
  GestureState gesture;
  std::vector<WristSample> samples;
  Replica replica;                             // snapshots in owner view frames
  std::map<std::string, DelayBuffer> buffers;  // remote poses in this view
  TicTacToeBoard board;
  ReliableSender rel_sender;
  ReliableReceiver rel_receiver;
  TttSim ttt;
  std::string held;
  std::map<MessageKind, std::uint32_t> seq;
  std::string demand_object;  // one_to_many: building currently demanded
  int game_moves = 0;

  RoomSim(const RoomConfig& c, std::uint8_t rid) : cfg(c), rel_sender(rid) {}
};

struct LiveBinding {
  std::string object;
  int proxy_id = 0;
  int room = 0;
  Vec2 target;  // room-local
  BindingState state = BindingState::Pending;
  std::string traced_label;
  MappingPolicy policy = MappingPolicy::OneToOne;
};

struct TrackStats {
  double max_err = 0.0;
  long engaged_ticks = 0;
};

using WireKey = std::tuple<double, int, int, std::uint32_t, std::int64_t>;

WireKey wire_key(const Delivery& d) {
  return {d.deliver_at, static_cast<int>(d.env.room_id),
          static_cast<int>(d.env.kind), d.env.seq, d.env.sent_at_us};
}

class Engine {
 public:
  Engine(const ScenarioScript& script, const RunOverrides& o) : sc_(script) {
    if (o.seed) sc_.seed = *o.seed;
    if (o.delay) sc_.delay = *o.delay;
    if (o.base_latency) sc_.channel.base_latency = *o.base_latency;
    if (o.jitter) sc_.channel.jitter = *o.jitter;
    if (o.drop) sc_.channel.drop_prob = *o.drop;
    validate_script(sc_);
    channel_ = sc_.channel;
    channel_.seed = sc_.seed;
  }

  RunResult run();

 private:
  struct PendingAction {
    double start = 0.0;
    int order = 0;
    ScriptAction act;
  };

  // --- setup -------------------------------------------------------------
  void init_world();
  void trace_initial_state();

  // --- per-tick stages, in execution order --------------------------------
  void process_deliveries();
  void check_triggers();
  void run_actions();
  void run_gestures();
  void move_objects();
  void update_mapping();
  void step_robots();
  void check_safety();
  void publish();
  void check_watches();

  // --- helpers -------------------------------------------------------------
  RoomSim& room(int id) { return rooms_.at(id); }
  int other_room(int id) const;
  Pose2 view_pose(int room_id, const ObjectSim& o) const {
    return o.owner == room_id ? o.pose : flip(o.pose);
  }
  Pose2 render_now(int room_id, const std::string& object_id);
  Pose2 tracked_pose(int room_id, const std::string& object_id);
  RobotSim* find_robot(int room_id, const std::string& object_id);
  RobotSim& robot_by_id(int proxy_id);
  void start_action(const ScriptAction& a);
  void advance_wrist(int room_id);
  void advance_ttt(int room_id);
  void try_grab(int room_id, const std::string& object_id, bool keep_trying);
  void do_grab(int room_id, const std::string& object_id);
  void do_release(int room_id);
  void transfer_ownership(ObjectSim& o, int new_owner);
  void set_robot_target(LiveBinding& b, const Vec2& target);
  void send_event(int room_id, MessageKind kind, Record body);
  void apply_board_move(int room_id, const Record& body);
  void trace_pose_if_changed(const ObjectSim& o);

  Record base_record(const char* ev) const {
    Record r;
    r.set("ev", ev);
    r.set_int("tick", tick_);
    r.set_num("t", t_);
    return r;
  }

  // --- state ----------------------------------------------------------------
  ScenarioScript sc_;
  ChannelModel channel_;
  int canonical_room_ = 0;
  SharedWorkspace ws_;
  std::map<int, RoomSim> rooms_;
  std::map<std::string, ObjectSim> objects_;
  std::vector<RobotSim> robots_;  // sorted by (room, proxy_id)
  std::vector<LiveBinding> bindings_;
  std::vector<PendingAction> pending_;
  int pending_order_ = 0;
  std::vector<bool> trigger_fired_;
  std::vector<bool> watch_fired_;
  std::set<std::pair<int, int>> safety_latched_;
  std::map<WireKey, Envelope> wire_;
  std::vector<Envelope> outbox_;
  std::map<int, TrackStats> track_stats_;
  std::map<std::string, Pose2> traced_pose_;
  std::map<std::pair<int, int>, Pose2> traced_robot_pose_;
  std::map<std::pair<int, int>, MotionStatus> traced_robot_status_;
  std::vector<Record> trace_;
  double t_ = 0.0;
  long tick_ = 0;
  bool violation_ = false;
  double min_delay_ = 0.0;
  bool has_ttt_ = false;
  std::string shared_object_;  // the many_to_one mirrored object, if any
};

int Engine::other_room(int id) const {
  for (const auto& [rid, rs] : rooms_) {
    (void)rs;
    if (rid != id) return rid;
  }
  return id;
}

Pose2 Engine::render_now(int room_id, const std::string& object_id) {
  const ObjectSim& o = objects_.at(object_id);
  if (o.owner == room_id) return o.pose;
  const DelayBuffer& buf = room(room_id).buffers.at(object_id);
  const double query = std::max(t_, buf.oldest_time() + sc_.delay);
  return buf.delayed_view(query);
}

// Pose a room steers its proxy by, in that room's view frame.
Pose2 Engine::tracked_pose(int room_id, const std::string& object_id) {
  const ObjectSim& o = objects_.at(object_id);
  if (o.owner == room_id) return o.pose;
  if (sc_.track == TrackMode::Rendered) return render_now(room_id, object_id);
  return flip(room(room_id).replica.at(object_id).pose);
}

RobotSim* Engine::find_robot(int room_id, const std::string& object_id) {
  for (LiveBinding& b : bindings_) {
    if (b.room == room_id && b.object == object_id)
      return &robot_by_id(b.proxy_id);
  }
  return nullptr;
}

RobotSim& Engine::robot_by_id(int proxy_id) {
  for (RobotSim& r : robots_) {
    if (r.proxy_id == proxy_id) return r;
  }
  raise(Err::MissingRoomProxy, "no proxy " + std::to_string(proxy_id));
}

void Engine::init_world() {
  canonical_room_ = sc_.rooms.front().room_id;
  for (const RoomConfig& rc : sc_.rooms)
    canonical_room_ = std::min(canonical_room_, rc.room_id);
  ws_ = shared_workspace(sc_.rooms);

  for (const RoomConfig& rc : sc_.rooms) {
    RoomSim rs(rc, static_cast<std::uint8_t>(rc.room_id));
    rs.to_view = localize_room(rc);
    rs.to_local = inverse(rs.to_view);
    rooms_.emplace(rc.room_id, std::move(rs));
  }

  for (const ScriptObject& so : sc_.objects) {
    ObjectSim o;
    o.id = so.id;
    o.owner = so.owner;
    o.pose = so.pose;
    objects_.emplace(o.id, o);
  }

  for (const ScriptProxy& sp : sc_.proxies) {
    RobotSim r;
    r.proxy_id = sp.proxy_id;
    r.room = sp.room;
    r.state.pose = sp.pose;
    r.state.status = MotionStatus::Idle;
    robots_.push_back(r);
  }
  std::sort(robots_.begin(), robots_.end(), [](const RobotSim& a, const RobotSim& b) {
    return std::tie(a.room, a.proxy_id) < std::tie(b.room, b.proxy_id);
  });

  // Every room starts with a consistent picture of the scene: a time-zero
  // snapshot per entity, plus the first delayed-view sample for remote ones.
  for (auto& [rid, rs] : rooms_) {
    for (const auto& [oid, o] : objects_) {
      EntitySnapshot snap;
      snap.entity_id = oid;
      snap.pose = o.pose;
      snap.stamp = {0, 0, static_cast<std::uint8_t>(o.owner)};
      rs.replica.emplace(oid, snap);
      if (o.owner != rid) {
        auto [it, fresh] = rs.buffers.emplace(oid, DelayBuffer(sc_.delay));
        (void)fresh;
        it->second.push(0.0, flip(o.pose));
      }
    }
  }

  // Static bindings (one_to_one, many_to_one) exist from the start;
  // one_to_many bindings appear through dispatch.
  for (const BindingSpec& bs : sc_.bindings) {
    if (bs.policy == MappingPolicy::OneToOne) {
      LiveBinding b;
      b.object = bs.objects.front();
      b.proxy_id = bs.proxy_id;
      b.room = robot_by_id(bs.proxy_id).room;
      b.policy = bs.policy;
      bindings_.push_back(b);
    } else if (bs.policy == MappingPolicy::ManyToOne) {
      shared_object_ = bs.objects.front();
      for (const RobotSim& r : robots_) {
        LiveBinding b;
        b.object = bs.objects.front();
        b.proxy_id = r.proxy_id;
        b.room = r.room;
        b.policy = bs.policy;
        bindings_.push_back(b);
      }
    }
  }

  for (const ScriptAction& a : sc_.timeline) {
    if (a.kind == ActionKind::TttMove) has_ttt_ = true;
    if (!a.trigger.empty()) continue;
    pending_.push_back({a.t, pending_order_++, a});
  }
  std::sort(pending_.begin(), pending_.end(), [](const PendingAction& a, const PendingAction& b) {
    return std::tie(a.start, a.order) < std::tie(b.start, b.order);
  });
  trigger_fired_.assign(sc_.triggers.size(), false);
  watch_fired_.assign(sc_.watches.size(), false);
}

void Engine::trace_initial_state() {
  Record meta;
  meta.set("ev", "meta");
  meta.set("scenario", sc_.name);
  meta.set_num("dt", sc_.dt);
  meta.set_num("duration", sc_.duration);
  meta.set_num("delay", sc_.delay);
  meta.set_int("seed", static_cast<long long>(sc_.seed));
  meta.set("track", track_mode_name(sc_.track));
  meta.set_num("drop", channel_.drop_prob);
  meta.set_num("latency", channel_.base_latency);
  meta.set_num("jitter", channel_.jitter);
  trace_.push_back(meta);

  for (const auto& [oid, o] : objects_) {
    Record r;
    r.set("ev", "init");
    r.set("kind", "object");
    r.set("entity", oid);
    r.set_int("owner", o.owner);
    r.set_num("x", o.pose.position.x);
    r.set_num("y", o.pose.position.y);
    r.set_num("heading", o.pose.heading);
    trace_.push_back(r);
    traced_pose_[oid] = o.pose;
  }
  for (const RobotSim& r : robots_) {
    Record rec;
    rec.set("ev", "init");
    rec.set("kind", "proxy");
    rec.set_int("room", r.room);
    rec.set_int("proxy", r.proxy_id);
    rec.set_num("x", r.state.pose.position.x);
    rec.set_num("y", r.state.pose.position.y);
    rec.set_num("heading", r.state.pose.heading);
    trace_.push_back(rec);
    traced_robot_pose_[{r.room, r.proxy_id}] = r.state.pose;
    traced_robot_status_[{r.room, r.proxy_id}] = r.state.status;
  }
}

void Engine::process_deliveries() {
  while (!wire_.empty() && std::get<0>(wire_.begin()->first) <= t_ + 1e-12) {
    Envelope env = wire_.begin()->second;
    wire_.erase(wire_.begin());
    const int dest = other_room(static_cast<int>(env.room_id));
    RoomSim& rs = room(dest);
    switch (env.kind) {
      case MessageKind::PoseUpdate: {
        EntitySnapshot snap;
        snap.entity_id = env.body.get("entity");
        snap.pose = make_pose(env.body.get_num("x"), env.body.get_num("y"),
                              env.body.get_num("heading"));
        snap.stamp = {env.sent_at_us, env.seq, env.room_id};
        const bool kept = reconcile(rs.replica, snap);
        if (kept) {
          auto it = rs.buffers.find(snap.entity_id);
          if (it == rs.buffers.end())
            it = rs.buffers.emplace(snap.entity_id, DelayBuffer(sc_.delay)).first;
          it->second.push(env.sent_at(), flip(snap.pose));
        }
        break;
      }
      case MessageKind::GameEvent: {
        const std::vector<Record> due = rs.rel_receiver.on_receive(env);
        for (const Record& body : due) apply_board_move(dest, body);
        Record ack;
        ack.set_int("ack", rs.rel_receiver.ack_seq());
        send_event(dest, MessageKind::Ack, ack);
        break;
      }
      case MessageKind::Ack:
        rs.rel_sender.on_ack(static_cast<std::uint32_t>(env.body.get_int("ack")));
        break;
      case MessageKind::BindingUpdate:
      case MessageKind::GestureEvent:
        break;  // awareness traffic; state already travels in pose/game streams
    }
  }
}

void Engine::check_triggers() {
  for (std::size_t i = 0; i < sc_.triggers.size(); ++i) {
    if (trigger_fired_[i]) continue;
    const ScriptTrigger& tr = sc_.triggers[i];
    const Pose2 seen = render_now(tr.room, tr.object);
    if (distance(seen.position, tr.point) > tr.radius) continue;
    trigger_fired_[i] = true;
    Record r = base_record("trigger");
    r.set("trigger", tr.id);
    r.set("object", tr.object);
    trace_.push_back(r);
    for (const ScriptAction& a : sc_.timeline) {
      if (a.trigger != tr.id) continue;
      pending_.push_back({t_ + a.t, pending_order_++, a});
    }
    std::sort(pending_.begin(), pending_.end(),
              [](const PendingAction& a, const PendingAction& b) {
                return std::tie(a.start, a.order) < std::tie(b.start, b.order);
              });
  }
}

void Engine::start_action(const ScriptAction& a) {
  RoomSim& rs = room(a.room);
  WristSim& w = rs.wrist;
  switch (a.kind) {
    case ActionKind::WristWarp:
      w.pos = a.point;
      if (a.palm.x != 0.0 || a.palm.y != 0.0) w.palm = normalized(a.palm);
      w.mode = WristSim::Mode::Hold;
      break;
    case ActionKind::WristMove:
      w.move_from = w.pos;
      w.move_to = a.point;
      w.move_speed = a.speed;
      w.move_elapsed = 0.0;
      w.move_dist = distance(w.move_from, w.move_to);
      w.mode = w.move_dist < 1e-9 ? WristSim::Mode::Hold : WristSim::Mode::Move;
      break;
    case ActionKind::Aim:
      w.aim_object = a.object == "off" ? "" : a.object;
      break;
    case ActionKind::Stroke:
      w.stroke_v = a.velocity;
      w.stroke_left = a.duration;
      w.mode = WristSim::Mode::Stroke;
      break;
    case ActionKind::Reach:
      w.reach_object = a.object;
      w.reach_speed = a.speed;
      w.mode = WristSim::Mode::Reach;
      break;
    case ActionKind::Grab:
      w.grab_pending = a.object;
      break;
    case ActionKind::Release:
      do_release(a.room);
      break;
    case ActionKind::ObjectMove: {
      ObjectSim& o = objects_.at(a.object);
      if (o.owner != a.room) transfer_ownership(o, a.room);
      o.motion = ObjectSim::Motion::Glide;
      o.glide_target = a.point;
      o.glide_speed = a.speed;
      break;
    }
    case ActionKind::TttMove:
      rs.ttt.phase = TttSim::Phase::Approach;
      rs.ttt.cell = a.cell;
      break;
  }
}

void Engine::advance_wrist(int room_id) {
  RoomSim& rs = room(room_id);
  WristSim& w = rs.wrist;
  switch (w.mode) {
    case WristSim::Mode::Hold:
      break;
    case WristSim::Mode::Move: {
      w.move_elapsed += sc_.dt;
      // Trapezoidal profile: accelerate, cruise, decelerate; degenerates to a
      // triangle when the leg is too short to reach cruise speed.
      const double a = kWristAccel, v = w.move_speed, d = w.move_dist;
      const double t_acc = v / a;
      const double d_acc = 0.5 * v * v / a;
      double s;
      double total;
      if (2.0 * d_acc >= d) {
        const double t_peak = std::sqrt(d / a);
        total = 2.0 * t_peak;
        const double tt = w.move_elapsed;
        s = tt <= t_peak ? 0.5 * a * tt * tt
                         : d - 0.5 * a * (total - tt) * (total - tt);
      } else {
        total = 2.0 * t_acc + (d - 2.0 * d_acc) / v;
        const double tt = w.move_elapsed;
        if (tt <= t_acc) {
          s = 0.5 * a * tt * tt;
        } else if (tt <= total - t_acc) {
          s = d_acc + v * (tt - t_acc);
        } else {
          s = d - 0.5 * a * (total - tt) * (total - tt);
        }
      }
      if (w.move_elapsed >= total) {
        w.pos = w.move_to;
        w.mode = WristSim::Mode::Hold;
      } else {
        const Vec2 dir = normalized(w.move_to - w.move_from);
        w.pos = w.move_from + dir * std::clamp(s, 0.0, d);
      }
      break;
    }
    case WristSim::Mode::Stroke:
      w.pos = w.pos + w.stroke_v * sc_.dt;
      w.stroke_left -= sc_.dt;
      if (w.stroke_left <= 1e-12) w.mode = WristSim::Mode::Hold;
      break;
    case WristSim::Mode::Reach: {
      const Pose2 seen = render_now(room_id, w.reach_object);
      if (grab_check(w.pos, seen.position, sc_.gesture)) {
        do_grab(room_id, w.reach_object);
        w.mode = WristSim::Mode::Hold;
        break;
      }
      const Vec2 delta = seen.position - w.pos;
      const double dist = delta.norm();
      const double step = std::min(w.reach_speed * sc_.dt, dist);
      if (dist > 1e-12) w.pos = w.pos + delta * (step / dist);
      break;
    }
  }
  if (!w.grab_pending.empty()) {
    try_grab(room_id, w.grab_pending, true);
  }
}

void Engine::advance_ttt(int room_id) {
  RoomSim& rs = room(room_id);
  WristSim& w = rs.wrist;
  switch (rs.ttt.phase) {
    case TttSim::Phase::None:
      break;
    case TttSim::Phase::Approach: {
      const std::string& token = shared_object_;
      const Pose2 seen = render_now(room_id, token);
      w.pos = seen.position;
      w.mode = WristSim::Mode::Hold;
      do_grab(room_id, token);
      const Vec2 canon = tile_center(rs.ttt.cell, ws_);
      const Vec2 dest = room_id == canonical_room_ ? canon : Vec2{-canon.x, -canon.y};
      w.move_from = w.pos;
      w.move_to = dest;
      w.move_speed = sc_.carry_speed;
      w.move_elapsed = 0.0;
      w.move_dist = distance(w.move_from, w.move_to);
      w.mode = w.move_dist < 1e-9 ? WristSim::Mode::Hold : WristSim::Mode::Move;
      rs.ttt.phase = TttSim::Phase::Carry;
      break;
    }
    case TttSim::Phase::Carry:
      if (w.mode != WristSim::Mode::Hold) break;
      do_release(room_id);
      {
        Record body;
        body.set("event", "move");
        body.set_int("cell", rs.ttt.cell);
        body.set("mark", room_id == canonical_room_ ? "x" : "o");
        rs.rel_sender.send(body);
        apply_board_move(room_id, body);
      }
      rs.ttt.phase = TttSim::Phase::None;
      break;
  }
}

void Engine::run_actions() {
  while (!pending_.empty() && pending_.front().start <= t_ + 1e-12) {
    ScriptAction act = pending_.front().act;
    pending_.erase(pending_.begin());
    start_action(act);
  }
  for (auto& [rid, rs] : rooms_) {
    (void)rs;
    advance_wrist(rid);
    advance_ttt(rid);
  }
}

void Engine::run_gestures() {
  for (auto& [rid, rs] : rooms_) {
    WristSim& w = rs.wrist;
    if (!w.aim_object.empty()) {
      const Pose2 seen = render_now(rid, w.aim_object);
      const Vec2 dir = seen.position - w.pos;
      if (dir.norm() > 1e-9) w.palm = normalized(dir);
    }

    WristSample sample;
    sample.time = t_;
    sample.pose = Pose2{w.pos, std::atan2(w.palm.y, w.palm.x)};
    sample.palm_dir = w.palm;
    rs.samples.push_back(sample);
    while (!rs.samples.empty() &&
           rs.samples.front().time < t_ - sc_.gesture.window - 0.1) {
      rs.samples.erase(rs.samples.begin());
    }

    std::vector<NamedPoint> scene;
    for (const auto& [oid, o] : objects_) {
      (void)o;
      scene.push_back({oid, render_now(rid, oid).position});
    }
    std::vector<GestureCueEvent> cues;
    rs.gesture = update_targeting(rs.gesture, sample, scene, sc_.gesture, sc_.dt, cues);
    for (const GestureCueEvent& cue : cues) {
      Record r = base_record("gesture");
      r.set_int("room", rid);
      r.set("kind", cue.cue == GestureCue::Shake ? "shake" : "glow");
      r.set("object", cue.object_id);
      trace_.push_back(r);
      Record body;
      body.set("event", "cue");
      body.set("cue", cue.cue == GestureCue::Shake ? "shake" : "glow");
      body.set("object", cue.object_id);
      send_event(rid, MessageKind::GestureEvent, body);
    }

    if (rs.gesture.phase != GesturePhase::Locked) continue;
    std::vector<WristSample> window;
    for (const WristSample& s : rs.samples) {
      if (s.time >= t_ - sc_.gesture.window - 1e-9) window.push_back(s);
    }
    if (window.size() < 2) continue;
    const Vec2 user_pos = window.front().pose.position;
    const Pose2 target_obj = render_now(rid, rs.gesture.object_id);
    const auto cmd = classify_motion(window, user_pos, target_obj.position, sc_.gesture);
    if (!cmd) continue;

    const Vec2 dest = command_target(*cmd, target_obj.position, user_pos, ws_);
    const int dest_tile = tile_of(dest, ws_);
    ObjectSim& obj = objects_.at(rs.gesture.object_id);
    if (obj.owner != rid) transfer_ownership(obj, rid);
    obj.motion = ObjectSim::Motion::Glide;
    obj.glide_target = dest;
    obj.glide_speed = sc_.glide_speed;

    Record r = base_record("gesture");
    r.set_int("room", rid);
    r.set("kind", "command");
    r.set("object", obj.id);
    r.set("command", gesture_command_name(cmd->kind));
    r.set_int("dest_tile", dest_tile);
    r.set_num("x", dest.x);
    r.set_num("y", dest.y);
    trace_.push_back(r);
    Record body;
    body.set("event", "command");
    body.set("command", gesture_command_name(cmd->kind));
    body.set("object", obj.id);
    body.set_int("dest_tile", dest_tile);
    send_event(rid, MessageKind::GestureEvent, body);

    rs.gesture = GestureState{};
    rs.samples.clear();
  }
}

void Engine::move_objects() {
  for (auto& [oid, o] : objects_) {
    (void)oid;
    switch (o.motion) {
      case ObjectSim::Motion::Static:
        break;
      case ObjectSim::Motion::Glide: {
        const Vec2 delta = o.glide_target - o.pose.position;
        const double dist = delta.norm();
        const double step = o.glide_speed * sc_.dt;
        if (dist <= step) {
          o.pose.position = o.glide_target;
          o.motion = ObjectSim::Motion::Static;
        } else {
          o.pose.position = o.pose.position + delta * (step / dist);
        }
        break;
      }
      case ObjectSim::Motion::Attached:
        o.pose.position = room(o.owner).wrist.pos + o.attach_offset;
        break;
    }
    trace_pose_if_changed(o);
  }
}

void Engine::set_robot_target(LiveBinding& b, const Vec2& target) {
  RobotSim& r = robot_by_id(b.proxy_id);
  const bool jump = !r.has_target || distance(r.target, target) > kMoveJump;
  r.target = target;
  r.has_target = true;
  b.target = target;
  if (!jump) return;
  Record rec = base_record("move");
  rec.set_int("room", b.room);
  rec.set_int("proxy", b.proxy_id);
  rec.set("object", b.object);
  rec.set_num("x", target.x);
  rec.set_num("y", target.y);
  trace_.push_back(rec);
}

void Engine::update_mapping() {
  // Static policies: retarget every binding from the tracked pose.
  for (LiveBinding& b : bindings_) {
    if (b.policy == MappingPolicy::OneToMany) continue;
    const Pose2 seen = tracked_pose(b.room, b.object);
    set_robot_target(b, one_to_one_target(seen, room(b.room).cfg));
  }

  // Demand-driven pools, one dispatch per room.
  for (const BindingSpec& bs : sc_.bindings) {
    if (bs.policy != MappingPolicy::OneToMany) continue;
    for (auto& [rid, rs] : rooms_) {
      std::vector<ProxyPoint> pool;
      for (const RobotSim& r : robots_) {
        if (r.room != rid) continue;
        pool.push_back({r.proxy_id, r.room, apply(rs.to_view, r.state.pose.position)});
      }
      if (pool.empty()) continue;

      // The demanded building is the one nearest the hand, with hysteresis so
      // a mid-way hand does not thrash between two candidates.
      std::string best;
      double best_d = 0.0;
      for (const std::string& oid : bs.objects) {
        const double d = distance(render_now(rid, oid).position, rs.wrist.pos);
        if (best.empty() || d < best_d) {
          best = oid;
          best_d = d;
        }
      }
      if (!rs.demand_object.empty() && rs.demand_object != best) {
        const double cur_d =
            distance(render_now(rid, rs.demand_object).position, rs.wrist.pos);
        if (best_d >= cur_d - bs.margin) best = rs.demand_object;
      }
      rs.demand_object = best;

      std::vector<DemandPoint> demands;
      demands.push_back({render_now(rid, best).position,
                         DemandSource::HandProximity, best});

      std::vector<Binding> current;
      for (const LiveBinding& b : bindings_) {
        if (b.policy != MappingPolicy::OneToMany || b.room != rid) continue;
        current.push_back({b.object, b.proxy_id, b.room, b.state});
      }

      const DispatchResult result = dispatch_one_to_many(demands, pool, current, bs.margin);

      std::vector<LiveBinding> kept;
      for (LiveBinding& b : bindings_) {
        if (b.policy != MappingPolicy::OneToMany || b.room != rid) {
          kept.push_back(b);
          continue;
        }
        bool still = false;
        for (const Binding& nb : result.bindings) {
          if (nb.object_id == b.object && nb.proxy_id == b.proxy_id) still = true;
        }
        if (still) kept.push_back(b);
      }
      for (std::size_t di = 0; di < result.bindings.size(); ++di) {
        const Binding& nb = result.bindings[di];
        bool existed = false;
        for (LiveBinding& b : kept) {
          if (b.policy == MappingPolicy::OneToMany && b.room == rid &&
              b.object == nb.object_id && b.proxy_id == nb.proxy_id) {
            existed = true;
          }
        }
        if (!existed) {
          LiveBinding b;
          b.object = nb.object_id;
          b.proxy_id = nb.proxy_id;
          b.room = rid;
          b.policy = MappingPolicy::OneToMany;
          kept.push_back(b);
        }
      }
      bindings_ = std::move(kept);

      for (LiveBinding& b : bindings_) {
        if (b.policy != MappingPolicy::OneToMany || b.room != rid) continue;
        const Pose2 seen{render_now(rid, b.object).position, 0.0};
        set_robot_target(b, one_to_one_target(seen, rs.cfg));
      }
    }
  }
}

void Engine::step_robots() {
  for (RobotSim& r : robots_) {
    if (r.state.status == MotionStatus::Carrying) {
      // Hand-held: the proxy is wherever the carried object is.
      for (const LiveBinding& b : bindings_) {
        if (b.proxy_id != r.proxy_id) continue;
        const ObjectSim& o = objects_.at(b.object);
        if (o.owner == r.room) r.state.pose = apply(room(r.room).to_local, o.pose);
      }
    } else if (r.has_target) {
      min_delay_ = std::max(min_delay_, travel_time_bound(r.state, r.target, sc_.limits));
      const MotionCommand cmd = drive_to(r.state, r.target, sc_.limits);
      r.state = step_robot(r.state, cmd, sc_.dt, sc_.limits);
    }

    const auto key = std::make_pair(r.room, r.proxy_id);
    const Pose2& last = traced_robot_pose_[key];
    const bool moved = distance(last.position, r.state.pose.position) > 1e-9 ||
                       std::abs(wrap_angle(last.heading - r.state.pose.heading)) > 1e-9;
    const bool status_changed = traced_robot_status_[key] != r.state.status;
    if (moved || status_changed) {
      Record rec = base_record("proxy");
      rec.set_int("room", r.room);
      rec.set_int("proxy", r.proxy_id);
      rec.set_num("x", r.state.pose.position.x);
      rec.set_num("y", r.state.pose.position.y);
      rec.set_num("heading", r.state.pose.heading);
      rec.set("status", motion_status_name(r.state.status));
      trace_.push_back(rec);
      traced_robot_pose_[key] = r.state.pose;
      traced_robot_status_[key] = r.state.status;
    }
  }

  for (LiveBinding& b : bindings_) {
    RobotSim& r = robot_by_id(b.proxy_id);
    const BindingState st = binding_state(r.state, b.target, sc_.limits.arrive_pos_tol);
    const bool carrying = r.state.status == MotionStatus::Carrying;
    // A hand-held proxy is traced as "carrying", never "engaged": engagement
    // means the proxy converged onto its target on its own.
    const std::string label = carrying ? "carrying" : binding_state_name(st);
    if (label != b.traced_label) {
      b.traced_label = label;
      Record rec = base_record("bind");
      rec.set_int("room", b.room);
      rec.set("object", b.object);
      rec.set_int("proxy", b.proxy_id);
      rec.set("state", label);
      trace_.push_back(rec);
      Record body;
      body.set("event", "bind");
      body.set("object", b.object);
      body.set_int("proxy", b.proxy_id);
      body.set("state", label);
      send_event(b.room, MessageKind::BindingUpdate, body);
    }
    b.state = st;
    if (b.policy == MappingPolicy::ManyToOne && !carrying &&
        b.state == BindingState::Engaged) {
      TrackStats& stats = track_stats_[b.room];
      stats.max_err = std::max(stats.max_err,
                               distance(r.state.pose.position, b.target));
      ++stats.engaged_ticks;
    }
  }
}

void Engine::check_safety() {
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    for (std::size_t j = i + 1; j < robots_.size(); ++j) {
      if (robots_[i].room != robots_[j].room) continue;
      const double d =
          distance(robots_[i].state.pose.position, robots_[j].state.pose.position);
      if (d >= kSafetyDistance) continue;
      const auto pair = std::make_pair(robots_[i].proxy_id, robots_[j].proxy_id);
      violation_ = true;
      if (!safety_latched_.insert(pair).second) continue;
      Record rec = base_record("safety");
      rec.set_int("room", robots_[i].room);
      rec.set_int("proxy_a", robots_[i].proxy_id);
      rec.set_int("proxy_b", robots_[j].proxy_id);
      rec.set_num("dist", d);
      trace_.push_back(rec);
    }
  }
}

void Engine::send_event(int room_id, MessageKind kind, Record body) {
  if (rooms_.size() < 2) return;
  RoomSim& rs = room(room_id);
  Envelope env;
  env.kind = kind;
  env.room_id = static_cast<std::uint8_t>(room_id);
  env.seq = ++rs.seq[kind];
  env.sent_at_us = to_micros(t_);
  env.body = std::move(body);
  outbox_.push_back(env);
}

void Engine::publish() {
  const bool due = std::floor(t_ * kPublishHz) > std::floor((t_ - sc_.dt) * kPublishHz);
  for (auto& [rid, rs] : rooms_) {
    if (due) {
      for (const auto& [oid, o] : objects_) {
        if (o.owner != rid) continue;
        Record body;
        body.set("entity", oid);
        body.set_num("x", o.pose.position.x);
        body.set_num("y", o.pose.position.y);
        body.set_num("heading", o.pose.heading);
        send_event(rid, MessageKind::PoseUpdate, body);
      }
    }
    for (Envelope env : rs.rel_sender.poll(t_)) {
      if (rooms_.size() < 2) continue;
      outbox_.push_back(env);
    }
  }
  if (!outbox_.empty() && rooms_.size() >= 2) {
    for (const Delivery& d : channel_deliver(outbox_, channel_, t_)) {
      wire_.emplace(wire_key(d), d.env);
    }
  }
  outbox_.clear();
}

void Engine::check_watches() {
  for (std::size_t i = 0; i < sc_.watches.size(); ++i) {
    if (watch_fired_[i]) continue;
    const ContactWatch& w = sc_.watches[i];
    const Pose2 pa = render_now(w.room, w.a);
    const Pose2 pb = render_now(w.room, w.b);
    const double d = distance(pa.position, pb.position);
    if (d > w.radius) continue;
    watch_fired_[i] = true;
    // The record names the proxy-backed participant: the remote one if there
    // is one, since that is the entity a proxy mirrors in this room.
    std::string object = w.b;
    if (objects_.at(w.a).owner != w.room) object = w.a;
    if (objects_.at(w.b).owner != w.room) object = w.b;
    Record rec = base_record("contact");
    rec.set_int("room", w.room);
    rec.set("kind", "strike");
    rec.set("a", w.a);
    rec.set("b", w.b);
    rec.set("object", object);
    rec.set_num("dist", d);
    trace_.push_back(rec);
  }
}

void Engine::try_grab(int room_id, const std::string& object_id, bool keep_trying) {
  RoomSim& rs = room(room_id);
  const Pose2 seen = render_now(room_id, object_id);
  if (!grab_check(rs.wrist.pos, seen.position, sc_.gesture)) {
    if (!keep_trying) rs.wrist.grab_pending.clear();
    return;
  }
  rs.wrist.grab_pending.clear();
  do_grab(room_id, object_id);
}

void Engine::do_grab(int room_id, const std::string& object_id) {
  RoomSim& rs = room(room_id);
  if (!rs.held.empty()) return;
  ObjectSim& o = objects_.at(object_id);
  if (o.owner != room_id) transfer_ownership(o, room_id);
  o.motion = ObjectSim::Motion::Attached;
  o.attach_offset = o.pose.position - rs.wrist.pos;
  rs.held = object_id;
  rs.gesture = GestureState{GesturePhase::Grabbing, object_id, 0.0};

  if (RobotSim* r = find_robot(room_id, object_id)) r->state.status = MotionStatus::Carrying;

  Record g = base_record("gesture");
  g.set_int("room", room_id);
  g.set("kind", "grab");
  g.set("object", object_id);
  trace_.push_back(g);
  Record c = base_record("contact");
  c.set_int("room", room_id);
  c.set("kind", "grab");
  c.set("object", object_id);
  trace_.push_back(c);
  Record body;
  body.set("event", "grab");
  body.set("object", object_id);
  send_event(room_id, MessageKind::GestureEvent, body);
}

void Engine::do_release(int room_id) {
  RoomSim& rs = room(room_id);
  if (rs.held.empty()) return;
  ObjectSim& o = objects_.at(rs.held);
  o.motion = ObjectSim::Motion::Static;
  if (RobotSim* r = find_robot(room_id, rs.held)) {
    if (r->state.status == MotionStatus::Carrying) r->state.status = MotionStatus::Idle;
  }
  Record g = base_record("gesture");
  g.set_int("room", room_id);
  g.set("kind", "release");
  g.set("object", rs.held);
  trace_.push_back(g);
  Record body;
  body.set("event", "release");
  body.set("object", rs.held);
  send_event(room_id, MessageKind::GestureEvent, body);
  rs.held.clear();
  rs.gesture = GestureState{};
}

void Engine::transfer_ownership(ObjectSim& o, int new_owner) {
  if (o.owner == new_owner) return;
  const int old_owner = o.owner;
  o.pose = flip(o.pose);
  o.owner = new_owner;
  traced_pose_[o.id] = o.pose;  // frame change, not motion; skip a pose record

  // The handing-over room keeps seeing the object where it let go of it until
  // the new owner's updates start streaming in: restart its delayed view from
  // the handover pose (dropping any history from before it took ownership, so
  // nothing interpolates across the gap) and refresh its replica.
  RoomSim& old_rs = room(old_owner);
  old_rs.buffers.erase(o.id);
  auto it = old_rs.buffers.emplace(o.id, DelayBuffer(sc_.delay)).first;
  it->second.push(t_, flip(o.pose));
  EntitySnapshot snap;
  snap.entity_id = o.id;
  snap.pose = o.pose;
  snap.stamp = {to_micros(t_), 0, static_cast<std::uint8_t>(new_owner)};
  reconcile(old_rs.replica, snap);
}

void Engine::apply_board_move(int room_id, const Record& body) {
  RoomSim& rs = room(room_id);
  const int cell = static_cast<int>(body.get_int("cell"));
  const Cell mark = body.get("mark") == "x" ? Cell::X : Cell::O;
  try {
    rs.board = ttt_apply(rs.board, cell, mark);
  } catch (const Error&) {
    violation_ = true;
    Record rec = base_record("game");
    rec.set_int("room", room_id);
    rec.set_int("cell", cell);
    rec.set("mark", body.get("mark"));
    rec.set("state", "rejected");
    trace_.push_back(rec);
    return;
  }
  ++rs.game_moves;
  Record rec = base_record("game");
  rec.set_int("room", room_id);
  rec.set_int("cell", cell);
  rec.set("mark", body.get("mark"));
  rec.set_int("move", rs.game_moves);
  trace_.push_back(rec);
}

void Engine::trace_pose_if_changed(const ObjectSim& o) {
  const Pose2& last = traced_pose_[o.id];
  if (distance(last.position, o.pose.position) <= 1e-9 &&
      std::abs(wrap_angle(last.heading - o.pose.heading)) <= 1e-9) {
    return;
  }
  Record rec = base_record("pose");
  rec.set("entity", o.id);
  rec.set_int("owner", o.owner);
  rec.set_num("x", o.pose.position.x);
  rec.set_num("y", o.pose.position.y);
  rec.set_num("heading", o.pose.heading);
  trace_.push_back(rec);
  traced_pose_[o.id] = o.pose;
}

RunResult Engine::run() {
  init_world();
  trace_initial_state();

  const long ticks = std::lround(sc_.duration / sc_.dt);
  for (tick_ = 0; tick_ < ticks; ++tick_) {
    t_ = static_cast<double>(tick_) * sc_.dt;
    trace_.push_back(base_record("tick"));
    process_deliveries();
    check_triggers();
    run_actions();
    run_gestures();
    move_objects();
    update_mapping();
    step_robots();
    check_safety();
    publish();
    check_watches();
  }
  t_ = static_cast<double>(ticks) * sc_.dt;
  tick_ = ticks;

  for (const auto& [oid, o] : objects_) {
    const Pose2 canon = o.owner == canonical_room_ ? o.pose : flip(o.pose);
    Record rec = base_record("final");
    rec.set("kind", "object");
    rec.set("entity", oid);
    rec.set_int("owner", o.owner);
    rec.set_num("x", canon.position.x);
    rec.set_num("y", canon.position.y);
    rec.set_num("heading", canon.heading);
    rec.set_int("tile", tile_of(canon.position, ws_));
    trace_.push_back(rec);
  }
  for (const RobotSim& r : robots_) {
    Record rec = base_record("final");
    rec.set("kind", "proxy");
    rec.set_int("room", r.room);
    rec.set_int("proxy", r.proxy_id);
    rec.set_num("x", r.state.pose.position.x);
    rec.set_num("y", r.state.pose.position.y);
    rec.set_num("heading", r.state.pose.heading);
    rec.set("status", motion_status_name(r.state.status));
    trace_.push_back(rec);
  }
  if (has_ttt_) {
    for (const auto& [rid, rs] : rooms_) {
      std::string cells;
      for (Cell c : rs.board.cells) {
        cells += c == Cell::Empty ? 'e' : (c == Cell::X ? 'x' : 'o');
      }
      Record rec = base_record("final");
      rec.set("kind", "board");
      rec.set_int("room", rid);
      rec.set("cells", cells);
      rec.set("winner", game_result_name(ttt_winner(rs.board)));
      rec.set_int("moves", rs.game_moves);
      trace_.push_back(rec);
    }
  }
  for (const auto& [rid, stats] : track_stats_) {
    Record rec = base_record("final");
    rec.set("kind", "tracking");
    rec.set_int("room", rid);
    rec.set_num("max_err", stats.max_err);
    rec.set_int("engaged_ticks", stats.engaged_ticks);
    trace_.push_back(rec);
  }
  Record done = base_record("final");
  done.set("kind", "run");
  done.set_int("violation", violation_ ? 1 : 0);
  done.set_num("min_delay", min_delay_);
  trace_.push_back(done);

  RunResult result;
  result.trace = std::move(trace_);
  result.violation = violation_;
  result.min_feasible_delay = min_delay_;
  return result;
}

}  // namespace

RunResult run_scenario(const ScenarioScript& script, const RunOverrides& overrides) {
  Engine engine(script, overrides);
  return engine.run();
}

}  // namespace proxysync
