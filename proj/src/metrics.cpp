#include "proxysync/metrics.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

#include "proxysync/sync.hpp"

namespace proxysync {

namespace {

struct BindEvent {
  double t = 0.0;
  int proxy = 0;
  bool engaged = false;
};

struct MoveEvent {
  double t = 0.0;
};

}  // namespace

Metrics compute_metrics(const std::vector<Record>& trace) {
  Metrics m;

  // (room, object) -> binding state transitions, in trace order.
  std::map<std::pair<int, std::string>, std::vector<BindEvent>> binds;
  // (room, proxy) -> served objects over time, for switch counting.
  std::map<std::pair<int, int>, std::vector<std::pair<double, std::string>>> served;
  // (room, proxy) -> target jumps.
  std::map<std::pair<int, int>, std::vector<double>> moves;
  struct RawContact {
    double t;
    int room;
    std::string object;
    std::string kind;
  };
  std::vector<RawContact> raw_contacts;
  std::map<std::string, int> commanded_tile;  // object -> last commanded tile
  std::map<std::string, int> final_tile;
  std::vector<std::string> board_cells;

  for (const Record& r : trace) {
    const std::string ev = r.get_or("ev", "");
    if (ev == "meta") {
      m.scenario = r.get_or("scenario", "");
      m.duration = r.get_num_or("duration", 0.0);
      m.delay = r.get_num_or("delay", 0.0);
    } else if (ev == "bind") {
      const int room = static_cast<int>(r.get_int("room"));
      const int proxy = static_cast<int>(r.get_int("proxy"));
      const std::string object = r.get("object");
      const double t = r.get_num("t");
      binds[{room, object}].push_back({t, proxy, r.get("state") == "engaged"});
      auto& history = served[{room, proxy}];
      if (history.empty() || history.back().second != object)
        history.push_back({t, object});
    } else if (ev == "move") {
      moves[{static_cast<int>(r.get_int("room")),
             static_cast<int>(r.get_int("proxy"))}]
          .push_back(r.get_num("t"));
    } else if (ev == "contact") {
      raw_contacts.push_back({r.get_num("t"), static_cast<int>(r.get_int("room")),
                              r.get("object"), r.get("kind")});
    } else if (ev == "gesture") {
      if (r.get_or("kind", "") == "command")
        commanded_tile[r.get("object")] = static_cast<int>(r.get_int("dest_tile"));
    } else if (ev == "game") {
      if (r.get_or("state", "") != "rejected") ++m.game_moves;
    } else if (ev == "safety") {
      m.safety_violation = true;
    } else if (ev == "final") {
      const std::string kind = r.get_or("kind", "");
      if (kind == "object") {
        final_tile[r.get("entity")] = static_cast<int>(r.get_int("tile"));
      } else if (kind == "board") {
        board_cells.push_back(r.get("cells"));
        if (m.winner.empty()) m.winner = r.get("winner");
      } else if (kind == "tracking") {
        m.max_engaged_tracking_err =
            std::max(m.max_engaged_tracking_err, r.get_num("max_err"));
        m.engaged_ticks += r.get_int("engaged_ticks");
      } else if (kind == "run") {
        if (r.get_int("violation") != 0) m.safety_violation = true;
      }
    }
  }

  // A switch is a proxy re-pointed at a different object; the first object a
  // proxy ever serves is its initial assignment, not a switch.
  for (const auto& [key, history] : served) {
    (void)key;
    if (history.size() > 1)
      m.binding_switches += static_cast<int>(history.size()) - 1;
  }

  // Travel time: each target jump matures at the proxy's next engagement,
  // unless another jump replaces it first.
  for (const auto& [key, jump_times] : moves) {
    std::vector<BindEvent> proxy_binds;
    for (const auto& [bkey, events] : binds) {
      if (bkey.first != key.first) continue;
      for (const BindEvent& e : events) {
        if (e.proxy == key.second) proxy_binds.push_back(e);
      }
    }
    std::sort(proxy_binds.begin(), proxy_binds.end(),
              [](const BindEvent& a, const BindEvent& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < jump_times.size(); ++i) {
      const double t0 = jump_times[i];
      const double t1 = i + 1 < jump_times.size()
                            ? jump_times[i + 1]
                            : std::numeric_limits<double>::infinity();
      for (const BindEvent& e : proxy_binds) {
        if (e.engaged && e.t >= t0) {
          if (e.t < t1) m.travel_times.push_back(e.t - t0);
          break;
        }
      }
    }
  }

  // Contacts: the proxy's arrival is the start of the engaged stretch the
  // contact falls into (or the next engagement if it was still en route).
  for (const RawContact& rc : raw_contacts) {
    ContactOutcome out;
    out.time = rc.t;
    out.room = rc.room;
    out.object = rc.object;
    out.kind = rc.kind;
    const auto it = binds.find({rc.room, rc.object});
    std::optional<double> arrival;
    if (it != binds.end()) {
      const std::vector<BindEvent>& events = it->second;
      // The contact itself can flip the binding (a grab starts a carry), so
      // only transitions strictly before the contact establish presence.
      for (const BindEvent& e : events) {
        if (e.t >= rc.t) break;
        if (e.engaged) arrival = e.t;
        else arrival.reset();
      }
      if (!arrival) {
        for (const BindEvent& e : events) {  // first engagement at/after contact
          if (e.t >= rc.t && e.engaged) {
            arrival = e.t;
            break;
          }
        }
      }
    }
    if (arrival) {
      out.masked = mask_check(*arrival, rc.t);
      out.lead = rc.t - *arrival;
    } else {
      out.masked = false;
      out.lead = rc.t - m.duration;
    }
    m.contacts.push_back(out);
  }

  for (const auto& [object, tile] : commanded_tile) {
    const auto it = final_tile.find(object);
    m.tile_outcomes[tile] = it != final_tile.end() && it->second == tile;
  }

  for (std::size_t i = 1; i < board_cells.size(); ++i) {
    if (board_cells[i] != board_cells[0]) m.boards_agree = false;
  }

  return m;
}

std::string metrics_summary(const Metrics& m) {
  std::ostringstream out;
  out << "scenario=" << m.scenario << "\n";
  int masked = 0;
  for (const ContactOutcome& c : m.contacts) masked += c.masked ? 1 : 0;
  out << "contacts=" << m.contacts.size() << " masked=" << masked << "\n";
  for (const ContactOutcome& c : m.contacts) {
    out << "contact t=" << Record::format_num(c.time) << " room=" << c.room
        << " object=" << c.object << " kind=" << c.kind
        << " lead=" << Record::format_num(c.lead)
        << " masked=" << (c.masked ? 1 : 0) << "\n";
  }
  out << "travels=" << m.travel_times.size();
  for (double t : m.travel_times) out << " " << Record::format_num(t);
  out << "\n";
  out << "binding_switches=" << m.binding_switches << "\n";
  if (!m.tile_outcomes.empty()) {
    int ok = 0;
    for (const auto& [tile, hit] : m.tile_outcomes) {
      (void)tile;
      ok += hit ? 1 : 0;
    }
    out << "tiles_ok=" << ok << "/" << m.tile_outcomes.size() << "\n";
  }
  if (!m.winner.empty()) {
    out << "game_moves=" << m.game_moves << " winner=" << m.winner
        << " boards_agree=" << (m.boards_agree ? 1 : 0) << "\n";
  }
  if (m.engaged_ticks > 0) {
    out << "engaged_ticks=" << m.engaged_ticks
        << " max_tracking_err=" << Record::format_num(m.max_engaged_tracking_err)
        << "\n";
  }
  out << "safety=" << (m.safety_violation ? "violated" : "ok") << "\n";
  return out.str();
}

}  // namespace proxysync
