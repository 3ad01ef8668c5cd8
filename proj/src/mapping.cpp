#include "proxysync/mapping.hpp"

#include <algorithm>
#include <limits>

#include "proxysync/errors.hpp"

namespace proxysync {

const char* binding_state_name(BindingState s) {
  return s == BindingState::Engaged ? "engaged" : "pending";
}

Vec2 one_to_one_target(const Pose2& object_pose, const RoomConfig& room) {
  validate_room(room);
  const RigidTransform2 shared_to_local = inverse(localize_room(room));
  return clamp_to_rect(apply(shared_to_local, object_pose.position), room.table);
}

std::vector<RoomTarget> many_to_one_targets(const Pose2& object_pose,
                                            const std::vector<RoomConfig>& rooms,
                                            const std::map<int, int>& room_proxies) {
  if (rooms.empty()) raise(Err::EmptyRoomSet, "no rooms to mirror into");
  std::vector<RoomTarget> out;
  out.reserve(rooms.size());
  for (const RoomConfig& room : rooms) {
    auto it = room_proxies.find(room.room_id);
    if (it == room_proxies.end()) {
      raise(Err::MissingRoomProxy,
            "room " + std::to_string(room.room_id) + " has no bound proxy");
    }
    out.push_back({room.room_id, it->second, one_to_one_target(object_pose, room)});
  }
  return out;
}

namespace {

// Distances of the chosen pairings, largest first; the objective the polish
// pass descends lexicographically.
std::vector<double> distance_profile(const std::vector<int>& assignment,
                                     const std::vector<size_t>& members,
                                     const std::vector<DemandPoint>& demands,
                                     const std::vector<ProxyPoint>& pool) {
  std::vector<double> prof;
  prof.reserve(members.size());
  for (size_t i : members) {
    prof.push_back(distance(demands[i].position, pool[assignment[i]].position));
  }
  std::sort(prof.begin(), prof.end(), std::greater<double>());
  return prof;
}

}  // namespace

DispatchResult dispatch_one_to_many(const std::vector<DemandPoint>& demands,
                                    const std::vector<ProxyPoint>& pool,
                                    const std::vector<Binding>& current,
                                    double margin) {
  if (pool.empty()) raise(Err::EmptyPool, "dispatch needs at least one proxy");

  auto pool_index_of = [&](int proxy_id) -> int {
    for (size_t j = 0; j < pool.size(); ++j) {
      if (pool[j].proxy_id == proxy_id) return static_cast<int>(j);
    }
    return -1;
  };

  std::vector<bool> used(pool.size(), false);
  std::vector<int> assignment(demands.size(), -1);
  std::vector<bool> retained(demands.size(), false);

  // Retention pass: keep an existing pairing unless some free proxy beats it
  // by more than the hysteresis margin.
  for (size_t i = 0; i < demands.size(); ++i) {
    const Binding* bound = nullptr;
    for (const Binding& b : current) {
      if (b.object_id == demands[i].object_id) {
        bound = &b;
        break;
      }
    }
    if (bound == nullptr) continue;
    int pi = pool_index_of(bound->proxy_id);
    if (pi < 0 || used[pi]) continue;
    double d_curr = distance(pool[pi].position, demands[i].position);
    double d_best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < pool.size(); ++j) {
      if (used[j] || static_cast<int>(j) == pi) continue;
      d_best = std::min(d_best, distance(pool[j].position, demands[i].position));
    }
    if (d_best < d_curr - margin) continue;  // let the greedy pass rebind it
    assignment[i] = pi;
    retained[i] = true;
    used[pi] = true;
  }

  // Greedy pass: nearest free proxy in demand order, ties to lower proxy_id.
  DispatchResult result;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (assignment[i] >= 0) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      double d = distance(pool[j].position, demands[i].position);
      if (d < best_d || (d == best_d && best >= 0 && pool[j].proxy_id < pool[best].proxy_id)) {
        best = static_cast<int>(j);
        best_d = d;
      }
    }
    if (best < 0) {
      result.queued.push_back(i);
      continue;
    }
    assignment[i] = best;
    used[best] = true;
  }

  // Improvement pass over the freshly created pairings only; retained
  // bindings are sacred (that is the whole point of the hysteresis).
  std::vector<size_t> fresh;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (assignment[i] >= 0 && !retained[i]) fresh.push_back(i);
  }
  for (int guard = 0; guard < 10000; ++guard) {
    std::vector<double> base = distance_profile(assignment, fresh, demands, pool);
    bool improved = false;
    for (size_t a = 0; a < fresh.size() && !improved; ++a) {
      for (size_t b = a + 1; b < fresh.size() && !improved; ++b) {
        std::swap(assignment[fresh[a]], assignment[fresh[b]]);
        if (distance_profile(assignment, fresh, demands, pool) < base) {
          improved = true;
        } else {
          std::swap(assignment[fresh[a]], assignment[fresh[b]]);
        }
      }
    }
    for (size_t a = 0; a < fresh.size() && !improved; ++a) {
      for (size_t j = 0; j < pool.size() && !improved; ++j) {
        if (used[j]) continue;
        int old = assignment[fresh[a]];
        assignment[fresh[a]] = static_cast<int>(j);
        if (distance_profile(assignment, fresh, demands, pool) < base) {
          used[j] = true;
          used[old] = false;
          improved = true;
        } else {
          assignment[fresh[a]] = old;
        }
      }
    }
    if (!improved) break;
  }

  for (size_t i = 0; i < demands.size(); ++i) {
    if (assignment[i] < 0) continue;
    const ProxyPoint& p = pool[assignment[i]];
    result.bindings.push_back(
        {demands[i].object_id, p.proxy_id, p.room_id, BindingState::Pending});
  }
  return result;
}

AssignmentResult optimal_assignment(const std::vector<DemandPoint>& demands,
                                    const std::vector<ProxyPoint>& pool) {
  if (pool.size() > 6 || demands.size() > pool.size()) {
    raise(Err::OracleTooLarge,
          "exhaustive search handles at most 6 proxies and |demands| <= |pool|");
  }
  AssignmentResult best;
  best.makespan = std::numeric_limits<double>::infinity();
  std::vector<int> chosen(demands.size(), -1);
  std::vector<bool> used(pool.size(), false);

  auto consider = [&]() {
    double makespan = 0.0;
    std::vector<int> ids(demands.size());
    for (size_t i = 0; i < demands.size(); ++i) {
      makespan = std::max(makespan,
                          distance(demands[i].position, pool[chosen[i]].position));
      ids[i] = pool[chosen[i]].proxy_id;
    }
    if (makespan < best.makespan ||
        (makespan == best.makespan && ids < best.proxy_for_demand)) {
      best.makespan = makespan;
      best.proxy_for_demand = ids;
    }
  };

  auto recurse = [&](auto&& self, size_t i) -> void {
    if (i == demands.size()) {
      consider();
      return;
    }
    for (size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      chosen[i] = static_cast<int>(j);
      self(self, i + 1);
      used[j] = false;
    }
  };
  recurse(recurse, 0);
  if (demands.empty()) best.makespan = 0.0;
  return best;
}

double dispatch_makespan(const DispatchResult& r,
                         const std::vector<DemandPoint>& demands,
                         const std::vector<ProxyPoint>& pool) {
  double makespan = 0.0;
  size_t next_binding = 0;
  for (size_t i = 0; i < demands.size(); ++i) {
    if (std::find(r.queued.begin(), r.queued.end(), i) != r.queued.end()) continue;
    if (next_binding >= r.bindings.size()) break;
    const Binding& b = r.bindings[next_binding++];
    for (const ProxyPoint& p : pool) {
      if (p.proxy_id == b.proxy_id) {
        makespan = std::max(makespan, distance(demands[i].position, p.position));
        break;
      }
    }
  }
  return makespan;
}

BindingState binding_state(const RobotState& proxy, const Vec2& target, double tol) {
  return distance(proxy.pose.position, target) <= tol ? BindingState::Engaged
                                                      : BindingState::Pending;
}

}  // namespace proxysync
