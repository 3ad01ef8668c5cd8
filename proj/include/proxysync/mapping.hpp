#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxysync/geometry.hpp"
#include "proxysync/proxy.hpp"

namespace proxysync {

enum class MappingPolicy { OneToOne, ManyToOne, OneToMany };
enum class BindingState { Pending, Engaged };
enum class DemandSource { HandProximity, GestureCommand, RemoteObject };

const char* binding_state_name(BindingState s);

struct Binding {
  std::string object_id;
  int proxy_id = 0;
  int room_id = 0;
  BindingState state = BindingState::Pending;
  bool operator==(const Binding&) const = default;
};

// Where a proxy is wanted: the position of the demand in the shared frame and
// which object the demand stands for.
struct DemandPoint {
  Vec2 position;
  DemandSource source = DemandSource::HandProximity;
  std::string object_id;
};

// A pool member for dispatch: proxy identity plus its current position in the
// shared frame.
struct ProxyPoint {
  int proxy_id = 0;
  int room_id = 0;
  Vec2 position;
};

// Target, in the room's local frame, for a proxy mirroring an object at the
// given shared-frame pose: inverse localization followed by a clamp onto the
// room's own table.
Vec2 one_to_one_target(const Pose2& object_pose, const RoomConfig& room);

struct RoomTarget {
  int room_id = 0;
  int proxy_id = 0;
  Vec2 target;  // room-local frame
};

// One mirrored target per participating room. room_proxies maps room_id to
// the proxy bound in that room; a missing entry raises MissingRoomProxy.
std::vector<RoomTarget> many_to_one_targets(const Pose2& object_pose,
                                            const std::vector<RoomConfig>& rooms,
                                            const std::map<int, int>& room_proxies);

struct DispatchResult {
  std::vector<Binding> bindings;       // one per served demand, demand order
  std::vector<size_t> queued;          // demand indices beyond pool capacity, FIFO
};

// Demand-driven assignment of a proxy pool:
//  - a demand keeps its currently bound proxy unless some free proxy is
//    closer by more than `margin` (hysteresis against churn);
//  - remaining demands take the nearest free proxy, demand order, ties to the
//    lower proxy_id;
//  - oversubscribed demands are queued FIFO;
//  - freshly created bindings (not the hysteresis-retained ones) then go
//    through a local improvement pass that swaps pairs or rebinds to an idle
//    proxy whenever that strictly lowers the sorted distance profile, which
//    keeps the worst travel leg near the optimum.
// Raises EmptyPool.
DispatchResult dispatch_one_to_many(const std::vector<DemandPoint>& demands,
                                    const std::vector<ProxyPoint>& pool,
                                    const std::vector<Binding>& current,
                                    double margin);

struct AssignmentResult {
  std::vector<int> proxy_for_demand;  // pool proxy_id per demand index
  double makespan = 0.0;              // max travel distance over the pairing
};

// Exhaustive minimum-makespan pairing for small instances; the quality oracle
// for dispatch_one_to_many. Requires |demands| <= |pool| <= 6, otherwise
// raises OracleTooLarge. Ties break toward the lexicographically smallest
// proxy_id sequence.
AssignmentResult optimal_assignment(const std::vector<DemandPoint>& demands,
                                    const std::vector<ProxyPoint>& pool);

// Greedy makespan for comparing against the oracle: the max distance between
// each served demand and its proxy's position in `pool`.
double dispatch_makespan(const DispatchResult& r,
                         const std::vector<DemandPoint>& demands,
                         const std::vector<ProxyPoint>& pool);

// Engaged exactly when the proxy sits within tol of its target (closed
// condition at the boundary); Pending is the "loading" state.
BindingState binding_state(const RobotState& proxy, const Vec2& target, double tol);

}  // namespace proxysync
