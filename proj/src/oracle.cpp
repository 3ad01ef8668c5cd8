#include "proxysync/oracle.hpp"

#include "proxysync/engine.hpp"
#include "proxysync/errors.hpp"
#include "proxysync/geometry.hpp"
#include "proxysync/record.hpp"

namespace proxysync {

AssignmentInstance parse_assignment_instance(const std::string& text) {
  AssignmentInstance inst;
  for (const Record& r : parse_records(text)) {
    const std::string kind = r.get("kind");
    if (kind == "proxy") {
      ProxyPoint p;
      p.proxy_id = static_cast<int>(r.get_int("proxy"));
      p.room_id = r.has("room") ? static_cast<int>(r.get_int("room")) : 0;
      p.position = {r.get_num("x"), r.get_num("y")};
      inst.pool.push_back(p);
    } else if (kind == "demand") {
      DemandPoint d;
      d.position = {r.get_num("x"), r.get_num("y")};
      d.object_id = r.get_or("object", "");
      inst.demands.push_back(d);
    } else {
      raise(Err::ScriptValidation, "unknown instance record kind '" + kind + "'");
    }
  }
  return inst;
}

std::string solve_assignment_text(const AssignmentInstance& instance) {
  const AssignmentResult result = optimal_assignment(instance.demands, instance.pool);
  std::vector<Record> out;
  for (std::size_t i = 0; i < result.proxy_for_demand.size(); ++i) {
    const int proxy = result.proxy_for_demand[i];
    Record r;
    r.set("kind", "assignment");
    r.set_int("demand", static_cast<long long>(i));
    r.set_int("proxy", proxy);
    for (const ProxyPoint& p : instance.pool) {
      if (p.proxy_id == proxy)
        r.set_num("dist", distance(p.position, instance.demands[i].position));
    }
    out.push_back(r);
  }
  Record mk;
  mk.set("kind", "makespan");
  mk.set_num("value", result.makespan);
  out.push_back(mk);
  return serialize_records(out);
}

double masking_min_delay(const ScenarioScript& script) {
  return run_scenario(script).min_feasible_delay;
}

}  // namespace proxysync
