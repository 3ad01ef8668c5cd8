#pragma once

#include <string>
#include <vector>

#include "proxysync/mapping.hpp"
#include "proxysync/script.hpp"

namespace proxysync {

// A dispatch instance in record form: `kind=proxy proxy=N x=.. y=..` pool
// rows and `kind=demand x=.. y=.. [object=..]` demand rows.
struct AssignmentInstance {
  std::vector<DemandPoint> demands;
  std::vector<ProxyPoint> pool;
};

AssignmentInstance parse_assignment_instance(const std::string& text);

// Exhaustive minimum-makespan solution, one `kind=assignment` record per
// demand plus a closing `kind=makespan` record.
std::string solve_assignment_text(const AssignmentInstance& instance);

// Smallest render delay that would have masked every proxy chase in a run of
// this scenario: the max go-to-goal time bound over all driven ticks.
double masking_min_delay(const ScenarioScript& script);

}  // namespace proxysync
