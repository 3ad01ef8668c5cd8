#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxysync/record.hpp"
#include "proxysync/script.hpp"

namespace proxysync {

// Command-line / environment overrides applied on top of a script before a
// run. Unset fields keep the script's values.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> delay;
  std::optional<double> base_latency;
  std::optional<double> jitter;
  std::optional<double> drop;
};

struct RunResult {
  std::vector<Record> trace;
  // Set when the run breached an invariant (proxy separation, illegal board
  // move). The run still completes so the trace shows what happened.
  bool violation = false;
  // Max go-to-goal time bound observed over every driven proxy tick: the
  // smallest render delay that provably masks every chase in this run.
  double min_feasible_delay = 0.0;
};

// Executes a validated script tick by tick and returns the trace. The run is
// a pure function of (script, overrides): same inputs, same bytes out.
RunResult run_scenario(const ScenarioScript& script, const RunOverrides& overrides = {});

inline std::string trace_text(const std::vector<Record>& trace) {
  return serialize_records(trace);
}

}  // namespace proxysync
