#pragma once

#include <map>
#include <string>
#include <vector>

#include "proxysync/record.hpp"

namespace proxysync {

// One proxy-backed contact and how it played out: `lead` is how long the
// proxy had been in place when the user saw the touch (negative when the
// proxy was late), and `masked` is whether it arrived in time.
struct ContactOutcome {
  double time = 0.0;
  int room = 0;
  std::string object;
  std::string kind;  // "grab" or "strike"
  double lead = 0.0;
  bool masked = false;
};

struct Metrics {
  // Relocation travel times: from each commanded target jump to the moment
  // the proxy's binding engages.
  std::vector<double> travel_times;
  std::vector<ContactOutcome> contacts;
  // Times a proxy was re-pointed at a different object (initial assignments
  // are not switches).
  int binding_switches = 0;
  // Commanded destination tile -> whether the object ended on it.
  std::map<int, bool> tile_outcomes;
  int game_moves = 0;
  std::string winner;  // "", "none", "x", "o", "draw"
  bool boards_agree = true;
  double max_engaged_tracking_err = 0.0;
  long engaged_ticks = 0;
  bool safety_violation = false;
  double duration = 0.0;
  double delay = 0.0;
  std::string scenario;

  bool all_contacts_masked() const {
    for (const ContactOutcome& c : contacts) {
      if (!c.masked) return false;
    }
    return true;
  }
};

Metrics compute_metrics(const std::vector<Record>& trace);

// Human-oriented run summary, one "key=value" line per figure.
std::string metrics_summary(const Metrics& m);

}  // namespace proxysync
