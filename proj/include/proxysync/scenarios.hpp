#pragma once

#include <string>
#include <vector>

#include "proxysync/script.hpp"

namespace proxysync {

// Names of the built-in scenarios, in listing order: the four demos first,
// then the nine single-room gesture fixtures.
std::vector<std::string> builtin_scenario_names();

bool is_builtin_scenario(const std::string& name);

// Returns the named built-in script (already valid). Raises
// Err::ScriptValidation for an unknown name.
ScenarioScript builtin_scenario(const std::string& name);

}  // namespace proxysync
