#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "proxysync/engine.hpp"
#include "proxysync/errors.hpp"
#include "proxysync/metrics.hpp"
#include "proxysync/oracle.hpp"
#include "proxysync/scenarios.hpp"
#include "proxysync/script.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    proxysync::raise(proxysync::Err::ScriptValidation, "cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A scenario argument is either a built-in name or a path to a script file.
proxysync::ScenarioScript load_scenario(const std::string& ref) {
  if (proxysync::is_builtin_scenario(ref)) return proxysync::builtin_scenario(ref);
  std::ifstream probe(ref);
  if (probe.good()) {
    proxysync::ScenarioScript s = proxysync::parse_script(read_file(ref));
    proxysync::validate_script(s);
    return s;
  }
  proxysync::raise(proxysync::Err::ScriptValidation,
                   "'" + ref + "' is neither a built-in scenario nor a readable file");
}

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("PROXYSYNC_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    proxysync::raise(proxysync::Err::ScriptValidation,
                     "PROXYSYNC_SEED is not an unsigned integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-room haptic proxy coordination simulator"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> delay, drop, latency, jitter;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and emit its trace");
  run->add_option("--scenario", scenario_ref, "Built-in name or script path")->required();
  run->add_option("--seed", seed, "Channel seed (overrides script and env)");
  run->add_option("--delay", delay, "Render delay in seconds");
  run->add_option("--drop", drop, "Channel drop probability");
  run->add_option("--latency", latency, "Channel base latency in seconds");
  run->add_option("--jitter", jitter, "Channel jitter half-width in seconds");
  run->add_option("--out", out_path, "Write the trace to this file");

  std::string dump_ref;
  CLI::App* dump = app.add_subcommand("dump", "Print a built-in scenario script");
  dump->add_option("--scenario", dump_ref, "Built-in scenario name")->required();

  CLI::App* list = app.add_subcommand("list", "List built-in scenarios");

  CLI::App* oracle = app.add_subcommand("oracle", "Reference computations");
  oracle->require_subcommand(1);
  std::string instance_path;
  CLI::App* assign = oracle->add_subcommand(
      "assignment", "Optimal proxy-demand pairing for a small instance file");
  assign->add_option("file", instance_path, "Instance records")->required();
  std::string masking_ref;
  CLI::App* masking = oracle->add_subcommand(
      "masking", "Minimal masking render delay for a scenario");
  masking->add_option("scenario", masking_ref, "Built-in name or script path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const std::string& name : proxysync::builtin_scenario_names())
        std::cout << name << "\n";
      return kExitOk;
    }

    if (dump->parsed()) {
      std::cout << proxysync::serialize_script(proxysync::builtin_scenario(dump_ref));
      return kExitOk;
    }

    if (oracle->parsed()) {
      if (assign->parsed()) {
        const auto instance =
            proxysync::parse_assignment_instance(read_file(instance_path));
        std::cout << proxysync::solve_assignment_text(instance);
        return kExitOk;
      }
      const proxysync::ScenarioScript s = load_scenario(masking_ref);
      const double min_delay = proxysync::masking_min_delay(s);
      std::cout << "kind=masking min_delay=" << proxysync::Record::format_num(min_delay)
                << " scenario=" << s.name << "\n";
      return kExitOk;
    }

    // run
    if (drop && (*drop < 0.0 || *drop > 1.0)) {
      proxysync::raise(proxysync::Err::ScriptValidation,
                       "--drop must lie in [0, 1]");
    }
    if (delay && *delay < 0.0)
      proxysync::raise(proxysync::Err::ScriptValidation, "--delay must be >= 0");
    if (latency && *latency < 0.0)
      proxysync::raise(proxysync::Err::ScriptValidation, "--latency must be >= 0");
    if (jitter && *jitter < 0.0)
      proxysync::raise(proxysync::Err::ScriptValidation, "--jitter must be >= 0");

    proxysync::ScenarioScript script = load_scenario(scenario_ref);
    proxysync::RunOverrides overrides;
    overrides.seed = seed ? seed : seed_from_env();
    overrides.delay = delay;
    overrides.drop = drop;
    overrides.base_latency = latency;
    overrides.jitter = jitter;

    proxysync::RunResult result;
    try {
      result = proxysync::run_scenario(script, overrides);
    } catch (const proxysync::Error& e) {
      if (e.code() == proxysync::Err::ScriptValidation) throw;
      // Past validation, a raised error means the run broke an invariant.
      std::cerr << "invariant violated: " << e.what() << "\n";
      return kExitViolation;
    }
    const std::string text = proxysync::trace_text(result.trace);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        proxysync::raise(proxysync::Err::ScriptValidation,
                         "cannot write '" + out_path + "'");
      }
      out << text;
      std::cout << proxysync::metrics_summary(proxysync::compute_metrics(result.trace));
    }
    return result.violation ? kExitViolation : kExitOk;
  } catch (const proxysync::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitViolation;
  }
}
