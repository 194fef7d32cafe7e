// dispersolve <subcommand> --config path [--out dir] [--seed n]
//
// Exit codes: 0 pass, 1 fail or inconclusive, 2 configuration error,
// 3 solver abort.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "dispersolve/commands.hpp"
#include "dispersolve/config.hpp"
#include "dispersolve/errors.hpp"
#include "dispersolve/run_io.hpp"
#include "dispersolve/trajectory_io.hpp"

using namespace dispersolve;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string trajectory;
  std::vector<std::string> norms;
};

void report(const Manifest& m) {
  std::cout << (m.reused ? "existing run: " : "run: ") << m.directory.string() << "\n"
            << "verdict: " << m.verdict << (m.nan_present ? " (nan present)" : "") << "\n";
}

void print_summary(const ExperimentResult& r) {
  for (const auto& [k, v] : r.summary) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

/// norms without --config: evaluate and print JSON, nothing stored.
int standalone_norms(const Options& o) {
  const auto r = norm_report(read_trajectory(o.trajectory), o.norms);
  nlohmann::json j = nlohmann::json::parse(result_json(r));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run(const std::string& command, const Options& o) {
  if (command == "norms" && o.config.empty()) {
    if (o.trajectory.empty() || o.norms.empty()) {
      std::cerr << "norms: give --config, or --trajectory and --norm\n";
      return 2;
    }
    return standalone_norms(o);
  }
  if (o.config.empty()) {
    std::cerr << command << ": --config is required\n";
    return 2;
  }
  RunConfig cfg = load_config(o.config, command);
  if (cfg.experiment != command) {
    throw ConfigError("experiment.name: config is for '" + cfg.experiment +
                      "', not for subcommand '" + command + "'");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.directory = o.out;
  if (command == "norms") {
    if (!o.trajectory.empty()) cfg.parameters["trajectory"] = o.trajectory;
    if (!o.norms.empty()) cfg.parameters["norms"] = o.norms;
  }

  if (auto existing = existing_run(cfg.directory, cfg)) {
    report(*existing);
    return exit_code(existing->verdict);
  }
  if (command == "solve") {
    const SolverConfig sc = solver_config(cfg);
    const Trajectory t = solve(sc, initial_field(cfg.initial, sc.grid, cfg.seed));
    if (!t.completed()) {
      std::cout << "  " << to_string(t.status) << " at t = " << t.failure_time << ": "
                << t.failure_message << "\n";
    }
    const Manifest m = write_result(cfg.directory, cfg, t);
    report(m);
    return exit_code(m.verdict);
  }
  const ExperimentResult r = run_experiment(cfg);
  print_summary(r);
  const Manifest m = write_result(cfg.directory, cfg, r);
  report(m);
  return exit_code(m.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic dispersive-equation solver and experiment runner"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"solve", "integrate from the configured initial data and store the trajectory"},
      {"norms", "evaluate norms of a stored trajectory"},
      {"diss-limit", "distance to the non-dissipative solution as epsilon -> 0"},
      {"scaling-test", "compare a solve with its rescaled counterpart"},
      {"bona-smith", "Cauchy table of solutions from frequency-truncated rough data"},
      {"certify-symbol", "sampled resonance and derivative bounds of a dispersion symbol"},
      {"resonance-test", "trilinear integrals over (N, L)-localized functions"},
      {"meter", "sweep the ratio of an inequality's two sides"},
      {"existence-probe", "numerical failure time against data amplitude"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "run configuration file");
    sub->add_option("--out", o.out, "root directory for run directories");
    sub->add_option("--seed", o.seed, "override the configured seed");
    if (name == "norms") {
      sub->add_option("--trajectory", o.trajectory, "trajectory file written by solve");
      sub->add_option("--norm", o.norms, "norm specification, e.g. Xsb:s=0,b=0.5");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const ArgumentError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
