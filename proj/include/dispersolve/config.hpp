#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dispersolve/solver.hpp"

namespace dispersolve {

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>,
                                 std::vector<std::string>>;

/// A run description. Text layout (a TOML subset: one `key = value` per line,
/// strings in double quotes, single-line arrays, `#` comments):
///
///   seed = 1
///   [equation]   dispersion, dissipation, alpha, beta, epsilon, integrator, dealias
///   [grid]       length (number or "<c>pi"), n
///   [time]       dt, t_end, record_stride, max_amplitude, max_tail_fraction
///   [experiment] name, initial, then the keys of that experiment
///   [output]     directory, formats
///
/// alpha and beta default to the orders of the dispersion and dissipation
/// symbols.
struct RunConfig {
  std::uint64_t seed = 0;

  std::string dispersion = "purepower:alpha=1";
  std::string dissipation = "none";
  double alpha = 1.0;
  double beta = 0.0;
  double epsilon = 0.0;
  std::string integrator = "etdrk4";
  bool dealias = true;

  double length = 2.0 * std::numbers::pi;
  int n = 64;

  double dt = 1e-3;
  double t_end = 1.0;
  int record_stride = 1;
  double max_amplitude = 1e6;
  double max_tail_fraction = 0.1;

  std::string experiment = "solve";
  std::string initial = "fourier:a1=1";
  /// Keys of the experiment, defaults filled in; optional keys may be absent.
  std::map<std::string, ConfigValue> parameters;

  std::string directory = "runs";
  std::vector<std::string> formats{"json", "csv"};

  /// Key paths ("grid.n", "experiment.min_order", ...) that took their default.
  std::vector<std::string> defaulted;

  bool has(const std::string& key) const { return parameters.count(key) > 0; }
  double number(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& numbers(const std::string& key) const;
  const std::vector<std::string>& texts(const std::string& key) const;

  /// Equal settings; `defaulted` is ignored.
  bool operator==(const RunConfig& other) const;
};

/// Experiments known to the configuration, in CLI order.
const std::vector<std::string>& experiment_names();

/// Throws ConfigError naming the key path and line on unknown or duplicate
/// keys, type mismatches and cross-field violations. `default_experiment`
/// applies when the text has no experiment.name.
RunConfig parse_config(std::string_view text, std::string_view default_experiment = "solve");
RunConfig load_config(const std::string& path, std::string_view default_experiment = "solve");

/// Canonical text: every key explicit, fixed order, shortest round-trip
/// numbers. parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

SolverConfig solver_config(const RunConfig& config);

}  // namespace dispersolve
