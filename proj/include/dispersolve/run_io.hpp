#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispersolve/config.hpp"
#include "dispersolve/experiments.hpp"
#include "dispersolve/solver.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

std::string sha256_hex(std::string_view data);

/// First 16 hex digits of the SHA-256 of the canonical config with the output
/// directory blanked (where a run is stored does not change what it is).
std::string run_id(const RunConfig& config);

struct ManifestEntry {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::string run_id;
  std::filesystem::path directory;
  std::string kind;     // "experiment", "trajectory", "certificate"
  std::string verdict;  // pass, fail, inconclusive, solver-abort
  bool nan_present = false;
  /// The run already existed with the same config; nothing was written.
  bool reused = false;
  std::vector<ManifestEntry> files;
};

/// Run directory `root / run_id(config)`. When it exists with the same config
/// the existing manifest is returned with `reused` set; when it exists with a
/// different config (a hash collision) IoError is raised.
std::filesystem::path run_directory(const std::filesystem::path& root, const RunConfig& config);
std::optional<Manifest> existing_run(const std::filesystem::path& root, const RunConfig& config);

/// Writes config.toml, result.json, one CSV per table, schema.json and
/// manifest.json (SHA-256 and size of every other file). Files are written to
/// a scratch directory that is renamed into place.
Manifest write_result(const std::filesystem::path& root, const RunConfig& config,
                      const ExperimentResult& result);
/// Trajectory runs store trajectory.bin, diagnostics.csv and a result.json
/// with the solve status.
Manifest write_result(const std::filesystem::path& root, const RunConfig& config,
                      const Trajectory& trajectory);
Manifest write_result(const std::filesystem::path& root, const RunConfig& config,
                      const HypothesisCertificate& certificate);

Manifest read_manifest(const std::filesystem::path& run_dir);
/// Recomputes every listed hash; false on any mismatch or missing file.
bool verify_manifest(const std::filesystem::path& run_dir);

/// result.json text (NaN and infinities become null).
std::string result_json(const ExperimentResult& result);
/// CSV text of one table; NaN is written as "nan".
std::string table_csv(const ResultTable& table);

}  // namespace dispersolve
