#include "dispersolve/run_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/trajectory_io.hpp"
#include "format.hpp"

namespace dispersolve {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::format_double;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

std::string hashed_text(RunConfig c) {
  c.directory.clear();
  return serialize(c);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

/// JSON number, or null for NaN and infinities.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json manifest_json(const Manifest& m) {
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"file", f.file}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return {{"run_id", m.run_id},     {"kind", m.kind},   {"verdict", m.verdict},
          {"nan_present", m.nan_present}, {"files", files}};
}

/// Collects files in a scratch directory, then moves it into place.
class RunWriter {
 public:
  RunWriter(const fs::path& root, const RunConfig& config, std::string kind)
      : root_(root), config_(config) {
    manifest_.run_id = run_id(config);
    manifest_.kind = std::move(kind);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create '" + root.string() + "': " + ec.message());
    std::random_device rd;
    scratch_ = root / (".tmp-" + manifest_.run_id + "-" + std::to_string(rd()));
    fs::create_directory(scratch_, ec);
    if (ec) throw IoError("cannot create '" + scratch_.string() + "': " + ec.message());
    add("config.toml", serialize(config));
  }
  ~RunWriter() {
    std::error_code ec;
    if (!scratch_.empty()) fs::remove_all(scratch_, ec);
  }

  void add(const std::string& name, const std::string& text) {
    write_file(scratch_ / name, text);
    record(name);
  }
  /// For files produced by another writer into path(name).
  fs::path path(const std::string& name) const { return scratch_ / name; }
  void record(const std::string& name) {
    const std::string text = read_file(scratch_ / name);
    manifest_.files.push_back({name, sha256_hex(text), text.size()});
  }

  Manifest commit(const std::string& verdict, bool nan_present) {
    manifest_.verdict = verdict;
    manifest_.nan_present = nan_present;
    write_file(scratch_ / "manifest.json", manifest_json(manifest_).dump(2) + "\n");
    const fs::path final_dir = run_directory(root_, config_);
    std::error_code ec;
    fs::rename(scratch_, final_dir, ec);
    if (ec) {
      // Another writer finished first.
      if (auto m = existing_run(root_, config_)) return *m;
      throw IoError("cannot move run into '" + final_dir.string() + "': " + ec.message());
    }
    scratch_.clear();
    manifest_.directory = final_dir;
    return manifest_;
  }

 private:
  fs::path root_;
  RunConfig config_;
  fs::path scratch_;
  Manifest manifest_;
};

bool wants(const RunConfig& c, const std::string& format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

json config_echo(const RunConfig& c) {
  return {{"text", serialize(c)}, {"defaulted", c.defaulted}, {"run_id", run_id(c)}};
}

std::string csv_name(const ResultTable& t) {
  std::string name = t.name.empty() ? "table" : t.name;
  for (char& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return name + ".csv";
}

}  // namespace

std::string run_id(const RunConfig& config) { return sha256_hex(hashed_text(config)).substr(0, 16); }

fs::path run_directory(const fs::path& root, const RunConfig& config) {
  return root / run_id(config);
}

Manifest read_manifest(const fs::path& run_dir) {
  json j;
  try {
    j = json::parse(read_file(run_dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw IoError("unreadable manifest in '" + run_dir.string() + "': " + e.what());
  }
  Manifest m;
  m.run_id = j.at("run_id");
  m.kind = j.at("kind");
  m.verdict = j.at("verdict");
  m.nan_present = j.at("nan_present");
  m.directory = run_dir;
  for (const auto& f : j.at("files")) {
    m.files.push_back({f.at("file"), f.at("sha256"), f.at("bytes").get<std::uintmax_t>()});
  }
  return m;
}

bool verify_manifest(const fs::path& run_dir) {
  const Manifest m = read_manifest(run_dir);
  for (const auto& f : m.files) {
    if (!fs::exists(run_dir / f.file)) return false;
    const std::string text = read_file(run_dir / f.file);
    if (text.size() != f.bytes || sha256_hex(text) != f.sha256) return false;
  }
  return true;
}

std::optional<Manifest> existing_run(const fs::path& root, const RunConfig& config) {
  const fs::path dir = run_directory(root, config);
  if (!fs::exists(dir)) return std::nullopt;
  std::string stored;
  try {
    stored = hashed_text(parse_config(read_file(dir / "config.toml")));
  } catch (const Error& e) {
    throw IoError("run directory '" + dir.string() + "' holds an unreadable config: " + e.what());
  }
  if (stored != hashed_text(config)) {
    throw IoError("run directory '" + dir.string() +
                  "' holds a different config with the same hash; refusing to overwrite");
  }
  Manifest m = read_manifest(dir);
  m.reused = true;
  return m;
}

std::string table_csv(const ResultTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

std::string result_json(const ExperimentResult& r) {
  json summary = json::object(), thresholds = json::object();
  for (const auto& [k, v] : r.summary) summary[k] = number(v);
  for (const auto& [k, v] : r.thresholds) thresholds[k] = number(v);
  json fits = json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"name", f.name},
                    {"slope", number(f.slope)},
                    {"intercept", number(f.intercept)},
                    {"residual", number(f.residual)},
                    {"points", f.points}});
  }
  json tables = json::array();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (double v : row) jr.push_back(number(v));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"file", csv_name(t)}, {"columns", t.columns}, {"rows", rows}});
  }
  json j = {{"name", r.name},
            {"seed", r.seed},
            {"verdict", to_string(r.verdict)},
            {"solver_abort", r.solver_abort},
            {"summary", summary},
            {"thresholds", thresholds},
            {"fits", fits},
            {"notes", r.notes},
            {"tables", tables}};
  return j.dump(2) + "\n";
}

Manifest write_result(const fs::path& root, const RunConfig& config, const ExperimentResult& r) {
  if (auto m = existing_run(root, config)) return *m;
  RunWriter w(root, config, "experiment");
  json result = json::parse(result_json(r));
  result["config"] = config_echo(config);
  w.add("result.json", result.dump(2) + "\n");

  bool nan = false;
  for (const auto& [k, v] : r.summary) nan = nan || std::isnan(v);
  for (const auto& f : r.fits) nan = nan || std::isnan(f.slope) || std::isnan(f.residual);
  bool any_rows = false;
  json schema = json::array();
  for (const auto& t : r.tables) {
    any_rows = any_rows || !t.rows.empty();
    for (const auto& row : t.rows) {
      for (double v : row) nan = nan || std::isnan(v);
    }
    json cols = json::array();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      cols.push_back({{"name", t.columns[i]},
                      {"doc", i < t.column_docs.size() ? t.column_docs[i] : ""}});
    }
    schema.push_back({{"file", csv_name(t)}, {"columns", cols}});
    if (wants(config, "csv")) w.add(csv_name(t), table_csv(t));
  }
  w.add("schema.json", json{{"tables", schema}}.dump(2) + "\n");

  std::string verdict = to_string(r.verdict);
  if (r.solver_abort) {
    verdict = "solver-abort";
  } else if (!any_rows) {
    verdict = "inconclusive";
  }
  return w.commit(verdict, nan);
}

Manifest write_result(const fs::path& root, const RunConfig& config, const Trajectory& t) {
  if (auto m = existing_run(root, config)) return *m;
  RunWriter w(root, config, "trajectory");
  write_trajectory(w.path("trajectory.bin").string(), t);
  w.record("trajectory.bin");
  bool nan = false;
  for (const auto& d : t.diagnostics) {
    nan = nan || std::isnan(d.mass) || std::isnan(d.hamiltonian) || std::isnan(d.max_abs);
  }
  for (const auto& s : t.snapshots) {
    for (double v : s.values()) nan = nan || std::isnan(v);
  }
  if (wants(config, "csv")) {
    write_diagnostics_csv(w.path("diagnostics.csv").string(), t);
    w.record("diagnostics.csv");
  }
  json result = {{"name", "solve"},
                 {"status", to_string(t.status)},
                 {"failure_time", t.failure_time},
                 {"failure_message", t.failure_message},
                 {"dt_used", t.dt_used},
                 {"snapshots", t.snapshots.size()},
                 {"config", config_echo(config)}};
  if (!t.diagnostics.empty()) {
    const auto& first = t.diagnostics.front();
    const auto& last = t.diagnostics.back();
    result["mass_drift"] = number(std::abs(last.mass - first.mass) /
                                  std::max(std::abs(first.mass), 1e-300));
    result["hamiltonian_drift"] = number(std::abs(last.hamiltonian - first.hamiltonian) /
                                         std::max(std::abs(first.hamiltonian), 1e-300));
  }
  w.add("result.json", result.dump(2) + "\n");
  const json cols = json::array({{{"name", "t"}, {"doc", "time"}},
                                 {{"name", "mass"}, {"doc", "integral of u"}},
                                 {{"name", "hamiltonian"}, {"doc", "conserved energy"}},
                                 {{"name", "max_abs"}, {"doc", "max |u|"}},
                                 {{"name", "tail"}, {"doc", "energy fraction in n/6 < |k| <= n/3"}}});
  w.add("schema.json",
        json{{"tables", json::array({{{"file", "diagnostics.csv"}, {"columns", cols}}})}}.dump(2) +
            "\n");
  return w.commit(t.completed() ? "pass" : "solver-abort", nan);
}

Manifest write_result(const fs::path& root, const RunConfig& config,
                      const HypothesisCertificate& c) {
  if (auto m = existing_run(root, config)) return *m;
  RunWriter w(root, config, "certificate");
  auto point = [](const WitnessPoint& p) {
    return json{{"lambda", p.lambda}, {"xi1", p.xi1}, {"xi2", p.xi2}, {"ratio", number(p.ratio)}};
  };
  json j = {{"family", c.family},
            {"region", c.region_description},
            {"ratio_min", number(c.ratio_min)},
            {"ratio_max", number(c.ratio_max)},
            {"samples", c.samples},
            {"excluded", c.excluded},
            {"certified", c.certified},
            {"argmin", point(c.argmin)},
            {"argmax", point(c.argmax)},
            {"config", config_echo(config)}};
  w.add("certificate.json", j.dump(2) + "\n");
  w.add("schema.json", json{{"tables", json::array()}}.dump(2) + "\n");
  const bool nan = std::isnan(c.ratio_min) || std::isnan(c.ratio_max);
  return w.commit(c.samples == 0 ? "inconclusive" : c.certified ? "pass" : "fail", nan);
}

}  // namespace dispersolve
