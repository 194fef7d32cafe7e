#include "dispersolve/trajectory_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <json.hpp>

#include "dispersolve/errors.hpp"
#include "format.hpp"

namespace dispersolve {

using nlohmann::json;

namespace {

void put_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get_f64(std::istream& in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

json config_json(const SolverConfig& c) {
  return {
      {"dispersion", c.dispersion.to_string()},
      {"dissipation", c.dissipation ? c.dissipation->to_string() : "none"},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"epsilon", c.epsilon},
      {"length", c.grid.length()},
      {"n", c.grid.n()},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"integrator", to_string(c.integrator)},
      {"dealias", c.dealias},
      {"record_stride", c.record_stride},
      {"seed", c.seed},
  };
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.dispersion = SymbolSpec::parse(j.at("dispersion").get<std::string>(), SymbolRole::Dispersion);
  const auto diss = j.at("dissipation").get<std::string>();
  if (diss != "none") c.dissipation = SymbolSpec::parse(diss, SymbolRole::Dissipation);
  c.alpha = j.at("alpha");
  c.beta = j.at("beta");
  c.epsilon = j.at("epsilon");
  c.grid = Grid(j.at("length").get<double>(), j.at("n").get<int>());
  c.dt = j.at("dt");
  c.t_end = j.at("t_end");
  c.integrator = parse_integrator(j.at("integrator").get<std::string>());
  c.dealias = j.at("dealias");
  c.record_stride = j.at("record_stride");
  c.seed = j.at("seed");
  return c;
}

}  // namespace

void write_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  json diag = json::array();
  for (const auto& d : traj.diagnostics) {
    diag.push_back({d.time, d.mass, d.hamiltonian, d.max_abs, d.tail_fraction});
  }
  const json header = {
      {"format", "dispersolve-trajectory-1"},
      {"config", config_json(traj.config)},
      {"status", to_string(traj.status)},
      {"failure_time", traj.failure_time},
      {"failure_message", traj.failure_message},
      {"dt_used", traj.dt_used},
      {"snapshots", traj.snapshots.size()},
      {"diagnostics_schema", {"time", "mass", "hamiltonian", "max_abs", "tail_fraction"}},
      {"diagnostics", diag},
  };
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    put_f64(out, traj.times[i]);
    for (double v : traj.snapshots[i].values()) put_f64(out, v);
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': bad trajectory header: " + e.what());
  }
  Trajectory traj;
  try {
    if (header.at("format") != "dispersolve-trajectory-1") {
      throw IoError("'" + path + "': unknown trajectory format");
    }
    traj.config = config_from_json(header.at("config"));
    const auto status = header.at("status").get<std::string>();
    for (auto s : {SolveStatus::Completed, SolveStatus::Blowup, SolveStatus::ResolutionLoss,
                   SolveStatus::NotANumber}) {
      if (to_string(s) == status) traj.status = s;
    }
    traj.failure_time = header.at("failure_time");
    traj.failure_message = header.at("failure_message");
    traj.dt_used = header.at("dt_used");
    for (const auto& d : header.at("diagnostics")) {
      traj.diagnostics.push_back({d.at(0), d.at(1), d.at(2), d.at(3), d.at(4)});
    }
    const std::size_t count = header.at("snapshots");
    const Grid& g = traj.config.grid;
    for (std::size_t i = 0; i < count; ++i) {
      traj.times.push_back(get_f64(in));
      std::vector<double> v(g.n());
      for (auto& x : v) x = get_f64(in);
      if (!in) throw IoError("'" + path + "': truncated snapshot block");
      traj.snapshots.push_back(Field::from_values(g, std::move(v)));
    }
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': bad trajectory header: " + e.what());
  }
  return traj;
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "t,mass,hamiltonian,max_abs,tail\n";
  for (const auto& d : traj.diagnostics) {
    out << detail::format_double(d.time) << ',' << detail::format_double(d.mass) << ','
        << detail::format_double(d.hamiltonian) << ',' << detail::format_double(d.max_abs)
        << ',' << detail::format_double(d.tail_fraction) << '\n';
  }
}

}  // namespace dispersolve
