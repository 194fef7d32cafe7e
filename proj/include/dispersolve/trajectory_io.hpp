#pragma once

#include <string>

#include "dispersolve/solver.hpp"

namespace dispersolve {

/// One JSON header line (config echo, diagnostics, snapshot count), then for
/// every snapshot the time and n samples as little-endian float64.
void write_trajectory(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(const std::string& path);

/// "t,mass,hamiltonian,max_abs,tail" rows.
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);

}  // namespace dispersolve
