#pragma once

#include <string>

#include "dispersolve/config.hpp"
#include "dispersolve/experiments.hpp"
#include "dispersolve/lp_toolkit.hpp"
#include "dispersolve/norms.hpp"
#include "dispersolve/solver.hpp"

namespace dispersolve {

/// Runs the experiment named by `config.experiment` (anything but "solve").
/// Option errors surface as ArgumentError or ConfigError.
ExperimentResult run_experiment(const RunConfig& config);

/// The uniformly spaced part of a trajectory as a space-time field (a final
/// snapshot at a shorter interval is dropped).
SpaceTimeField trajectory_field(const Trajectory& traj);

/// Evaluates each norm on the trajectory; one row per norm, in order.
ExperimentResult norm_report(const Trajectory& traj, const std::vector<std::string>& norms);

/// 0 pass, 1 fail or inconclusive, 3 solver abort.
int exit_code(const std::string& verdict);

}  // namespace dispersolve
