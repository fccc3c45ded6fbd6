#pragma once

#include <cstddef>
#include <vector>

#include "expdiff/geodesic.hpp"
#include "expdiff/profiles.hpp"

namespace expdiff {

struct ConvergencePoint {
    double parameter = 0.0;  ///< dt or N
    double error = 0.0;      ///< max of sup |phi - phi_ref| and sup |v - v_ref| at time T
    double rate = 0.0;       ///< observed order (time) or error ratio (space) vs the previous point; 0 for the first
};

/// Distance between two states on possibly different grids; the finer grid
/// must be an integer multiple of the coarser one and is sampled at the
/// coarse points.
double state_distance(const GeodesicState& a, const GeodesicState& b);

/// Errors at time T for each dt against a run with ref_dt, on cfg's grid.
/// rate is log(e_prev / e) / log(dt_prev / dt).
std::vector<ConvergencePoint> temporal_convergence(const Field& v0, double T, const std::vector<double>& dts,
                                                   double ref_dt, const SolverConfig& cfg);

/// Errors at time T for each grid size against a run on ref_grid, all with
/// cfg.dt. rate is e_prev / e.
std::vector<ConvergencePoint> spatial_convergence(const Profile& initial, double T,
                                                  const std::vector<std::size_t>& grids, std::size_t ref_grid,
                                                  const SolverConfig& cfg, std::uint64_t seed = 0);

}  // namespace expdiff
