#include "expdiff/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expdiff {

double state_distance(const GeodesicState& a, const GeodesicState& b) {
    const bool a_coarse = a.v.size() <= b.v.size();
    const GeodesicState& coarse = a_coarse ? a : b;
    const GeodesicState& fine = a_coarse ? b : a;
    const std::size_t nc = coarse.v.size();
    const std::size_t nf = fine.v.size();
    if (nf % nc != 0) throw std::invalid_argument("state_distance: grid sizes are not nested");
    const std::size_t stride = nf / nc;

    const Field& fc = coarse.phi.displacement();
    const Field& ff = fine.phi.displacement();
    const double shift = std::round(ff[0] - fc[0]);
    double err = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        err = std::max(err, std::abs(ff[i * stride] - shift - fc[i]));
        err = std::max(err, std::abs(fine.v[i * stride] - coarse.v[i]));
    }
    return err;
}

std::vector<ConvergencePoint> temporal_convergence(const Field& v0, double T, const std::vector<double>& dts,
                                                   double ref_dt, const SolverConfig& cfg) {
    SolverConfig ref_cfg = cfg;
    ref_cfg.dt = ref_dt;
    const GeodesicState reference = flow(v0, T, ref_cfg);

    std::vector<ConvergencePoint> out;
    for (double dt : dts) {
        SolverConfig c = cfg;
        c.dt = dt;
        ConvergencePoint p{dt, state_distance(flow(v0, T, c), reference), 0.0};
        if (!out.empty() && p.error > 0.0) {
            p.rate = std::log(out.back().error / p.error) / std::log(out.back().parameter / dt);
        }
        out.push_back(p);
    }
    return out;
}

std::vector<ConvergencePoint> spatial_convergence(const Profile& initial, double T,
                                                  const std::vector<std::size_t>& grids, std::size_t ref_grid,
                                                  const SolverConfig& cfg, std::uint64_t seed) {
    SolverConfig ref_cfg = cfg;
    ref_cfg.grid_size = ref_grid;
    const GeodesicState reference = flow(initial.sample(ref_grid, seed), T, ref_cfg);

    std::vector<ConvergencePoint> out;
    for (std::size_t n : grids) {
        SolverConfig c = cfg;
        c.grid_size = n;
        ConvergencePoint p{static_cast<double>(n), state_distance(flow(initial.sample(n, seed), T, c), reference), 0.0};
        if (!out.empty() && p.error > 0.0) p.rate = out.back().error / p.error;
        out.push_back(p);
    }
    return out;
}

}  // namespace expdiff
