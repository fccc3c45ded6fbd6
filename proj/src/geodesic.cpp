#include "expdiff/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "expdiff/errors.hpp"

namespace expdiff {

void SolverConfig::validate() const {
    if (grid_size < kMinGridSize || grid_size % 2 != 0) {
        throw std::invalid_argument("grid size must be even and >= 16");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (k < 0 || k > kMaxMetricOrder) throw std::invalid_argument("k must lie in [0, 4]");
    if (!(slope_floor > 0.0)) throw std::invalid_argument("slope_floor must be positive");
    if (!(inversion_tol > 0.0)) throw std::invalid_argument("inversion_tol must be positive");
    if (inversion_max_iter < 1) throw std::invalid_argument("inversion_max_iter must be >= 1");
    if (!(monitor_tol > 0.0)) throw std::invalid_argument("monitor_tol must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (t_max > kDefaultTimeLimit) {
        std::cerr << "warning: t_max = " << t_max << " exceeds the existence interval (-2, 2)\n";
    }
}

GeodesicState GeodesicState::initial(const Field& v0) {
    return {0.0, Diffeo::identity(v0.size()), v0, Field::zero(v0.size())};
}

namespace {

// Time derivative of (f, v, log_slope).
struct Derivative {
    Field df;
    Field dv;
    Field dlog;
};

using RightHandSide = std::function<std::pair<Field, Field>(const Diffeo&, const Field&)>;

Derivative evaluate_stage(double t, const Field& f, const Field& v, double slope_floor, const RightHandSide& rhs) {
    try {
        const Diffeo phi(f, slope_floor);
        auto [df, dv] = rhs(phi, v);
        return {std::move(df), std::move(dv), d_n(phi, v, 1)};
    } catch (const InvalidDiffeo& e) {
        throw BlowUp(t, e.what());
    } catch (const NoConvergence& e) {
        throw BlowUp(t, e.what());
    }
}

GeodesicState rk4_step(const GeodesicState& s, double dt, double slope_floor, const RightHandSide& rhs) {
    const Field& f = s.phi.displacement();
    const double h2 = 0.5 * dt;

    const Derivative k1 = evaluate_stage(s.t, f, s.v, slope_floor, rhs);
    const Derivative k2 = evaluate_stage(s.t + h2, f + h2 * k1.df, s.v + h2 * k1.dv, slope_floor, rhs);
    const Derivative k3 = evaluate_stage(s.t + h2, f + h2 * k2.df, s.v + h2 * k2.dv, slope_floor, rhs);
    const Derivative k4 = evaluate_stage(s.t + dt, f + dt * k3.df, s.v + dt * k3.dv, slope_floor, rhs);

    const double w = dt / 6.0;
    auto combine = [w](const Field& base, const Field& a, const Field& b, const Field& c, const Field& d) {
        return base + w * (a + 2.0 * b + 2.0 * c + d);
    };
    Field f_next = combine(f, k1.df, k2.df, k3.df, k4.df);
    Field v_next = combine(s.v, k1.dv, k2.dv, k3.dv, k4.dv);
    Field log_next = combine(s.log_slope, k1.dlog, k2.dlog, k3.dlog, k4.dlog);

    const double t_next = s.t + dt;
    try {
        return {t_next, Diffeo(std::move(f_next), slope_floor), std::move(v_next), std::move(log_next)};
    } catch (const InvalidDiffeo& e) {
        throw BlowUp(t_next, e.what());
    }
}

RightHandSide geodesic_rhs(const SolverConfig& cfg) {
    return [&cfg](const Diffeo& phi, const Field& v) { return vector_field(phi, v, cfg); };
}

GeodesicState run(const GeodesicState& start, double T, double dt_nominal, double slope_floor, const RightHandSide& rhs,
                  const StepObserver& observer) {
    if (observer && !observer(start)) return start;
    if (T == 0.0) return start;
    const auto steps = static_cast<long>(std::ceil(std::abs(T) / dt_nominal - 1e-9));
    const double dt = T / static_cast<double>(std::max(steps, 1L));
    GeodesicState s = start;
    for (long i = 0; i < steps; ++i) {
        s = rk4_step(s, dt, slope_floor, rhs);
        if (i + 1 == steps) s.t = start.t + T;
        if (observer && !observer(s)) break;
    }
    return s;
}

void check_horizon(double T, const SolverConfig& cfg) {
    if (std::abs(T) > cfg.t_max) {
        throw std::invalid_argument("|T| = " + std::to_string(std::abs(T)) + " exceeds t_max = " +
                                    std::to_string(cfg.t_max));
    }
}

}  // namespace

std::pair<Field, Field> vector_field(const Diffeo& phi, const Field& v, const SolverConfig& cfg) {
    if (cfg.k < 1) throw std::invalid_argument("geodesic vector field requires k >= 1");
    const MetricOrder k = cfg.order();
    const Field u = compose(v, invert(phi, cfg.inversion()));
    const Field w = a_k_inverse(b_k_apply(u, k, cfg.dealias), k);
    return {v, compose(w, phi)};
}

GeodesicState step(const GeodesicState& s, const SolverConfig& cfg) {
    return rk4_step(s, cfg.dt, cfg.slope_floor, geodesic_rhs(cfg));
}

GeodesicState integrate_with(const Field& v0, double T, const SolverConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    if (v0.size() != cfg.grid_size) throw std::invalid_argument("initial velocity is not on the configured grid");
    check_horizon(T, cfg);
    return run(GeodesicState::initial(v0), T, cfg.dt, cfg.slope_floor, geodesic_rhs(cfg), observer);
}

Trajectory integrate(const Field& v0, double T, const SolverConfig& cfg) {
    Trajectory out;
    out.reserve(static_cast<std::size_t>(std::ceil(std::abs(T) / cfg.dt)) + 2);
    integrate_with(v0, T, cfg, [&out](const GeodesicState& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

GeodesicState flow(const Field& v0, double T, const SolverConfig& cfg) { return integrate_with(v0, T, cfg, {}); }

GeodesicState flow_from(const GeodesicState& s, double T, const SolverConfig& cfg) {
    cfg.validate();
    check_horizon(s.t + T, cfg);
    return run(s, T, cfg.dt, cfg.slope_floor, geodesic_rhs(cfg), {});
}

Field eulerian(const GeodesicState& s, const InversionOptions& opts) { return compose(s.v, invert(s.phi, opts)); }

MonitorSample monitor(const GeodesicState& s, const Field& v0, const SolverConfig& cfg) {
    const MetricOrder k = cfg.order();
    MonitorSample m;
    m.t = s.t;
    const Field u = eulerian(s, cfg.inversion());
    m.energy = energy(u, k);

    const Field a_v0 = a_k_apply(v0, k);
    const double scale = a_v0.max_abs();
    const double mom = (momentum_density(s.phi, s.v, k) - a_v0).max_abs();
    m.momentum_err = scale > 0.0 ? mom / scale : mom;

    const Field phi_x = slope(s.phi);
    double se = 0.0;
    for (std::size_t i = 0; i < phi_x.size(); ++i) {
        se = std::max(se, std::abs(std::log(phi_x[i]) - s.log_slope[i]));
    }
    m.slope_err = se;
    m.mean_err = std::abs(u.mean() - v0.mean());
    return m;
}

Field euler_residual(const Field& u, const Field& u_t, MetricOrder k, bool dealias) {
    const Field du = deriv(u, 1);
    Field r = a_k_apply(u_t, k);
    r += product(u, a_k_apply(du, k), dealias);
    r += product(du, a_k_apply(u, k), dealias) * 2.0;
    return r;
}

std::pair<Field, Field> burgers_vector_field(const Diffeo& phi, const Field& v, bool dealias) {
    return {v, product(v, d_n(phi, v, 1), dealias) * -2.0};
}

Field burgers_lagrangian(const Field& v0, double t, const SolverConfig& cfg) {
    cfg.validate();
    check_horizon(t, cfg);
    const bool dealias = cfg.dealias;
    const RightHandSide rhs = [dealias](const Diffeo& phi, const Field& v) {
        return burgers_vector_field(phi, v, dealias);
    };
    const GeodesicState end = run(GeodesicState::initial(v0), t, cfg.dt, cfg.slope_floor, rhs, {});
    return eulerian(end, cfg.inversion());
}

Field burgers_oracle(const Field& v0, double t, const SolverConfig& cfg) {
    if (t == 0.0) return v0;
    std::optional<Diffeo> characteristics;
    try {
        characteristics.emplace(v0 * (3.0 * t), cfg.slope_floor);
    } catch (const InvalidDiffeo& e) {
        throw ShockFormed(std::string("characteristics crossed before t = ") + std::to_string(t) + ": " + e.what());
    }
    return compose(v0, invert(*characteristics, cfg.inversion()));
}

}  // namespace expdiff
