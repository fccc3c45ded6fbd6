#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "expdiff/diffeo.hpp"
#include "expdiff/operators.hpp"
#include "expdiff/spectral.hpp"

namespace expdiff {

/// Geodesics from small data exist on (-2, 2); default bound on |T|.
inline constexpr double kDefaultTimeLimit = 2.0;

struct SolverConfig {
    std::size_t grid_size = 256;
    double dt = 1e-3;
    int k = 1;
    bool dealias = true;
    double slope_floor = kDefaultSlopeFloor;
    double inversion_tol = kDefaultInversionTol;
    int inversion_max_iter = kDefaultInversionMaxIter;
    double monitor_tol = 1e-6;
    double t_max = kDefaultTimeLimit;

    MetricOrder order() const { return MetricOrder(k); }
    InversionOptions inversion() const { return {inversion_tol, inversion_max_iter}; }

    /// Throws std::invalid_argument on inconsistent settings. A t_max beyond
    /// the default interval is allowed but reported on stderr.
    void validate() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// (phi, v) at time t, plus the running integral of D^1(phi, v) over [0, t].
struct GeodesicState {
    double t = 0.0;
    Diffeo phi;
    Field v;
    Field log_slope;

    static GeodesicState initial(const Field& v0);
};

using Trajectory = std::vector<GeodesicState>;

/// (v, F_k(phi, v)) with F_k = R_phi A_k^{-1} B_k R_{phi^{-1}}. Requires k >= 1.
std::pair<Field, Field> vector_field(const Diffeo& phi, const Field& v, const SolverConfig& cfg);

/// One classical RK4 step of size cfg.dt on (phi, v, log_slope). Negative dt
/// integrates backward. Throws BlowUp when a stage leaves the valid set.
GeodesicState step(const GeodesicState& s, const SolverConfig& cfg);

/// Called after every step; returning false stops the integration early.
using StepObserver = std::function<bool(const GeodesicState&)>;

/// Integrates from (id, v0) to t = T in ceil(|T|/dt) equal steps, handing
/// each state (including the initial one) to the observer.
GeodesicState integrate_with(const Field& v0, double T, const SolverConfig& cfg, const StepObserver& observer);

/// Full trajectory from (id, v0) to t = T.
Trajectory integrate(const Field& v0, double T, const SolverConfig& cfg);

/// Final state only.
GeodesicState flow(const Field& v0, double T, const SolverConfig& cfg);

/// Continues an arbitrary state for duration T (sign gives direction).
GeodesicState flow_from(const GeodesicState& s, double T, const SolverConfig& cfg);

/// Eulerian velocity u = v o phi^{-1}.
Field eulerian(const GeodesicState& s, const InversionOptions& opts = {});

// --- Invariant monitors -----------------------------------------------------

struct MonitorSample {
    double t = 0.0;
    double energy = 0.0;        ///< <u, u>_k
    double momentum_err = 0.0;  ///< sup |I_k(phi, v) - A_k v0| / sup |A_k v0|
    double slope_err = 0.0;     ///< sup |log phi' - int_0^t D^1|
    double mean_err = 0.0;      ///< |mean(u) - mean(v0)|
};

/// Monitors for state s of the geodesic issued from v0. When A_k v0 = 0 the
/// momentum error is absolute.
MonitorSample monitor(const GeodesicState& s, const Field& v0, const SolverConfig& cfg);

/// A_k u_t + u A_k u' + 2 u' A_k u, with u_t supplied by the caller.
Field euler_residual(const Field& u, const Field& u_t, MetricOrder k, bool dealias = true);

// --- k = 0: inviscid Burgers --------------------------------------------------

/// Lagrangian right-hand side for k = 0, (v, -2 v v'/phi').
std::pair<Field, Field> burgers_vector_field(const Diffeo& phi, const Field& v, bool dealias = true);

/// Integrates the k = 0 Lagrangian system to time t with cfg.dt and returns
/// the Eulerian velocity v o phi^{-1}.
Field burgers_lagrangian(const Field& v0, double t, const SolverConfig& cfg);

/// Solution of u_t + 3 u u' = 0 by characteristics: u(t, x + 3 t v0(x)) = v0(x).
/// Throws ShockFormed once the characteristic map stops being increasing.
Field burgers_oracle(const Field& v0, double t, const SolverConfig& cfg);

}  // namespace expdiff
