#pragma once

#include <cstddef>
#include <vector>

#include "expdiff/diffeo.hpp"
#include "expdiff/geodesic.hpp"
#include "expdiff/spectral.hpp"

namespace expdiff {

/// Exp_k(v0) = phi(1; v0), the time-one Lagrangian flow from the identity.
Diffeo exp_map(const Field& v0, const SolverConfig& cfg);

/// Directional derivative of exp_map at v0 along dv, by a central difference
/// of lifts with step h = fd_step / sup|dv|.
Field d_exp(const Field& v0, const Field& dv, const SolverConfig& cfg, double fd_step = 1e-5);

/// One-sided variant (exp_map(v0 + h dv) - exp_map(v0)) / h.
Field d_exp_forward(const Field& v0, const Field& dv, const SolverConfig& cfg, double fd_step = 1e-5);

struct ShootingConfig {
    SolverConfig solver;
    /// Real unknowns: the mean plus cos/sin pairs for 1 <= n <= (modes - 1)/2.
    int modes = 33;
    double newton_tol = 1e-12;
    int max_newton = 20;
    double fd_step = 1e-5;
    /// Halvings of the Gauss-Newton step before giving up.
    int max_halvings = 10;
    /// Worker threads for Jacobian columns; 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;

    friend bool operator==(const ShootingConfig&, const ShootingConfig&) = default;
};

/// Orthonormal (unit RMS) shooting basis: 1, sqrt2 cos(2 pi n x), sqrt2 sin(2 pi n x).
std::vector<Field> shooting_basis(std::size_t grid_size, int modes);

/// Coordinates of f in the shooting basis (discrete L2 projection).
std::vector<double> project_onto_basis(const Field& f, int modes);

/// Field with the given shooting-basis coordinates.
Field from_basis(std::size_t grid_size, const std::vector<double>& coords);

struct NewtonRecord {
    int iter = 0;
    double residual = 0.0;
    double step_factor = 0.0;
};

struct LogResult {
    Field v;
    std::vector<NewtonRecord> trace;
    /// Singular values of the last Jacobian in the orthonormal basis, scaled
    /// so that the identity map has all singular values equal to one.
    std::vector<double> singular_values;
    double residual = 0.0;

    /// NaN when the initial guess already met the tolerance (no Jacobian).
    double condition_number() const;
};

/// Local inverse of exp_map by damped Gauss-Newton shooting on the band of
/// `modes` real Fourier coordinates, starting from the displacement of psi.
/// Throws NoConvergence when the residual does not reach newton_tol.
LogResult log_map(const Diffeo& psi, const ShootingConfig& cfg);

/// Jacobian of exp_map at v in the shooting basis, as column fields.
std::vector<Field> shooting_jacobian(const Field& v, const ShootingConfig& cfg);

}  // namespace expdiff
