#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "expdiff/spectral.hpp"

namespace expdiff {

inline constexpr double kDefaultSlopeFloor = 1e-6;
inline constexpr double kDefaultInversionTol = 1e-12;
inline constexpr int kDefaultInversionMaxIter = 100;

/// Orientation-preserving circle diffeomorphism phi = id + f, stored by its
/// periodic displacement f.
///
/// Construction enforces 1 + f' > slope_floor at every grid point and
/// normalizes the lift so that f(0) lies in [-1/2, 1/2). A lift given with
/// 0 <= f(0) < 1 (or any other integer offset) is shifted accordingly.
class Diffeo {
public:
    /// Throws InvalidDiffeo when the slope check fails.
    explicit Diffeo(Field displacement, double slope_floor = kDefaultSlopeFloor);

    static Diffeo identity(std::size_t n);

    /// From lift values phi(x_i); f is re-derived as phi(x_i) - x_i.
    static Diffeo from_lift(std::span<const double> lift, double slope_floor = kDefaultSlopeFloor);

    std::size_t size() const noexcept { return displacement_.size(); }
    const Field& displacement() const noexcept { return displacement_; }
    double min_slope() const noexcept { return min_slope_; }
    double slope_floor() const noexcept { return slope_floor_; }

    /// phi(x_i) = x_i + f(x_i).
    std::vector<double> lift_values() const;

    /// phi(x) for arbitrary x, through the interpolant of f.
    std::vector<double> evaluate(std::span<const double> points) const;

private:
    Field displacement_;
    double min_slope_ = 1.0;
    double slope_floor_ = kDefaultSlopeFloor;
};

/// Grid sampling of u o phi (right translation by phi).
Field compose(const Field& u, const Diffeo& phi);

struct InversionOptions {
    double tol = kDefaultInversionTol;
    int max_iter = kDefaultInversionMaxIter;
};

/// phi^{-1}, by safeguarded Newton iteration on the lift at each grid point.
/// Throws NoConvergence when a point fails to converge within max_iter.
Diffeo invert(const Diffeo& phi, const InversionOptions& opts = {});

/// phi' = 1 + f'.
Field slope(const Diffeo& phi);

/// sup_i |phi(x_i) - psi(x_i) - m| with the integer m that best aligns the
/// two lifts.
double lift_distance(const Diffeo& phi, const Diffeo& psi);

/// Displacement difference f_phi - f_psi after integer alignment of the lifts.
Field lift_difference(const Diffeo& phi, const Diffeo& psi);

}  // namespace expdiff
