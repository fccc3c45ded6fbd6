#include "expdiff/diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "expdiff/errors.hpp"

namespace expdiff {
namespace {

// Shift f by an integer so that f(0) lands in [-1/2, 1/2).
Field normalize_chart(Field f) {
    const double shift = std::floor(f[0] + 0.5);
    if (shift != 0.0) f -= Field::constant(f.size(), shift);
    return f;
}

}  // namespace

Diffeo::Diffeo(Field displacement, double slope_floor)
    : displacement_(normalize_chart(std::move(displacement))), slope_floor_(slope_floor) {
    const Field s = deriv(displacement_, 1);
    double m = std::numeric_limits<double>::infinity();
    for (double v : s.values()) m = std::min(m, 1.0 + v);
    min_slope_ = m;
    if (!(min_slope_ > slope_floor_)) {
        std::ostringstream os;
        os << "min slope " << min_slope_ << " is not above the floor " << slope_floor_;
        throw InvalidDiffeo(os.str());
    }
}

Diffeo Diffeo::identity(std::size_t n) { return Diffeo(Field::zero(n)); }

Diffeo Diffeo::from_lift(std::span<const double> lift, double slope_floor) {
    const std::size_t n = lift.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = lift[i] - grid_point(i, n);
    return Diffeo(Field(std::move(f)), slope_floor);
}

std::vector<double> Diffeo::lift_values() const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = grid_point(i, n) + displacement_[i];
    return out;
}

std::vector<double> Diffeo::evaluate(std::span<const double> points) const {
    auto out = interpolate(displacement_, points);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += points[i];
    return out;
}

Field compose(const Field& u, const Diffeo& phi) {
    if (u.size() != phi.size()) throw std::invalid_argument("compose: field and diffeo on different grids");
    return Field(interpolate(u, phi.lift_values()));
}

Diffeo invert(const Diffeo& phi, const InversionOptions& opts) {
    const std::size_t n = phi.size();
    const Field& f = phi.displacement();

    // Solve y + f(y) = x_i. g(y) = y + f(y) - x_i is strictly increasing, so
    // every evaluation tightens a bracket [lo, hi] around the root.
    // Start from the second-order expansion phi^{-1}(x) ~ x - f + f f'.
    const Field df = deriv(f, 1);
    std::vector<double> target(n), y(n), lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = grid_point(i, n);
        y[i] = target[i] - f[i] + f[i] * df[i];
        lo[i] = -std::numeric_limits<double>::infinity();
        hi[i] = std::numeric_limits<double>::infinity();
    }

    // |g''| = |f''| <= 2 sum_n (2 pi n)^2 |c_n| bounds the Newton remainder:
    // after a step from residual g the new residual is at most
    // (curvature / 2) (g / g')^2.
    double curvature = 0.0;
    const auto c = f.coefficients();
    for (std::size_t m = 1; m < c.size(); ++m) {
        const double w = kTwoPi * static_cast<double>(m);
        curvature += (m + 1 == c.size() ? 1.0 : 2.0) * w * w * std::abs(c[m]);
    }

    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<double> pts, val, der;

    for (int iter = 0; iter < opts.max_iter && !active.empty(); ++iter) {
        pts.resize(active.size());
        val.resize(active.size());
        der.resize(active.size());
        for (std::size_t a = 0; a < active.size(); ++a) pts[a] = y[active[a]];
        interpolate_with_derivative(f, pts, val, der);

        std::vector<std::size_t> still;
        still.reserve(active.size());
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t i = active[a];
            const double g = y[i] + val[a] - target[i];
            const double dg = 1.0 + der[a];
            if (dg > 0.0) {
                const double newton = g / dg;
                if (std::abs(g) <= opts.tol || 0.5 * curvature * newton * newton <= 1e-2 * opts.tol) {
                    // The final correction needs no further evaluation to certify it.
                    y[i] -= newton;
                    continue;
                }
            } else if (std::abs(g) <= opts.tol) {
                continue;
            }
            if (g < 0.0) lo[i] = std::max(lo[i], y[i]);
            else hi[i] = std::min(hi[i], y[i]);

            double next = dg > 0.0 ? y[i] - g / dg : std::numeric_limits<double>::quiet_NaN();
            // Newton steps are limited to half a period; outside the bracket we bisect.
            if (std::isfinite(next)) next = std::clamp(next, y[i] - 0.5, y[i] + 0.5);
            const bool bracketed = std::isfinite(lo[i]) && std::isfinite(hi[i]);
            if (!std::isfinite(next) || (bracketed && !(next > lo[i] && next < hi[i]))) {
                if (bracketed) next = 0.5 * (lo[i] + hi[i]);
                else next = g < 0.0 ? y[i] + 0.5 : y[i] - 0.5;
            }
            if (bracketed && hi[i] - lo[i] <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(y[i]))) {
                // Bracket collapsed to round-off; y is as good as it gets.
                continue;
            }
            y[i] = next;
            still.push_back(i);
        }
        active.swap(still);
    }

    if (!active.empty()) {
        std::ostringstream os;
        os << "inversion failed at " << active.size() << " grid point(s) after " << opts.max_iter
           << " iterations (min slope " << phi.min_slope() << ")";
        throw NoConvergence(os.str());
    }

    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = y[i] - target[i];
    return Diffeo(Field(std::move(g)), phi.slope_floor());
}

Field slope(const Diffeo& phi) {
    return deriv(phi.displacement(), 1) + Field::constant(phi.size(), 1.0);
}

Field lift_difference(const Diffeo& phi, const Diffeo& psi) {
    Field d = phi.displacement() - psi.displacement();
    const double shift = std::round(d.mean());
    if (shift != 0.0) d -= Field::constant(d.size(), shift);
    return d;
}

double lift_distance(const Diffeo& phi, const Diffeo& psi) { return lift_difference(phi, psi).max_abs(); }

}  // namespace expdiff
