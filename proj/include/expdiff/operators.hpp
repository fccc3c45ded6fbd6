#pragma once

#include <stdexcept>

#include "expdiff/diffeo.hpp"
#include "expdiff/spectral.hpp"

namespace expdiff {

inline constexpr int kMaxMetricOrder = 4;

/// Order k of the H^k metric. k = 0 is only meaningful for the Burgers path.
class MetricOrder {
public:
    explicit MetricOrder(int k) : k_(k) {
        if (k < 0 || k > kMaxMetricOrder) throw std::invalid_argument("metric order must lie in [0, 4]");
    }
    int value() const noexcept { return k_; }
    friend bool operator==(MetricOrder, MetricOrder) = default;

private:
    int k_;
};

/// sigma_k(n) = sum_{j=0}^k (2 pi n)^{2j}.
double metric_symbol(MetricOrder k, long n);

Multiplier metric_multiplier(std::size_t n, MetricOrder k);

/// A_k u = sum_j (-1)^j d^{2j} u.
Field a_k_apply(const Field& u, MetricOrder k);
Field a_k_inverse(const Field& u, MetricOrder k);

/// B_k(u) = -2 u' A_k u + A_k(u u') - u A_k u', products dealiased when asked.
Field b_k_apply(const Field& u, MetricOrder k, bool dealias = true);

/// Conjugated derivative D^n(phi, v) = (d^n (v o phi^{-1})) o phi, through
/// D^1 = v'/phi', D^{m+1} = (D^m)'/phi'. No inversion is performed.
Field d_n(const Diffeo& phi, const Field& v, int n);

/// (A_k (v o phi^{-1})) o phi = v + sum_{j=1}^k (-1)^j D^{2j}(phi, v).
Field conj_a_k(const Diffeo& phi, const Field& v, MetricOrder k);

/// I_k(phi, v) = conj_a_k(phi, v) (phi')^2. Constant in time along geodesics.
Field momentum_density(const Diffeo& phi, const Field& v, MetricOrder k);

/// <u, u>_k = sum_n sigma_k(n) |c_n|^2.
double energy(const Field& u, MetricOrder k);

}  // namespace expdiff
