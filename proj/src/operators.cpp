#include "expdiff/operators.hpp"

#include <vector>

namespace expdiff {

double metric_symbol(MetricOrder k, long n) {
    const double w = kTwoPi * static_cast<double>(n);
    const double w2 = w * w;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= k.value(); ++j) {
        term *= w2;
        sum += term;
    }
    return sum;
}

Multiplier metric_multiplier(std::size_t n, MetricOrder k) {
    return Multiplier::from_symbol(n, [k](long m) { return metric_symbol(k, m); });
}

Field a_k_apply(const Field& u, MetricOrder k) { return apply_multiplier(u, metric_multiplier(u.size(), k)); }

Field a_k_inverse(const Field& u, MetricOrder k) {
    return apply_multiplier(u, Multiplier::from_symbol(u.size(), [k](long m) { return 1.0 / metric_symbol(k, m); }));
}

Field b_k_apply(const Field& u, MetricOrder k, bool dealias) {
    const Field du = deriv(u, 1);
    Field out = product(du, a_k_apply(u, k), dealias) * -2.0;
    out += a_k_apply(product(u, du, dealias), k);
    out -= product(u, a_k_apply(du, k), dealias);
    return out;
}

Field d_n(const Diffeo& phi, const Field& v, int n) {
    if (n < 1) throw std::invalid_argument("d_n: order must be positive");
    if (v.size() != phi.size()) throw std::invalid_argument("d_n: field and diffeo on different grids");
    const Field s = slope(phi);
    Field d = v;
    for (int m = 0; m < n; ++m) d = pointwise_quotient(deriv(d, 1), s);
    return d;
}

Field conj_a_k(const Diffeo& phi, const Field& v, MetricOrder k) {
    if (v.size() != phi.size()) throw std::invalid_argument("conj_a_k: field and diffeo on different grids");
    const Field s = slope(phi);
    Field out = v;
    Field d = v;
    for (int j = 1; j <= k.value(); ++j) {
        d = pointwise_quotient(deriv(d, 1), s);
        d = pointwise_quotient(deriv(d, 1), s);
        if (j % 2 == 1) out -= d;
        else out += d;
    }
    return out;
}

Field momentum_density(const Diffeo& phi, const Field& v, MetricOrder k) {
    const Field s = slope(phi);
    return pointwise_product(conj_a_k(phi, v, k), pointwise_product(s, s));
}

double energy(const Field& u, MetricOrder k) {
    const auto c = u.coefficients();
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double mult = (i == 0 || i + 1 == c.size()) ? 1.0 : 2.0;
        total += mult * metric_symbol(k, static_cast<long>(i)) * std::norm(c[i]);
    }
    return total;
}

}  // namespace expdiff
