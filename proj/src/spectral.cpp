#include "expdiff/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace expdiff {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
    struct Plans {
        fftw_plan forward;
        fftw_plan backward;
    };

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    Plans get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;

        const int ni = static_cast<int>(n);
        double* real = fftw_alloc_real(n);
        fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        Plans p{fftw_plan_dft_r2c_1d(ni, real, spec, flags),
                fftw_plan_dft_c2r_1d(ni, spec, real, flags | FFTW_DESTROY_INPUT)};
        fftw_free(real);
        fftw_free(spec);
        plans_.emplace(n, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, Plans> plans_;
};

void check_grid_size(std::size_t n) {
    if (n < kMinGridSize || n % 2 != 0) {
        throw std::invalid_argument("grid size must be even and >= 16, got " + std::to_string(n));
    }
}

void check_same_grid(const Field& a, const Field& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("fields live on different grids (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
}

}  // namespace

std::vector<Complex> analyze(std::span<const double> values) {
    const std::size_t n = values.size();
    check_grid_size(n);
    auto plans = PlanCache::instance().get(n);
    std::vector<double> in(values.begin(), values.end());
    std::vector<Complex> out(n / 2 + 1);
    fftw_execute_dft_r2c(plans.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<double> synthesize(std::span<const Complex> coeffs, std::size_t n) {
    check_grid_size(n);
    if (coeffs.size() != n / 2 + 1) throw std::invalid_argument("spectrum length does not match grid");
    auto plans = PlanCache::instance().get(n);
    std::vector<Complex> in(coeffs.begin(), coeffs.end());
    std::vector<double> out(n);
    fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(std::vector<double> values) : values_(std::move(values)) {
    check_grid_size(values_.size());
    coeffs_ = analyze(values_);
}

Field Field::from_coefficients(std::size_t n, std::vector<Complex> coeffs) {
    check_grid_size(n);
    if (coeffs.size() != n / 2 + 1) throw std::invalid_argument("spectrum length does not match grid");
    coeffs.front() = {coeffs.front().real(), 0.0};
    coeffs.back() = {coeffs.back().real(), 0.0};
    auto values = synthesize(coeffs, n);
    return Field(std::move(values), std::move(coeffs));
}

Field Field::constant(std::size_t n, double value) {
    check_grid_size(n);
    std::vector<Complex> c(n / 2 + 1, Complex{});
    c[0] = value;
    return Field(std::vector<double>(n, value), std::move(c));
}

Field Field::sample(std::size_t n, const std::function<double(double)>& fn) {
    check_grid_size(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(grid_point(i, n));
    return Field(std::move(v));
}

Complex Field::coefficient(long n) const {
    const long half = static_cast<long>(size() / 2);
    if (n > half || n < -half) return {};
    return n >= 0 ? coeffs_[static_cast<std::size_t>(n)] : std::conj(coeffs_[static_cast<std::size_t>(-n)]);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Field& Field::operator+=(const Field& other) {
    check_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& v : values_) v *= s;
    for (auto& c : coeffs_) c *= s;
    return *this;
}

// ---------------------------------------------------------------------------
// Multiplier

Multiplier::Multiplier(std::vector<double> symbol) : symbol_(std::move(symbol)) {
    if (symbol_.size() < 2) throw std::invalid_argument("multiplier symbol too short");
    check_grid_size(2 * (symbol_.size() - 1));
}

Multiplier Multiplier::from_symbol(std::size_t n, const std::function<double(long)>& sigma) {
    check_grid_size(n);
    std::vector<double> s(n / 2 + 1);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = sigma(static_cast<long>(i));
    return Multiplier(std::move(s));
}

Multiplier operator*(const Multiplier& a, const Multiplier& b) {
    if (a.symbol_.size() != b.symbol_.size()) throw std::invalid_argument("multipliers on different grids");
    std::vector<double> s(a.symbol_.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.symbol_[i] * b.symbol_[i];
    return Multiplier(std::move(s));
}

// ---------------------------------------------------------------------------
// Operations

Field deriv(const Field& f, int j) {
    if (j < 0) throw std::invalid_argument("derivative order must be non-negative");
    if (j == 0) return f;
    const std::size_t n = f.size();
    std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
    for (std::size_t m = 0; m < c.size(); ++m) {
        const Complex ik{0.0, kTwoPi * static_cast<double>(m)};
        Complex factor{1.0, 0.0};
        for (int p = 0; p < j; ++p) factor *= ik;
        c[m] *= factor;
    }
    if (j % 2 == 1) c.back() = 0.0;
    return Field::from_coefficients(n, std::move(c));
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
    if (m.grid_size() != f.size()) throw std::invalid_argument("multiplier and field on different grids");
    std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
    const auto s = m.symbol();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= s[i];
    return Field::from_coefficients(f.size(), std::move(c));
}

Field truncate(const Field& f, std::size_t cutoff) {
    std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
    for (std::size_t i = cutoff + 1; i < c.size(); ++i) c[i] = 0.0;
    return Field::from_coefficients(f.size(), std::move(c));
}

Field pointwise_product(const Field& f, const Field& g) {
    check_same_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * g[i];
    return Field(std::move(v));
}

Field pointwise_quotient(const Field& f, const Field& g) {
    check_same_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] / g[i];
    return Field(std::move(v));
}

Field product(const Field& f, const Field& g, bool dealias) {
    check_same_grid(f, g);
    if (!dealias) return pointwise_product(f, g);
    const std::size_t cut = dealias_cutoff(f.size());
    return truncate(pointwise_product(truncate(f, cut), truncate(g, cut)), cut);
}

namespace {

// Direct summation of Re[c_0 + 2 sum_{n=1}^{N/2-1} c_n z^n + c_{N/2} z^{N/2}],
// z = exp(2 pi i x). Points are processed in blocks so the inner loop runs
// across independent points and vectorizes.
template <bool WithDerivative>
void evaluate_series(std::span<const Complex> c, std::size_t n, std::span<const double> x,
                     std::span<double> out, std::span<double> dout) {
    constexpr std::size_t kBlock = 64;
    const std::size_t half = n / 2;
    const double c0 = c[0].real();
    const double cny = c[half].real();
    // Trailing zero modes (e.g. after dealiasing) are skipped. With a
    // nonzero Nyquist mode the recurrence must run up to z^{N/2}.
    const bool nyquist = cny != 0.0;
    std::size_t top = half;
    if (!nyquist) {
        while (top > 1 && c[top - 1] == Complex{}) --top;
    }

    alignas(64) double zr[kBlock], zi[kBlock], pr[kBlock], pim[kBlock], acc[kBlock], dacc[kBlock];

    for (std::size_t start = 0; start < x.size(); start += kBlock) {
        const std::size_t len = std::min(kBlock, x.size() - start);
        for (std::size_t b = 0; b < len; ++b) {
            const double xr = x[start + b] - std::floor(x[start + b]);
            zr[b] = std::cos(kTwoPi * xr);
            zi[b] = std::sin(kTwoPi * xr);
            pr[b] = zr[b];
            pim[b] = zi[b];
            acc[b] = 0.0;
            dacc[b] = 0.0;
        }
        for (std::size_t m = 1; m < top; ++m) {
            const double cr = c[m].real();
            const double ci = c[m].imag();
            const double dm = static_cast<double>(m);
            for (std::size_t b = 0; b < len; ++b) {
                acc[b] += cr * pr[b] - ci * pim[b];
                if constexpr (WithDerivative) dacc[b] += dm * (cr * pim[b] + ci * pr[b]);
                const double npr = pr[b] * zr[b] - pim[b] * zi[b];
                const double npi = pr[b] * zi[b] + pim[b] * zr[b];
                pr[b] = npr;
                pim[b] = npi;
            }
        }
        for (std::size_t b = 0; b < len; ++b) {
            // with the Nyquist mode present, pr + i pim = z^{N/2} = exp(i pi N x)
            out[start + b] = c0 + 2.0 * acc[b] + (nyquist ? cny * pr[b] : 0.0);
            if constexpr (WithDerivative) {
                const double ny = nyquist ? static_cast<double>(half) * cny * pim[b] : 0.0;
                dout[start + b] = -kTwoPi * (2.0 * dacc[b] + ny);
            }
        }
    }
}

}  // namespace

std::vector<double> interpolate(const Field& f, std::span<const double> points) {
    std::vector<double> out(points.size());
    evaluate_series<false>(f.coefficients(), f.size(), points, out, {});
    return out;
}

void interpolate_with_derivative(const Field& f, std::span<const double> points, std::span<double> values,
                                 std::span<double> derivatives) {
    if (values.size() != points.size() || derivatives.size() != points.size()) {
        throw std::invalid_argument("output spans must match the number of points");
    }
    evaluate_series<true>(f.coefficients(), f.size(), points, values, derivatives);
}

double parseval_sum(const Field& f) {
    const auto c = f.coefficients();
    double s = std::norm(c.front()) + std::norm(c.back());
    for (std::size_t i = 1; i + 1 < c.size(); ++i) s += 2.0 * std::norm(c[i]);
    return s;
}

double sobolev_norm(const Field& f, int s) {
    const auto c = f.coefficients();
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double k = kTwoPi * static_cast<double>(i);
        const double w = std::pow(1.0 + k * k, s);
        const double mult = (i == 0 || i + 1 == c.size()) ? 1.0 : 2.0;
        total += mult * w * std::norm(c[i]);
    }
    return std::sqrt(total);
}

double grid_mean(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace expdiff
