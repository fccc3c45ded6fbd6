#pragma once

// Periodic grid functions on the unit circle and their Fourier calculus.
//
// The grid is x_i = i/N, i = 0..N-1, with N even. Coefficients use the
// normalization c_n = (1/N) sum_i f(x_i) exp(-2 pi i n x_i), so c_0 is the
// grid mean and d/dx corresponds to multiplication by 2 pi i n. Only the
// non-negative half n = 0..N/2 is stored; c_{-n} = conj(c_n).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace expdiff {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr std::size_t kMinGridSize = 16;

/// Grid point x_i = i/N.
inline double grid_point(std::size_t i, std::size_t n) {
    return static_cast<double>(i) / static_cast<double>(n);
}

/// A real 1-periodic grid function holding both its point values and its
/// half spectrum. Immutable once built; both views are kept consistent.
class Field {
public:
    Field() = default;

    /// From grid values; N = values.size() must be even and >= 16.
    explicit Field(std::vector<double> values);

    /// From the half spectrum c_0..c_{N/2}. Imaginary parts of c_0 and
    /// c_{N/2} are dropped so the synthesized field is exactly real.
    static Field from_coefficients(std::size_t n, std::vector<Complex> coeffs);

    static Field constant(std::size_t n, double value);
    static Field zero(std::size_t n) { return constant(n, 0.0); }

    /// Samples fn at the grid points.
    static Field sample(std::size_t n, const std::function<double(double)>& fn);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// c_0..c_{N/2}.
    std::span<const Complex> coefficients() const noexcept { return coeffs_; }

    /// Coefficient for any integer wavenumber; zero outside |n| <= N/2.
    Complex coefficient(long n) const;

    double max_abs() const;
    double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator-(Field a) { return a *= -1.0; }

private:
    Field(std::vector<double> values, std::vector<Complex> coeffs)
        : values_(std::move(values)), coeffs_(std::move(coeffs)) {}

    std::vector<double> values_;
    std::vector<Complex> coeffs_;
};

/// A real, even Fourier multiplier: symbol sigma(|n|) for n = 0..N/2.
class Multiplier {
public:
    explicit Multiplier(std::vector<double> symbol);

    static Multiplier from_symbol(std::size_t n, const std::function<double(long)>& sigma);

    std::size_t grid_size() const noexcept { return 2 * (symbol_.size() - 1); }
    std::span<const double> symbol() const noexcept { return symbol_; }
    double operator()(long n) const { return symbol_[static_cast<std::size_t>(n < 0 ? -n : n)]; }

    /// Pointwise symbol product, i.e. composition of the two operators.
    friend Multiplier operator*(const Multiplier& a, const Multiplier& b);

private:
    std::vector<double> symbol_;
};

/// Forward transform with the 1/N normalization; returns c_0..c_{N/2}.
std::vector<Complex> analyze(std::span<const double> values);

/// Inverse of analyze().
std::vector<double> synthesize(std::span<const Complex> coeffs, std::size_t n);

/// j-th spectral derivative; the Nyquist mode is dropped for odd j.
Field deriv(const Field& f, int j);

Field apply_multiplier(const Field& f, const Multiplier& m);

/// Zeroes every mode with |n| > cutoff.
Field truncate(const Field& f, std::size_t cutoff);

/// Largest wavenumber kept by the 2/3 rule, floor(N/3).
inline std::size_t dealias_cutoff(std::size_t n) { return n / 3; }

/// Pointwise product. With dealias set, both factors and the result are
/// truncated to |n| <= N/3.
Field product(const Field& f, const Field& g, bool dealias = true);

/// Raw pointwise product and quotient on the grid, no truncation.
Field pointwise_product(const Field& f, const Field& g);
Field pointwise_quotient(const Field& f, const Field& g);

/// Evaluates the trigonometric interpolant of f at arbitrary points.
std::vector<double> interpolate(const Field& f, std::span<const double> points);

/// Interpolant and its x-derivative at arbitrary points.
void interpolate_with_derivative(const Field& f, std::span<const double> points,
                                 std::span<double> values, std::span<double> derivatives);

/// Sum over all wavenumbers of |c_n|^2; equals the grid mean of f^2.
double parseval_sum(const Field& f);

/// H^s norm, sqrt(sum (1 + (2 pi n)^2)^s |c_n|^2).
double sobolev_norm(const Field& f, int s);

/// Trapezoid mean of f on the grid (equals c_0).
double grid_mean(std::span<const double> values);

/// sup_i |a_i - b_i|.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace expdiff
