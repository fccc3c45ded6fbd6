#include "expdiff/expmap.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "expdiff/errors.hpp"

namespace expdiff {

Diffeo exp_map(const Field& v0, const SolverConfig& cfg) { return flow(v0, 1.0, cfg).phi; }

Field d_exp(const Field& v0, const Field& dv, const SolverConfig& cfg, double fd_step) {
    const double scale = dv.max_abs();
    if (scale == 0.0) return Field::zero(v0.size());
    const double h = fd_step / scale;
    const Diffeo plus = exp_map(v0 + h * dv, cfg);
    const Diffeo minus = exp_map(v0 - h * dv, cfg);
    return lift_difference(plus, minus) * (0.5 / h);
}

Field d_exp_forward(const Field& v0, const Field& dv, const SolverConfig& cfg, double fd_step) {
    const double scale = dv.max_abs();
    if (scale == 0.0) return Field::zero(v0.size());
    const double h = fd_step / scale;
    return lift_difference(exp_map(v0 + h * dv, cfg), exp_map(v0, cfg)) * (1.0 / h);
}

void ShootingConfig::validate() const {
    solver.validate();
    if (modes < 1 || modes % 2 == 0) throw std::invalid_argument("shooting modes must be odd and positive");
    if (static_cast<std::size_t>(modes) > solver.grid_size / 3) {
        throw std::invalid_argument("shooting modes must not exceed N/3");
    }
    if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
    if (max_newton < 1) throw std::invalid_argument("max_newton must be >= 1");
    if (fd_step < 1e-7 || fd_step > 1e-4) throw std::invalid_argument("fd_step must lie in [1e-7, 1e-4]");
    if (max_halvings < 0) throw std::invalid_argument("max_halvings must be non-negative");
}

// ---------------------------------------------------------------------------
// Shooting basis

namespace {

const double kSqrt2 = std::sqrt(2.0);

int band_of(int modes) { return (modes - 1) / 2; }

}  // namespace

std::vector<double> project_onto_basis(const Field& f, int modes) {
    const auto c = f.coefficients();
    std::vector<double> out(static_cast<std::size_t>(modes));
    out[0] = c[0].real();
    for (int n = 1; n <= band_of(modes); ++n) {
        out[static_cast<std::size_t>(2 * n - 1)] = kSqrt2 * c[static_cast<std::size_t>(n)].real();
        out[static_cast<std::size_t>(2 * n)] = -kSqrt2 * c[static_cast<std::size_t>(n)].imag();
    }
    return out;
}

Field from_basis(std::size_t grid_size, const std::vector<double>& coords) {
    if (coords.empty() || coords.size() % 2 == 0) throw std::invalid_argument("basis coordinates must have odd length");
    std::vector<Complex> c(grid_size / 2 + 1, Complex{});
    const int band = band_of(static_cast<int>(coords.size()));
    if (static_cast<std::size_t>(band) >= grid_size / 2) throw std::invalid_argument("basis band exceeds the grid");
    c[0] = coords[0];
    for (int n = 1; n <= band; ++n) {
        const double a = coords[static_cast<std::size_t>(2 * n - 1)];
        const double b = coords[static_cast<std::size_t>(2 * n)];
        c[static_cast<std::size_t>(n)] = Complex{a, -b} / kSqrt2;
    }
    return Field::from_coefficients(grid_size, std::move(c));
}

std::vector<Field> shooting_basis(std::size_t grid_size, int modes) {
    std::vector<Field> basis;
    basis.reserve(static_cast<std::size_t>(modes));
    for (int j = 0; j < modes; ++j) {
        std::vector<double> e(static_cast<std::size_t>(modes), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        basis.push_back(from_basis(grid_size, e));
    }
    return basis;
}

std::vector<Field> shooting_jacobian(const Field& v, const ShootingConfig& cfg) {
    const auto basis = shooting_basis(v.size(), cfg.modes);
    std::vector<Field> columns(basis.size());
    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(basis.size()));

    if (threads <= 1) {
        for (std::size_t j = 0; j < basis.size(); ++j) columns[j] = d_exp(v, basis[j], cfg.solver, cfg.fd_step);
        return columns;
    }
    // Columns are independent flows; each worker takes every threads-th one.
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t j = w; j < basis.size(); j += threads) {
                columns[j] = d_exp(v, basis[j], cfg.solver, cfg.fd_step);
            }
        }));
    }
    for (auto& f : workers) f.get();
    return columns;
}

double LogResult::condition_number() const {
    if (singular_values.empty() || singular_values.back() <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return singular_values.front() / singular_values.back();
}

LogResult log_map(const Diffeo& psi, const ShootingConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.solver.grid_size;
    if (psi.size() != n) throw std::invalid_argument("log_map: target is not on the configured grid");

    // d_0 Exp = Id, so the displacement itself is the natural first guess.
    std::vector<double> coords = project_onto_basis(psi.displacement(), cfg.modes);
    Field v = from_basis(n, coords);

    auto residual_of = [&](const Field& trial) { return lift_difference(exp_map(trial, cfg.solver), psi); };

    LogResult out;
    Field r = residual_of(v);
    double res = r.max_abs();
    out.trace.push_back({0, res, 0.0});

    const double rms = std::sqrt(static_cast<double>(n));
    const auto m = static_cast<Eigen::Index>(cfg.modes);
    for (int iter = 1; res >= cfg.newton_tol; ++iter) {
        if (iter > cfg.max_newton) {
            std::ostringstream os;
            os << "Gauss-Newton shooting stalled at residual " << res << " after " << cfg.max_newton
               << " iterations";
            throw NoConvergence(os.str());
        }
        const auto columns = shooting_jacobian(v, cfg);
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), m);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            rhs(static_cast<Eigen::Index>(i)) = -r[i];
            for (Eigen::Index j = 0; j < m; ++j) jac(static_cast<Eigen::Index>(i), j) = columns[static_cast<std::size_t>(j)][i];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd delta = svd.solve(rhs);
        out.singular_values.assign(svd.singularValues().data(), svd.singularValues().data() + m);
        for (double& s : out.singular_values) s /= rms;

        double factor = 1.0;
        bool accepted = false;
        for (int h = 0; h <= cfg.max_halvings; ++h, factor *= 0.5) {
            std::vector<double> trial_coords = coords;
            for (Eigen::Index j = 0; j < m; ++j) trial_coords[static_cast<std::size_t>(j)] += factor * delta(j);
            Field trial = from_basis(n, trial_coords);
            try {
                Field trial_r = residual_of(trial);
                const double trial_res = trial_r.max_abs();
                if (trial_res < res) {
                    coords = std::move(trial_coords);
                    v = std::move(trial);
                    r = std::move(trial_r);
                    res = trial_res;
                    accepted = true;
                    break;
                }
            } catch (const BlowUp&) {
                // too long a step; halve it
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "line search failed at iteration " << iter << " (residual " << res << ")";
            throw NoConvergence(os.str());
        }
        out.trace.push_back({iter, res, factor});
    }
    out.v = std::move(v);
    out.residual = res;
    return out;
}

}  // namespace expdiff
