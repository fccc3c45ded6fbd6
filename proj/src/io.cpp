#include "expdiff/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace expdiff::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return is;
}

// Reads a two-column CSV with the given header; returns the columns.
std::pair<std::vector<double>, std::vector<double>> read_two_columns(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw std::runtime_error("expected CSV header '" + header + "', got '" + line + "'");
    std::vector<double> a, b;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("line " + std::to_string(lineno) + ": missing comma");
        try {
            std::size_t used = 0;
            const std::string left = line.substr(0, comma);
            const std::string right = line.substr(comma + 1);
            a.push_back(std::stod(left, &used));
            if (used != left.size()) throw std::invalid_argument(left);
            b.push_back(std::stod(right, &used));
            if (used != right.size()) throw std::invalid_argument(right);
        } catch (const std::logic_error&) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number in '" + line + "'");
        }
    }
    return {std::move(a), std::move(b)};
}

void check_grid(const std::vector<double>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(x[i] - grid_point(i, n)) > 1e-12) {
            throw std::runtime_error("CSV x column is not the uniform grid i/N at row " + std::to_string(i));
        }
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_field(std::ostream& os, const Field& f) {
    os << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << format_double(grid_point(i, f.size())) << ',' << format_double(f[i]) << '\n';
    }
}

void write_spectrum(std::ostream& os, const Field& f) {
    os << "n,re,im\n";
    const auto c = f.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        os << i << ',' << format_double(c[i].real()) << ',' << format_double(c[i].imag()) << '\n';
    }
}

void write_diffeo(std::ostream& os, const Diffeo& phi) {
    os << "x,phi\n";
    const auto lift = phi.lift_values();
    for (std::size_t i = 0; i < lift.size(); ++i) {
        os << format_double(grid_point(i, lift.size())) << ',' << format_double(lift[i]) << '\n';
    }
}

void write_monitors(std::ostream& os, const std::vector<MonitorSample>& samples) {
    os << "t,energy,momentum_err,slope_err,mean_err\n";
    for (const auto& s : samples) {
        os << format_double(s.t) << ',' << format_double(s.energy) << ',' << format_double(s.momentum_err) << ','
           << format_double(s.slope_err) << ',' << format_double(s.mean_err) << '\n';
    }
}

void write_newton_trace(std::ostream& os, const std::vector<NewtonRecord>& trace) {
    os << "iter,residual,step_factor\n";
    for (const auto& r : trace) {
        os << r.iter << ',' << format_double(r.residual) << ',' << format_double(r.step_factor) << '\n';
    }
}

Field read_field(std::istream& is) {
    auto [x, v] = read_two_columns(is, "x,value");
    check_grid(x);
    return Field(std::move(v));
}

Diffeo read_diffeo(std::istream& is, double slope_floor) {
    auto [x, lift] = read_two_columns(is, "x,phi");
    check_grid(x);
    return Diffeo::from_lift(lift, slope_floor);
}

void save_field(const std::filesystem::path& path, const Field& f) {
    auto os = open_out(path);
    write_field(os, f);
}

void save_spectrum(const std::filesystem::path& path, const Field& f) {
    auto os = open_out(path);
    write_spectrum(os, f);
}

void save_diffeo(const std::filesystem::path& path, const Diffeo& phi) {
    auto os = open_out(path);
    write_diffeo(os, phi);
}

void save_monitors(const std::filesystem::path& path, const std::vector<MonitorSample>& samples) {
    auto os = open_out(path);
    write_monitors(os, samples);
}

void save_newton_trace(const std::filesystem::path& path, const std::vector<NewtonRecord>& trace) {
    auto os = open_out(path);
    write_newton_trace(os, trace);
}

Field load_field(const std::filesystem::path& path) {
    auto is = open_in(path);
    return read_field(is);
}

Diffeo load_diffeo(const std::filesystem::path& path, double slope_floor) {
    auto is = open_in(path);
    return read_diffeo(is, slope_floor);
}

}  // namespace expdiff::io
