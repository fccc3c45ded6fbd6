#include "expdiff/profiles.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "expdiff/errors.hpp"
#include "expdiff/io.hpp"

namespace expdiff {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

struct Arity {
    std::size_t min;
    std::size_t max;
    int amplitude_index;  // -1: no amplitude
};

Arity arity_of(const std::string& name) {
    if (name == "zero") return {0, 0, -1};
    if (name == "sine" || name == "cosine") return {2, 2, 1};
    if (name == "gauss-bump") return {3, 3, 2};
    if (name == "random-band") return {2, 3, 1};
    throw ConfigError("unknown initial profile '" + name + "'");
}

}  // namespace

Profile Profile::parse(const std::string& text) {
    const std::string t = trim(text);
    Profile p;
    const auto open = t.find('(');
    if (open == std::string::npos) {
        p.name = t;
    } else {
        if (t.back() != ')') throw ConfigError("profile '" + t + "' is missing ')'");
        p.name = trim(t.substr(0, open));
        const std::string inner = t.substr(open + 1, t.size() - open - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            try {
                std::size_t used = 0;
                p.args.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::logic_error&) {
                throw ConfigError("profile '" + t + "': '" + item + "' is not a number");
            }
        }
    }
    const Arity a = arity_of(p.name);
    if (p.args.size() < a.min || p.args.size() > a.max) {
        throw ConfigError("profile '" + p.name + "' takes " + std::to_string(a.min) +
                          (a.max != a.min ? "-" + std::to_string(a.max) : std::string()) + " arguments");
    }
    if (a.amplitude_index >= 0 && !(p.args[static_cast<std::size_t>(a.amplitude_index)] > 0.0)) {
        throw ConfigError("profile '" + p.name + "': amplitude must be positive");
    }
    if (p.name == "gauss-bump" && !(p.args[1] > 0.0)) throw ConfigError("gauss-bump: width must be positive");
    if (p.name == "random-band" && (p.args[0] < 1.0 || p.args[0] != std::floor(p.args[0]))) {
        throw ConfigError("random-band: nmax must be a positive integer");
    }
    return p;
}

std::string Profile::to_string() const {
    if (args.empty()) return name;
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += io::format_double(args[i]);
    }
    return out + ")";
}

Field Profile::sample(std::size_t n, std::uint64_t default_seed) const {
    if (name == "zero") return Field::zero(n);
    if (name == "sine" || name == "cosine") {
        const double m = args[0];
        const double a = args[1];
        const bool is_sine = name == "sine";
        return Field::sample(n, [=](double x) {
            return a * (is_sine ? std::sin(kTwoPi * m * x) : std::cos(kTwoPi * m * x));
        });
    }
    if (name == "gauss-bump") {
        const double x0 = args[0];
        const double w = args[1];
        const double a = args[2];
        const int images = static_cast<int>(std::ceil(10.0 * w)) + 1;
        return Field::sample(n, [=](double x) {
            double s = 0.0;
            for (int m = -images; m <= images; ++m) {
                const double d = x - x0 - m;
                s += std::exp(-d * d / (2.0 * w * w));
            }
            return a * s;
        });
    }
    // random-band
    const auto nmax = static_cast<std::size_t>(args[0]);
    if (nmax >= n / 2) throw ConfigError("random-band: nmax must be below N/2");
    const double a = args[1];
    const std::uint64_t seed = args.size() > 2 ? static_cast<std::uint64_t>(args[2]) : default_seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Complex> c(n / 2 + 1, Complex{});
    for (std::size_t m = 1; m <= nmax; ++m) {
        const double re = uni(rng);
        const double im = uni(rng);
        c[m] = Complex{re, im} / static_cast<double>(m * m);
    }
    Field f = Field::from_coefficients(n, std::move(c));
    return f * (a / f.max_abs());
}

}  // namespace expdiff
