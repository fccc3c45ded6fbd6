#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expdiff/spectral.hpp"

namespace expdiff {

/// Named analytic initial data.
///
///   zero
///   sine(m, a)             a sin(2 pi m x)
///   cosine(m, a)           a cos(2 pi m x)
///   gauss-bump(x0, w, a)   periodized a exp(-(x - x0)^2 / (2 w^2))
///   random-band(nmax, a[, seed])
///                          zero-mean random modes 1..nmax with 1/n^2 decay,
///                          scaled to sup norm a
struct Profile {
    std::string name;
    std::vector<double> args;

    /// Throws ConfigError on unknown names, wrong arity or non-positive amplitude.
    static Profile parse(const std::string& text);

    std::string to_string() const;

    /// Samples the profile on an N-point grid. `default_seed` is used by
    /// random-band when no seed argument was given.
    Field sample(std::size_t n, std::uint64_t default_seed = 0) const;

    friend bool operator==(const Profile&, const Profile&) = default;
};

}  // namespace expdiff
