#pragma once

#include <stdexcept>
#include <string>

namespace expdiff {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A displacement field does not define an orientation-preserving diffeomorphism
/// (slope 1 + f' fell below the configured floor).
class InvalidDiffeo : public Error {
public:
    using Error::Error;
};

/// An iterative solver (pointwise inversion, Gauss-Newton shooting) gave up.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// The geodesic integrator left the validity neighborhood.
class BlowUp : public Error {
public:
    BlowUp(double time, const std::string& what)
        : Error("blow-up at t = " + std::to_string(time) + ": " + what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// The Burgers characteristic map lost monotonicity.
class ShockFormed : public Error {
public:
    using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace expdiff
