#pragma once

// Experiment driver behind the `expdiff` command line tool.
//
// Configuration is flat `key = value` text with `#` comments. Recognized keys:
//
//   command            evolve | exp | log | invariants | convergence | burgers-check
//   N, dt, k, T        grid size, time step, metric order, final time
//   dealias            true | false
//   slope_floor, inversion_tol, inversion_max_iter, monitor_tol, t_max
//   initial            named profile (see profiles.hpp), default sine(1, 0.05)
//   initial_file       x,value CSV, instead of `initial`
//   seed               seed for random-band profiles without an explicit seed
//   output_dir         where results go (the CLI --out flag overrides it)
//   monitor_stride     steps between monitor samples (evolve, invariants)
//   snapshot_stride    steps between field/diffeo snapshots, 0 = none (evolve)
//   modes, newton_tol, max_newton, fd_step, max_halvings, threads    (log)
//   target             profile used as displacement of the target diffeo (log)
//   target_file        x,phi CSV of the target diffeo (log)
//   conv_dts, conv_grids, conv_ref_dt, conv_ref_N                     (convergence)
//   burgers_tol        pass threshold of burgers-check

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expdiff/expmap.hpp"
#include "expdiff/geodesic.hpp"
#include "expdiff/profiles.hpp"

namespace expdiff {

enum class Command { Evolve, Exp, Log, Invariants, Convergence, BurgersCheck };

std::string to_string(Command c);
/// Throws ConfigError for unknown names.
Command parse_command(const std::string& name);

struct ConvergenceSettings {
    std::vector<double> dts{4e-3, 2e-3, 1e-3};
    std::vector<std::size_t> grids{64, 128};
    double ref_dt = 1e-4;
    std::size_t ref_grid = 512;

    friend bool operator==(const ConvergenceSettings&, const ConvergenceSettings&) = default;
};

struct ExperimentSpec {
    Command command = Command::Evolve;
    SolverConfig solver;
    double T = 1.0;
    std::optional<Profile> initial;
    std::optional<std::filesystem::path> initial_file;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    int monitor_stride = 1;
    int snapshot_stride = 0;

    std::optional<ShootingConfig> shooting;  ///< log only
    std::optional<Profile> target;           ///< log only
    std::optional<std::filesystem::path> target_file;
    std::optional<ConvergenceSettings> convergence;
    double burgers_tol = 1e-6;

    /// Initial velocity on the solver grid.
    Field initial_velocity() const;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Parses and validates a configuration. `command` supplies the command when
/// the text has no `command` key; if both are present they must agree.
/// Throws ConfigError with the offending line or key.
ExperimentSpec parse_config(const std::string& text, std::optional<Command> command = std::nullopt);

/// Resolved configuration as config text; parse_config() reads it back to an
/// equal spec.
std::string format_manifest(const ExperimentSpec& spec);

/// Exit statuses of run().
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfigError = 2,
    kExitBlowUp = 3,
    kExitNoConvergence = 4,
};

/// Executes the experiment, writing the manifest and result files to
/// spec.output_dir. Progress and diagnostics go to `log` (errors always).
int run(const ExperimentSpec& spec, std::ostream& log, bool quiet = false);

}  // namespace expdiff
