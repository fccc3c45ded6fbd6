#include "expdiff/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "expdiff/convergence.hpp"
#include "expdiff/errors.hpp"
#include "expdiff/io.hpp"

namespace expdiff {
namespace {

struct Entry {
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& what) {
    throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "': " + what);
}

double to_double(const std::string& key, const Entry& e) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used == e.value.size() && std::isfinite(v)) return v;
    } catch (const std::logic_error&) {
    }
    fail(key, e, "'" + e.value + "' is not a finite number");
}

long to_integer(const std::string& key, const Entry& e) {
    try {
        std::size_t used = 0;
        const long v = std::stol(e.value, &used);
        if (used == e.value.size()) return v;
    } catch (const std::logic_error&) {
    }
    fail(key, e, "'" + e.value + "' is not an integer");
}

bool to_bool(const std::string& key, const Entry& e) {
    if (e.value == "true" || e.value == "on" || e.value == "1") return true;
    if (e.value == "false" || e.value == "off" || e.value == "0") return false;
    fail(key, e, "'" + e.value + "' is not a boolean (true/false)");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

Profile to_profile(const std::string& key, const Entry& e) {
    try {
        return Profile::parse(e.value);
    } catch (const ConfigError& err) {
        fail(key, e, err.what());
    }
}

// Keys accepted by every command, and the extra ones per command.
const std::set<std::string> kCommonKeys = {"command",   "N",           "dt",           "k",
                                           "T",         "dealias",     "slope_floor",  "inversion_tol",
                                           "inversion_max_iter",       "monitor_tol",  "t_max",
                                           "initial",   "initial_file", "seed",        "output_dir"};
const std::set<std::string> kTrajectoryKeys = {"monitor_stride", "snapshot_stride"};
const std::set<std::string> kShootingKeys = {"modes",  "newton_tol", "max_newton", "fd_step",
                                             "max_halvings", "threads", "target", "target_file"};
const std::set<std::string> kConvergenceKeys = {"conv_dts", "conv_grids", "conv_ref_dt", "conv_ref_N"};
const std::set<std::string> kBurgersKeys = {"burgers_tol"};

const std::set<std::string>& extra_keys(Command c) {
    static const std::set<std::string> none;
    switch (c) {
        case Command::Evolve:
        case Command::Invariants: return kTrajectoryKeys;
        case Command::Log: return kShootingKeys;
        case Command::Convergence: return kConvergenceKeys;
        case Command::BurgersCheck: return kBurgersKeys;
        case Command::Exp: return none;
    }
    return none;
}

bool is_known_key(const std::string& key) {
    return kCommonKeys.count(key) || kTrajectoryKeys.count(key) || kShootingKeys.count(key) ||
           kConvergenceKeys.count(key) || kBurgersKeys.count(key);
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Evolve: return "evolve";
        case Command::Exp: return "exp";
        case Command::Log: return "log";
        case Command::Invariants: return "invariants";
        case Command::Convergence: return "convergence";
        case Command::BurgersCheck: return "burgers-check";
    }
    return "?";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::Evolve, Command::Exp, Command::Log, Command::Invariants, Command::Convergence,
                      Command::BurgersCheck}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown command '" + name +
                      "' (expected evolve, exp, log, invariants, convergence or burgers-check)");
}

Field ExperimentSpec::initial_velocity() const {
    if (initial_file) {
        Field f = io::load_field(*initial_file);
        if (f.size() != solver.grid_size) {
            throw ConfigError("initial_file has " + std::to_string(f.size()) + " points but N = " +
                              std::to_string(solver.grid_size));
        }
        return f;
    }
    return initial.value_or(Profile::parse("sine(1, 0.05)")).sample(solver.grid_size, seed);
}

ExperimentSpec parse_config(const std::string& text, std::optional<Command> command) {
    std::map<std::string, Entry> entries;
    {
        std::stringstream ss(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(ss, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!is_known_key(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' has no value");
            if (entries.count(key)) {
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                                  std::to_string(entries[key].line) + ")");
            }
            entries[key] = {value, lineno};
        }
    }

    ExperimentSpec spec;
    if (auto it = entries.find("command"); it != entries.end()) {
        Command c;
        try {
            c = parse_command(it->second.value);
        } catch (const ConfigError& e) {
            fail("command", it->second, e.what());
        }
        if (command && *command != c) {
            fail("command", it->second, "config says '" + to_string(c) + "' but '" + to_string(*command) +
                                            "' was requested");
        }
        spec.command = c;
    } else if (command) {
        spec.command = *command;
    } else {
        throw ConfigError("no command given");
    }

    const auto& extra = extra_keys(spec.command);
    for (const auto& [key, e] : entries) {
        if (!kCommonKeys.count(key) && !extra.count(key)) {
            fail(key, e, "not used by command '" + to_string(spec.command) + "'");
        }
    }

    auto get = [&](const std::string& key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    const bool burgers = spec.command == Command::BurgersCheck;
    SolverConfig& s = spec.solver;
    s.k = burgers ? 0 : 1;
    spec.T = burgers ? 0.1 : 1.0;

    if (auto e = get("N")) {
        const long n = to_integer("N", *e);
        if (n < 16 || n % 2 != 0) fail("N", *e, "grid size must be even and >= 16");
        s.grid_size = static_cast<std::size_t>(n);
    }
    if (auto e = get("dt")) s.dt = to_double("dt", *e);
    if (auto e = get("k")) {
        const long k = to_integer("k", *e);
        if (k < 0 || k > kMaxMetricOrder) fail("k", *e, "metric order must lie in [0, 4]");
        if (burgers && k != 0) fail("k", *e, "burgers-check runs the k = 0 flow");
        if (!burgers && k == 0) {
            fail("k", *e, "geodesic flow requires k >= 1 (the k = 0 equation is not an ODE on the group); "
                          "use burgers-check for k = 0");
        }
        s.k = static_cast<int>(k);
    }
    if (auto e = get("T")) spec.T = to_double("T", *e);
    if (auto e = get("dealias")) s.dealias = to_bool("dealias", *e);
    if (auto e = get("slope_floor")) s.slope_floor = to_double("slope_floor", *e);
    if (auto e = get("inversion_tol")) s.inversion_tol = to_double("inversion_tol", *e);
    if (auto e = get("inversion_max_iter")) s.inversion_max_iter = static_cast<int>(to_integer("inversion_max_iter", *e));
    if (auto e = get("monitor_tol")) s.monitor_tol = to_double("monitor_tol", *e);
    if (auto e = get("t_max")) s.t_max = to_double("t_max", *e);
    try {
        s.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (std::abs(spec.T) > s.t_max) {
        throw ConfigError("|T| = " + io::format_double(std::abs(spec.T)) + " exceeds t_max = " +
                          io::format_double(s.t_max));
    }

    if (auto e = get("initial")) spec.initial = to_profile("initial", *e);
    if (auto e = get("initial_file")) {
        if (spec.initial) fail("initial_file", *e, "give either 'initial' or 'initial_file', not both");
        spec.initial_file = e->value;
        if (!std::filesystem::exists(*spec.initial_file)) fail("initial_file", *e, "file does not exist");
    }
    if (!spec.initial && !spec.initial_file) spec.initial = Profile::parse("sine(1, 0.05)");
    if (auto e = get("seed")) {
        const long seed = to_integer("seed", *e);
        if (seed < 0) fail("seed", *e, "seed must be non-negative");
        spec.seed = static_cast<std::uint64_t>(seed);
    }
    if (auto e = get("output_dir")) spec.output_dir = e->value;

    if (spec.command == Command::Evolve || spec.command == Command::Invariants) {
        if (auto e = get("monitor_stride")) {
            spec.monitor_stride = static_cast<int>(to_integer("monitor_stride", *e));
            if (spec.monitor_stride < 1) fail("monitor_stride", *e, "must be >= 1");
        }
        if (auto e = get("snapshot_stride")) {
            spec.snapshot_stride = static_cast<int>(to_integer("snapshot_stride", *e));
            if (spec.snapshot_stride < 0) fail("snapshot_stride", *e, "must be >= 0");
        }
    }

    if (spec.command == Command::Log) {
        ShootingConfig sc;
        if (auto e = get("modes")) sc.modes = static_cast<int>(to_integer("modes", *e));
        if (auto e = get("newton_tol")) sc.newton_tol = to_double("newton_tol", *e);
        if (auto e = get("max_newton")) sc.max_newton = static_cast<int>(to_integer("max_newton", *e));
        if (auto e = get("fd_step")) sc.fd_step = to_double("fd_step", *e);
        if (auto e = get("max_halvings")) sc.max_halvings = static_cast<int>(to_integer("max_halvings", *e));
        if (auto e = get("threads")) {
            const long t = to_integer("threads", *e);
            if (t < 0) fail("threads", *e, "must be >= 0");
            sc.threads = static_cast<unsigned>(t);
        }
        sc.solver = s;
        try {
            sc.validate();
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
        spec.shooting = sc;
        const Entry* target = get("target");
        const Entry* target_file = get("target_file");
        if (target && target_file) fail("target_file", *target_file, "give either 'target' or 'target_file', not both");
        if (!target && !target_file) throw ConfigError("command 'log' requires 'target' or 'target_file'");
        if (target) spec.target = to_profile("target", *target);
        if (target_file) {
            spec.target_file = target_file->value;
            if (!std::filesystem::exists(*spec.target_file)) fail("target_file", *target_file, "file does not exist");
        }
    }

    if (spec.command == Command::Convergence) {
        ConvergenceSettings cs;
        if (auto e = get("conv_dts")) {
            cs.dts.clear();
            for (const auto& item : split_list(e->value)) cs.dts.push_back(to_double("conv_dts", {item, e->line}));
        }
        if (auto e = get("conv_grids")) {
            cs.grids.clear();
            for (const auto& item : split_list(e->value)) {
                const long n = to_integer("conv_grids", {item, e->line});
                if (n < 16 || n % 2 != 0) fail("conv_grids", *e, "grid sizes must be even and >= 16");
                cs.grids.push_back(static_cast<std::size_t>(n));
            }
        }
        if (auto e = get("conv_ref_dt")) cs.ref_dt = to_double("conv_ref_dt", *e);
        if (auto e = get("conv_ref_N")) {
            const long n = to_integer("conv_ref_N", *e);
            if (n < 16 || n % 2 != 0) fail("conv_ref_N", *e, "grid size must be even and >= 16");
            cs.ref_grid = static_cast<std::size_t>(n);
        }
        for (double dt : cs.dts) {
            if (!(dt > 0.0)) throw ConfigError("conv_dts: time steps must be positive");
        }
        if (!(cs.ref_dt > 0.0)) throw ConfigError("conv_ref_dt must be positive");
        for (std::size_t n : cs.grids) {
            if (cs.ref_grid % n != 0) throw ConfigError("conv_ref_N must be a multiple of every conv_grids entry");
        }
        if (spec.initial_file) throw ConfigError("convergence needs a named 'initial' profile to resample");
        spec.convergence = cs;
    }

    if (burgers) {
        if (auto e = get("burgers_tol")) {
            spec.burgers_tol = to_double("burgers_tol", *e);
            if (!(spec.burgers_tol > 0.0)) fail("burgers_tol", *e, "must be positive");
        }
    }
    return spec;
}

std::string format_manifest(const ExperimentSpec& spec) {
    using io::format_double;
    std::ostringstream os;
    const SolverConfig& s = spec.solver;
    os << "# resolved expdiff configuration\n";
    os << "command = " << to_string(spec.command) << '\n';
    os << "N = " << s.grid_size << '\n';
    os << "dt = " << format_double(s.dt) << '\n';
    os << "k = " << s.k << '\n';
    os << "T = " << format_double(spec.T) << '\n';
    os << "dealias = " << (s.dealias ? "true" : "false") << '\n';
    os << "slope_floor = " << format_double(s.slope_floor) << '\n';
    os << "inversion_tol = " << format_double(s.inversion_tol) << '\n';
    os << "inversion_max_iter = " << s.inversion_max_iter << '\n';
    os << "monitor_tol = " << format_double(s.monitor_tol) << '\n';
    os << "t_max = " << format_double(s.t_max) << '\n';
    if (spec.initial) os << "initial = " << spec.initial->to_string() << '\n';
    if (spec.initial_file) os << "initial_file = " << spec.initial_file->string() << '\n';
    os << "seed = " << spec.seed << '\n';
    os << "output_dir = " << spec.output_dir.string() << '\n';
    if (spec.command == Command::Evolve || spec.command == Command::Invariants) {
        os << "monitor_stride = " << spec.monitor_stride << '\n';
        os << "snapshot_stride = " << spec.snapshot_stride << '\n';
    }
    if (spec.shooting) {
        const ShootingConfig& sc = *spec.shooting;
        os << "modes = " << sc.modes << '\n';
        os << "newton_tol = " << format_double(sc.newton_tol) << '\n';
        os << "max_newton = " << sc.max_newton << '\n';
        os << "fd_step = " << format_double(sc.fd_step) << '\n';
        os << "max_halvings = " << sc.max_halvings << '\n';
        os << "threads = " << sc.threads << '\n';
    }
    if (spec.target) os << "target = " << spec.target->to_string() << '\n';
    if (spec.target_file) os << "target_file = " << spec.target_file->string() << '\n';
    if (spec.convergence) {
        const ConvergenceSettings& cs = *spec.convergence;
        os << "conv_dts = ";
        for (std::size_t i = 0; i < cs.dts.size(); ++i) os << (i ? ", " : "") << format_double(cs.dts[i]);
        os << "\nconv_grids = ";
        for (std::size_t i = 0; i < cs.grids.size(); ++i) os << (i ? ", " : "") << cs.grids[i];
        os << "\nconv_ref_dt = " << format_double(cs.ref_dt) << '\n';
        os << "conv_ref_N = " << cs.ref_grid << '\n';
    }
    if (spec.command == Command::BurgersCheck) os << "burgers_tol = " << format_double(spec.burgers_tol) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Commands

namespace {

// Pass thresholds reported by `invariants`.
constexpr double kEnergyDriftTol = 1e-8;
constexpr double kSlopeTol = 1e-7;
constexpr double kMeanTol = 1e-10;

struct Context {
    const ExperimentSpec& spec;
    std::ostream& log;
    bool quiet;

    std::filesystem::path out(const std::string& name) const { return spec.output_dir / name; }
    std::ostream& info() const {
        static std::ostream null(nullptr);
        return quiet ? null : log;
    }
};

std::string snapshot_name(const std::string& prefix, long step) {
    std::ostringstream os;
    os << prefix << '_' << step << ".csv";
    return os.str();
}

// Integrates the geodesic, sampling monitors (and snapshots) along the way.
std::vector<MonitorSample> trajectory_run(const Context& ctx, const Field& v0, GeodesicState& final_state) {
    const ExperimentSpec& spec = ctx.spec;
    std::vector<MonitorSample> samples;
    long step = 0;
    const auto total = static_cast<long>(std::ceil(std::abs(spec.T) / spec.solver.dt - 1e-9));
    final_state = integrate_with(v0, spec.T, spec.solver, [&](const GeodesicState& s) {
        const bool last = step == total;
        if (step % spec.monitor_stride == 0 || last) samples.push_back(monitor(s, v0, spec.solver));
        if (spec.snapshot_stride > 0 && (step % spec.snapshot_stride == 0 || last)) {
            io::save_field(ctx.out(snapshot_name("field_u", step)), eulerian(s, spec.solver.inversion()));
            io::save_diffeo(ctx.out(snapshot_name("diffeo_phi", step)), s.phi);
        }
        ++step;
        return true;
    });
    return samples;
}

struct Drift {
    double energy = 0.0;
    double momentum = 0.0;
    double slope = 0.0;
    double mean = 0.0;
};

Drift max_drift(const std::vector<MonitorSample>& samples) {
    Drift d;
    if (samples.empty()) return d;
    const double e0 = samples.front().energy;
    for (const auto& s : samples) {
        const double de = std::abs(s.energy - e0);
        d.energy = std::max(d.energy, e0 > 0.0 ? de / e0 : de);
        d.momentum = std::max(d.momentum, s.momentum_err);
        d.slope = std::max(d.slope, s.slope_err);
        d.mean = std::max(d.mean, s.mean_err);
    }
    return d;
}

int run_evolve(const Context& ctx) {
    const auto& spec = ctx.spec;
    const Field v0 = spec.initial_velocity();
    io::save_field(ctx.out("field_v0.csv"), v0);
    io::save_spectrum(ctx.out("spec_v0.csv"), v0);
    GeodesicState end = GeodesicState::initial(v0);
    const auto samples = trajectory_run(ctx, v0, end);
    io::save_monitors(ctx.out("monitors.csv"), samples);
    io::save_field(ctx.out("field_v_final.csv"), end.v);
    io::save_field(ctx.out("field_u_final.csv"), eulerian(end, spec.solver.inversion()));
    io::save_diffeo(ctx.out("diffeo_phi_final.csv"), end.phi);

    const Drift d = max_drift(samples);
    ctx.info() << "evolve: t = " << io::format_double(end.t) << ", max energy drift " << io::format_double(d.energy)
               << ", max momentum error " << io::format_double(d.momentum) << '\n';
    return kExitOk;
}

int run_invariants(const Context& ctx) {
    const auto& spec = ctx.spec;
    const Field v0 = spec.initial_velocity();
    GeodesicState end = GeodesicState::initial(v0);
    const auto samples = trajectory_run(ctx, v0, end);
    io::save_monitors(ctx.out("monitors.csv"), samples);

    const Drift d = max_drift(samples);
    struct Row {
        const char* name;
        double value;
        double tol;
    };
    const Row rows[] = {{"energy_drift", d.energy, kEnergyDriftTol},
                        {"momentum_err", d.momentum, spec.solver.monitor_tol},
                        {"slope_err", d.slope, kSlopeTol},
                        {"mean_err", d.mean, kMeanTol}};
    std::ofstream os(ctx.out("invariants.csv"), std::ios::binary);
    os << "quantity,max,tolerance,status\n";
    for (const auto& r : rows) {
        const bool ok = r.value < r.tol;
        os << r.name << ',' << io::format_double(r.value) << ',' << io::format_double(r.tol) << ','
           << (ok ? "pass" : "fail") << '\n';
        ctx.info() << (ok ? "[ok]   " : "[FAIL] ") << r.name << " = " << io::format_double(r.value) << " (< "
                   << io::format_double(r.tol) << ")\n";
    }
    return kExitOk;
}

int run_exp(const Context& ctx) {
    const auto& spec = ctx.spec;
    const Field v0 = spec.initial_velocity();
    SolverConfig cfg = spec.solver;
    const Diffeo phi = exp_map(v0, cfg);
    io::save_field(ctx.out("field_v0.csv"), v0);
    io::save_spectrum(ctx.out("spec_v0.csv"), v0);
    io::save_diffeo(ctx.out("diffeo_exp.csv"), phi);
    ctx.info() << "exp: min slope " << io::format_double(phi.min_slope()) << '\n';
    return kExitOk;
}

int run_log(const Context& ctx) {
    const auto& spec = ctx.spec;
    ShootingConfig sc = *spec.shooting;
    sc.solver = spec.solver;
    const Diffeo psi = spec.target_file ? io::load_diffeo(*spec.target_file, spec.solver.slope_floor)
                                        : Diffeo(spec.target->sample(spec.solver.grid_size, spec.seed),
                                                 spec.solver.slope_floor);
    if (psi.size() != spec.solver.grid_size) throw ConfigError("target is not on the configured grid");
    io::save_diffeo(ctx.out("diffeo_target.csv"), psi);
    const LogResult r = log_map(psi, sc);
    io::save_field(ctx.out("field_log.csv"), r.v);
    io::save_spectrum(ctx.out("spec_log.csv"), r.v);
    io::save_newton_trace(ctx.out("newton.csv"), r.trace);
    ctx.info() << "log: residual " << io::format_double(r.residual) << " after " << r.trace.back().iter
               << " iteration(s), Jacobian condition " << io::format_double(r.condition_number()) << '\n';
    return kExitOk;
}

int run_convergence(const Context& ctx) {
    const auto& spec = ctx.spec;
    const ConvergenceSettings& cs = *spec.convergence;
    const Profile profile = spec.initial.value_or(Profile::parse("sine(1, 0.05)"));

    const auto time_pts =
        temporal_convergence(profile.sample(spec.solver.grid_size, spec.seed), spec.T, cs.dts, cs.ref_dt, spec.solver);
    {
        std::ofstream os(ctx.out("convergence_dt.csv"), std::ios::binary);
        os << "dt,error,order\n";
        for (const auto& p : time_pts) {
            os << io::format_double(p.parameter) << ',' << io::format_double(p.error) << ','
               << io::format_double(p.rate) << '\n';
            ctx.info() << "dt = " << io::format_double(p.parameter) << "  error " << io::format_double(p.error)
                       << "  order " << io::format_double(p.rate) << '\n';
        }
    }
    const auto grid_pts = spatial_convergence(profile, spec.T, cs.grids, cs.ref_grid, spec.solver, spec.seed);
    {
        std::ofstream os(ctx.out("convergence_grid.csv"), std::ios::binary);
        os << "N,error,ratio\n";
        for (const auto& p : grid_pts) {
            os << static_cast<long>(p.parameter) << ',' << io::format_double(p.error) << ','
               << io::format_double(p.rate) << '\n';
            ctx.info() << "N = " << static_cast<long>(p.parameter) << "  error " << io::format_double(p.error)
                       << "  ratio " << io::format_double(p.rate) << '\n';
        }
    }
    return kExitOk;
}

int run_burgers(const Context& ctx) {
    const auto& spec = ctx.spec;
    const Field v0 = spec.initial_velocity();
    const Field oracle = burgers_oracle(v0, spec.T, spec.solver);
    const Field lagrangian = burgers_lagrangian(v0, spec.T, spec.solver);
    io::save_field(ctx.out("field_burgers_oracle.csv"), oracle);
    io::save_field(ctx.out("field_burgers_lagrangian.csv"), lagrangian);
    const double err = max_abs_diff(oracle.values(), lagrangian.values());
    const bool ok = err < spec.burgers_tol;
    ctx.info() << "burgers-check: sup discrepancy " << io::format_double(err) << (ok ? " < " : " >= ")
               << io::format_double(spec.burgers_tol) << '\n';
    if (!ok) ctx.log << "burgers-check failed: discrepancy " << io::format_double(err) << '\n';
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& log, bool quiet) {
    const Context ctx{spec, log, quiet};
    try {
        std::filesystem::create_directories(spec.output_dir);
        {
            std::ofstream os(ctx.out("manifest.cfg"), std::ios::binary);
            if (!os) throw ConfigError("cannot write to output directory " + spec.output_dir.string());
            os << format_manifest(spec);
        }
        switch (spec.command) {
            case Command::Evolve: return run_evolve(ctx);
            case Command::Invariants: return run_invariants(ctx);
            case Command::Exp: return run_exp(ctx);
            case Command::Log: return run_log(ctx);
            case Command::Convergence: return run_convergence(ctx);
            case Command::BurgersCheck: return run_burgers(ctx);
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const BlowUp& e) {
        log << to_string(spec.command) << ": " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const ShockFormed& e) {
        log << to_string(spec.command) << ": shock formed: " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const InvalidDiffeo& e) {
        log << to_string(spec.command) << ": invalid diffeomorphism: " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const NoConvergence& e) {
        log << to_string(spec.command) << ": no convergence: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::runtime_error& e) {
        log << to_string(spec.command) << ": " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}

}  // namespace expdiff
