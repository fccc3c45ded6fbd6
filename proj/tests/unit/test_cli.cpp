#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "expdiff/errors.hpp"
#include "expdiff/experiment.hpp"
#include "expdiff/io.hpp"
#include "expdiff/profiles.hpp"

using namespace expdiff;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("expdiff_unit_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_quiet(ExperimentSpec spec, const fs::path& out, std::string* log = nullptr) {
    spec.output_dir = out;
    std::ostringstream os;
    const int rc = run(spec, os, true);
    if (log) *log = os.str();
    return rc;
}

}  // namespace

TEST_CASE("config defaults") {
    const ExperimentSpec s = parse_config("", Command::Evolve);
    CHECK(s.command == Command::Evolve);
    CHECK(s.solver.grid_size == 256);
    CHECK(s.solver.dt == 1e-3);
    CHECK(s.solver.k == 1);
    CHECK(s.T == 1.0);
    CHECK(s.initial == Profile::parse("sine(1, 0.05)"));

    const ExperimentSpec b = parse_config("command = burgers-check\n");
    CHECK(b.solver.k == 0);
    CHECK(b.T == 0.1);
}

TEST_CASE("config errors name the key or line") {
    auto message = [](const std::string& text, std::optional<Command> c = Command::Evolve) {
        try {
            parse_config(text, c);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("dealiass = true\n").find("dealiass") != std::string::npos);
    CHECK(message("N = 64\nN = 128\n").find("duplicate key 'N'") != std::string::npos);
    CHECK(message("# comment\nN 64\n").find("line 2") != std::string::npos);
    CHECK(message("k = 0\n").find("k >= 1") != std::string::npos);
    CHECK(message("k = 1\n", Command::BurgersCheck).find("k = 0") != std::string::npos);
    CHECK(message("dt = fast\n").find("dt") != std::string::npos);
    CHECK(message("N = 63\n").find("even") != std::string::npos);
    CHECK(message("modes = 9\n").find("modes") != std::string::npos);
    CHECK(message("", Command::Log).find("target") != std::string::npos);
    CHECK(message("initial = sine(1, -0.1)\n").find("amplitude") != std::string::npos);
    CHECK(message("initial = wiggle(1)\n").find("wiggle") != std::string::npos);
    CHECK(message("initial_file = /nonexistent/v.csv\n").find("does not exist") != std::string::npos);
    CHECK(message("T = 3\n").find("t_max") != std::string::npos);
    CHECK(message("command = exp\n", Command::Evolve).find("requested") != std::string::npos);
    CHECK(message("", std::nullopt).find("no command") != std::string::npos);
    CHECK(message("N = 64\ntarget = sine(1, 0.01)\nmodes = 31\n", Command::Log).find("N/3") != std::string::npos);
}

TEST_CASE("manifest round trip") {
    const char* configs[] = {
        "command = evolve\nN = 64\ndt = 0.004\nT = 0.5\ninitial = gauss-bump(0.5, 0.1, 0.01)\nsnapshot_stride = 10\n",
        "command = log\nN = 64\ntarget = sine(1, 0.02)\nmodes = 11\nnewton_tol = 1e-13\nthreads = 2\n",
        "command = convergence\nconv_dts = 0.01, 0.005\nconv_grids = 32, 64\nconv_ref_N = 128\nconv_ref_dt = 0.001\n",
        "command = burgers-check\ninitial = random-band(4, 0.03, 9)\nburgers_tol = 1e-9\ndealias = false\n",
        "command = invariants\nk = 3\nseed = 17\nmonitor_stride = 7\nt_max = 1.5\n",
    };
    for (const char* text : configs) {
        const ExperimentSpec s = parse_config(text);
        const std::string manifest = format_manifest(s);
        CAPTURE(manifest);
        CHECK(parse_config(manifest) == s);
    }
}

TEST_CASE("evolve with zero data has identically zero monitors") {
    const fs::path out = scratch("zero");
    ExperimentSpec s = parse_config("N = 32\ndt = 0.01\nT = 0.2\ninitial = zero\n", Command::Evolve);
    REQUIRE(run_quiet(s, out) == kExitOk);
    const Field u = io::load_field(out / "field_u_final.csv");
    CHECK(u.max_abs() == 0.0);
    std::istringstream monitors(slurp(out / "monitors.csv"));
    std::string line;
    std::getline(monitors, line);
    CHECK(line == "t,energy,momentum_err,slope_err,mean_err");
    int rows = 0;
    while (std::getline(monitors, line)) {
        ++rows;
        CHECK(line.substr(line.find(',')) == ",0,0,0,0");
    }
    CHECK(rows == 21);
    for (const char* f : {"manifest.cfg", "field_v0.csv", "spec_v0.csv", "field_v_final.csv", "diffeo_phi_final.csv"}) {
        CHECK(fs::exists(out / f));
    }
}

TEST_CASE("identical specs give byte-identical outputs") {
    const char* text = "N = 32\ndt = 0.01\nT = 0.3\ninitial = random-band(5, 0.04)\nseed = 4\nsnapshot_stride = 10\n";
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    REQUIRE(run_quiet(parse_config(text, Command::Evolve), a) == kExitOk);
    REQUIRE(run_quiet(parse_config(text, Command::Evolve), b) == kExitOk);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().filename() == "manifest.cfg") continue;  // records output_dir
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
        ++compared;
    }
    CHECK(compared >= 8);
}

TEST_CASE("exit codes") {
    std::string log;
    SUBCASE("blow-up") {
        const ExperimentSpec s = parse_config("N = 64\ndt = 0.002\ninitial = sine(1, 0.5)\n", Command::Evolve);
        CHECK(run_quiet(s, scratch("blowup"), &log) == kExitBlowUp);
        CHECK(log.find("blow-up at t = 0.4") != std::string::npos);
    }
    SUBCASE("no convergence") {
        const ExperimentSpec s =
            parse_config("N = 64\ndt = 0.01\ntarget = sine(1, 0.1)\nmodes = 9\nmax_newton = 1\n", Command::Log);
        CHECK(run_quiet(s, scratch("noconv"), &log) == kExitNoConvergence);
        CHECK(!log.empty());
    }
    SUBCASE("shock in burgers-check") {
        const ExperimentSpec s = parse_config("initial = sine(1, 0.05)\nT = 1.5\n", Command::BurgersCheck);
        CHECK(run_quiet(s, scratch("shock"), &log) == kExitBlowUp);
    }
    SUBCASE("burgers-check passes") {
        const ExperimentSpec s = parse_config("N = 128\ninitial = sine(1, 0.05)\n", Command::BurgersCheck);
        CHECK(run_quiet(s, scratch("burgers"), &log) == kExitOk);
    }
}

TEST_CASE("log command writes the solution and trace") {
    const fs::path out = scratch("log");
    const ExperimentSpec s =
        parse_config("N = 64\ndt = 0.01\ntarget = sine(1, 0.02)\nmodes = 21\nthreads = 1\n", Command::Log);
    REQUIRE(run_quiet(s, out) == kExitOk);
    CHECK(slurp(out / "newton.csv").rfind("iter,residual,step_factor\n0,", 0) == 0);
    CHECK(slurp(out / "spec_log.csv").rfind("n,re,im\n", 0) == 0);
    const Field v = io::load_field(out / "field_log.csv");
    CHECK(v.size() == 64);
}

TEST_CASE("invariants command reports pass lines") {
    const fs::path out = scratch("inv");
    const ExperimentSpec s = parse_config("N = 64\ndt = 0.005\nmonitor_stride = 20\n", Command::Invariants);
    REQUIRE(run_quiet(s, out) == kExitOk);
    const std::string table = slurp(out / "invariants.csv");
    CHECK(table.find("fail") == std::string::npos);
    CHECK(table.find("energy_drift") != std::string::npos);
}

TEST_CASE("csv round trip is bit exact") {
    const Field f = Profile::parse("random-band(7, 0.3, 2)").sample(32);
    const fs::path dir = scratch("io");
    fs::create_directories(dir);
    io::save_field(dir / "f.csv", f);
    const Field g = io::load_field(dir / "f.csv");
    for (std::size_t i = 0; i < 32; ++i) CHECK(g[i] == f[i]);

    const Diffeo phi(f * 0.1);
    io::save_diffeo(dir / "phi.csv", phi);
    const Diffeo psi = io::load_diffeo(dir / "phi.csv");
    CHECK(lift_distance(phi, psi) < 1e-16);  // the file stores x + f

    std::istringstream bad_header("x,val\n0,1\n");
    CHECK_THROWS(io::read_field(bad_header));
    std::ostringstream os;
    io::write_field(os, Field::zero(16));
    std::string text = os.str();
    text.replace(text.find("\n0.0625,"), 8, "\n0.07,");
    std::istringstream bad_grid(text);
    CHECK_THROWS(io::read_field(bad_grid));
}

TEST_CASE("initial data from file") {
    const fs::path dir = scratch("initial_file");
    fs::create_directories(dir);
    io::save_field(dir / "v0.csv", Profile::parse("cosine(2, 0.01)").sample(32));
    const ExperimentSpec s = parse_config("N = 32\ninitial_file = " + (dir / "v0.csv").string() + "\n", Command::Exp);
    CHECK(s.initial_velocity()[0] == 0.01);
    const ExperimentSpec wrong = parse_config("N = 64\ninitial_file = " + (dir / "v0.csv").string() + "\n", Command::Exp);
    CHECK_THROWS_AS(wrong.initial_velocity(), ConfigError);
}

TEST_CASE("profiles") {
    CHECK(Profile::parse(" sine( 2 , 0.1 ) ").to_string() == "sine(2, 0.10000000000000001)");
    CHECK_THROWS_AS(Profile::parse("sine(2)"), ConfigError);
    CHECK_THROWS_AS(Profile::parse("gauss-bump(0.5, 0, 1)"), ConfigError);
    CHECK_THROWS_AS(Profile::parse("random-band(2.5, 1)"), ConfigError);
    CHECK_THROWS_AS(Profile::parse("random-band(40, 1)").sample(64), ConfigError);
    const Field r = Profile::parse("random-band(6, 0.2)").sample(64, 3);
    CHECK(r.max_abs() == doctest::Approx(0.2));
    CHECK(std::abs(r.mean()) < 1e-17);
    CHECK(max_abs_diff(r.values(), Profile::parse("random-band(6, 0.2, 3)").sample(64).values()) == 0.0);
    CHECK(max_abs_diff(r.values(), Profile::parse("random-band(6, 0.2)").sample(64, 4).values()) > 0.0);
    const Field g = Profile::parse("gauss-bump(0.0, 0.1, 1)").sample(64);
    CHECK(g[0] == doctest::Approx(1.0 + 2.0 * std::exp(-50.0)));
    CHECK(g[0] > g[1]);
    CHECK(g[1] == doctest::Approx(g[63]));  // periodized
}
