#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "expdiff/convergence.hpp"
#include "expdiff/errors.hpp"
#include "expdiff/geodesic.hpp"
#include "expdiff/profiles.hpp"

using namespace expdiff;

namespace {

SolverConfig small(int k = 1, std::size_t n = 64, double dt = 4e-3) {
    SolverConfig c;
    c.grid_size = n;
    c.dt = dt;
    c.k = k;
    return c;
}

Field sine(std::size_t n, double a, int m = 1) {
    return Field::sample(n, [=](double x) { return a * std::sin(kTwoPi * m * x); });
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.grid_size = 31;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.k = 5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("zero velocity is a fixed point") {
    const SolverConfig cfg = small();
    const GeodesicState s = flow(Field::zero(64), 1.0, cfg);
    CHECK(s.t == 1.0);
    CHECK(s.phi.displacement().max_abs() == 0.0);
    CHECK(s.v.max_abs() == 0.0);
    const MonitorSample m = monitor(s, Field::zero(64), cfg);
    CHECK(m.energy == 0.0);
    CHECK(m.momentum_err == 0.0);
    CHECK(m.slope_err == 0.0);
}

TEST_CASE("vector field needs k >= 1") {
    CHECK_THROWS_AS(vector_field(Diffeo::identity(32), Field::zero(32), small(0, 32)), std::invalid_argument);
}

TEST_CASE("integration takes equal steps and lands on T") {
    const Trajectory tr = integrate(sine(32, 0.05), 0.1, small(1, 32, 0.03));
    REQUIRE(tr.size() == 5);  // ceil(0.1 / 0.03) = 4 steps
    CHECK(tr.front().t == 0.0);
    CHECK(tr.back().t == 0.1);
    CHECK(tr[1].t == doctest::Approx(0.025));
    CHECK_THROWS_AS(flow(sine(32, 0.05), 2.5, small(1, 32)), std::invalid_argument);
}

TEST_CASE("conserved quantities along a geodesic") {
    for (int k : {1, 2, 3}) {
        const SolverConfig cfg = small(k);
        const Field v0 = sine(64, 0.03) + sine(64, 0.01, 2);
        double e0 = 0.0, drift = 0.0, mom = 0.0, slope_err = 0.0, mean_err = 0.0;
        integrate_with(v0, 1.0, cfg, [&](const GeodesicState& s) {
            const MonitorSample m = monitor(s, v0, cfg);
            if (s.t == 0.0) e0 = m.energy;
            drift = std::max(drift, std::abs(m.energy - e0) / e0);
            mom = std::max(mom, m.momentum_err);
            slope_err = std::max(slope_err, m.slope_err);
            mean_err = std::max(mean_err, m.mean_err);
            return true;
        });
        CAPTURE(k);
        CHECK(drift < 1e-10);
        CHECK(mom < 1e-8);
        CHECK(slope_err < 1e-12);
        CHECK(mean_err < 1e-13);
    }
}

TEST_CASE("the Eulerian velocity solves the Euler equation") {
    const SolverConfig cfg = small(1, 64, 1e-3);
    const Field v0 = sine(64, 0.05);
    const GeodesicState mid = flow(v0, 0.5, cfg);
    const double h = 1e-3;
    SolverConfig c2 = cfg;
    c2.dt = h;
    const Field up = eulerian(flow_from(mid, h, c2));
    const Field um = eulerian(flow_from(mid, -h, c2));
    const Field u_t = (up - um) * (0.5 / h);
    const Field res = euler_residual(eulerian(mid), u_t, cfg.order());
    CHECK(res.max_abs() < 1e-6);
    // A perturbed time derivative is detected.
    CHECK(euler_residual(eulerian(mid), u_t * 1.01, cfg.order()).max_abs() > 1e-3);
}

TEST_CASE("fourth-order time accuracy by Richardson") {
    const Field v0 = Profile::parse("gauss-bump(0.5, 0.08, 0.1)").sample(64);
    double errs[2];
    int i = 0;
    const GeodesicState fine = flow(v0, 0.5, small(1, 64, 1.25e-3));
    for (double dt : {1e-2, 5e-3}) errs[i++] = state_distance(flow(v0, 0.5, small(1, 64, dt)), fine);
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order > 3.7);
    CHECK(order < 4.4);
}

TEST_CASE("time reversal returns to the identity") {
    const SolverConfig cfg = small();
    const Field v0 = sine(64, 0.05) + sine(64, 0.02, 3);
    GeodesicState s = flow(v0, 0.8, cfg);
    s.v = -s.v;
    const GeodesicState back = flow_from(s, 0.8, cfg);
    CHECK(lift_distance(back.phi, Diffeo::identity(64)) < 1e-12);
    CHECK(max_abs_diff(back.v.values(), (-v0).values()) < 1e-12);
    // Negative time is the same as reversing the data.
    const GeodesicState neg = flow(v0, -0.3, cfg);
    const GeodesicState rev = flow(-v0, 0.3, cfg);
    CHECK(lift_distance(neg.phi, rev.phi) < 1e-14);
}

TEST_CASE("homogeneity phi(s; c v0) = phi(c s; v0)") {
    const Field v0 = sine(64, 0.05);
    const GeodesicState a = flow(v0 * 0.5, 1.0, small(1, 64, 2e-3));
    const GeodesicState b = flow(v0, 0.5, small(1, 64, 1e-3));
    CHECK(lift_distance(a.phi, b.phi) < 1e-13);
    CHECK(max_abs_diff(a.v.values(), (b.v * 0.5).values()) < 1e-13);
}

TEST_CASE("translation equivariance") {
    const std::size_t n = 64;
    const Field v0 = Profile::parse("random-band(6, 0.04, 3)").sample(n);
    // Shift the data by 5 grid cells.
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = v0[(i + n - 5) % n];
    const GeodesicState a = flow(v0, 0.5, small());
    const GeodesicState b = flow(Field(shifted), 0.5, small());
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(b.v[i] - a.v[(i + n - 5) % n]));
    CHECK(err < 1e-14);
}

TEST_CASE("wave breaking raises BlowUp") {
    const SolverConfig cfg = small(1, 64, 2e-3);
    try {
        flow(sine(64, 0.5), 1.0, cfg);
        FAIL("expected BlowUp");
    } catch (const BlowUp& e) {
        CHECK(e.time() > 0.4);
        CHECK(e.time() < 0.6);
    }
}

TEST_CASE("k = 0: Lagrangian Burgers against characteristics") {
    SolverConfig cfg = small(0, 128, 1e-3);
    const Field v0 = sine(128, 0.05) + sine(128, 0.02, 2);
    const Field lag = burgers_lagrangian(v0, 0.2, cfg);
    const Field chr = burgers_oracle(v0, 0.2, cfg);
    CHECK(max_abs_diff(lag.values(), chr.values()) < 1e-10);
    CHECK(max_abs_diff(burgers_oracle(v0, 0.0, cfg).values(), v0.values()) == 0.0);
    // Shock at t* = 1 / (3 max(-v0')) for a single sine: 1 / (0.3 pi) ~ 1.06.
    CHECK_NOTHROW(burgers_oracle(sine(128, 0.05), 1.0, cfg));
    CHECK_THROWS_AS(burgers_oracle(sine(128, 0.05), 1.1, cfg), ShockFormed);
}

TEST_CASE("state distance on nested grids") {
    const Profile p = Profile::parse("sine(1, 0.05)");
    const GeodesicState a = GeodesicState::initial(p.sample(32));
    const GeodesicState b = GeodesicState::initial(p.sample(128));
    CHECK(state_distance(a, b) < 1e-16);
    CHECK_THROWS(state_distance(a, GeodesicState::initial(p.sample(48))));
}
