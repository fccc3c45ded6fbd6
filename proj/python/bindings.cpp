#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <sstream>

#include "expdiff/errors.hpp"
#include "expdiff/experiment.hpp"
#include "expdiff/expmap.hpp"
#include "expdiff/geodesic.hpp"
#include "expdiff/operators.hpp"

namespace py = pybind11;
using namespace expdiff;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return Field(std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(std::span<const double> v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array to_array(const Field& f) { return to_array(f.values()); }

Diffeo to_diffeo(const Array& lift, double floor) {
    if (lift.ndim() != 1) throw std::invalid_argument("expected a 1-d array of lift values");
    return Diffeo::from_lift(std::span<const double>(lift.data(), static_cast<std::size_t>(lift.size())), floor);
}

py::dict state_dict(const GeodesicState& s) {
    py::dict d;
    d["t"] = s.t;
    d["phi"] = to_array(s.phi.lift_values());
    d["v"] = to_array(s.v);
    d["log_slope"] = to_array(s.log_slope);
    return d;
}

}  // namespace

PYBIND11_MODULE(_expdiff, m) {
    m.doc() = "Geodesic flows of right-invariant H^k metrics on circle diffeomorphisms";

    // Translators run newest first, so the base class goes in first.
    auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<InvalidDiffeo>(m, "InvalidDiffeo", base.ptr());
    py::register_exception<BlowUp>(m, "BlowUp", base.ptr());
    py::register_exception<ShockFormed>(m, "ShockFormed", base.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("grid_size", &SolverConfig::grid_size)
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("k", &SolverConfig::k)
        .def_readwrite("dealias", &SolverConfig::dealias)
        .def_readwrite("slope_floor", &SolverConfig::slope_floor)
        .def_readwrite("inversion_tol", &SolverConfig::inversion_tol)
        .def_readwrite("inversion_max_iter", &SolverConfig::inversion_max_iter)
        .def_readwrite("monitor_tol", &SolverConfig::monitor_tol)
        .def_readwrite("t_max", &SolverConfig::t_max)
        .def("validate", &SolverConfig::validate);

    py::class_<ShootingConfig>(m, "ShootingConfig")
        .def(py::init<>())
        .def_readwrite("solver", &ShootingConfig::solver)
        .def_readwrite("modes", &ShootingConfig::modes)
        .def_readwrite("newton_tol", &ShootingConfig::newton_tol)
        .def_readwrite("max_newton", &ShootingConfig::max_newton)
        .def_readwrite("fd_step", &ShootingConfig::fd_step)
        .def_readwrite("max_halvings", &ShootingConfig::max_halvings)
        .def_readwrite("threads", &ShootingConfig::threads)
        .def("validate", &ShootingConfig::validate);

    m.def("grid", [](std::size_t n) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = grid_point(i, n);
        return to_array(x);
    });

    m.def("a_k_apply", [](const Array& u, int k) { return to_array(a_k_apply(to_field(u), MetricOrder(k))); },
          py::arg("u"), py::arg("k"));
    m.def("a_k_inverse", [](const Array& u, int k) { return to_array(a_k_inverse(to_field(u), MetricOrder(k))); },
          py::arg("u"), py::arg("k"));
    m.def("b_k_apply",
          [](const Array& u, int k, bool dealias) { return to_array(b_k_apply(to_field(u), MetricOrder(k), dealias)); },
          py::arg("u"), py::arg("k"), py::arg("dealias") = true);
    m.def("energy", [](const Array& u, int k) { return energy(to_field(u), MetricOrder(k)); }, py::arg("u"),
          py::arg("k"));

    m.def("compose",
          [](const Array& u, const Array& phi) { return to_array(compose(to_field(u), to_diffeo(phi, 0.0))); },
          py::arg("u"), py::arg("phi"), "u o phi on the grid; phi given by its lift values.");
    m.def("invert",
          [](const Array& phi, double tol) {
              return to_array(invert(to_diffeo(phi, kDefaultSlopeFloor), {tol, kDefaultInversionMaxIter}).lift_values());
          },
          py::arg("phi"), py::arg("tol") = kDefaultInversionTol);
    m.def("momentum_density",
          [](const Array& phi, const Array& v, int k) {
              return to_array(momentum_density(to_diffeo(phi, 0.0), to_field(v), MetricOrder(k)));
          },
          py::arg("phi"), py::arg("v"), py::arg("k"));

    m.def("flow", [](const Array& v0, double T, const SolverConfig& cfg) { return state_dict(flow(to_field(v0), T, cfg)); },
          py::arg("v0"), py::arg("T"), py::arg("cfg") = SolverConfig{},
          "Geodesic state at time T: dict with t, phi (lift values), v, log_slope.");
    m.def("monitors",
          [](const Array& v0, double T, const SolverConfig& cfg, int stride) {
              const Field v = to_field(v0);
              std::vector<MonitorSample> samples;
              long step = 0;
              integrate_with(v, T, cfg, [&](const GeodesicState& s) {
                  if (step++ % stride == 0) samples.push_back(monitor(s, v, cfg));
                  return true;
              });
              py::array_t<double> out({static_cast<py::ssize_t>(samples.size()), py::ssize_t{5}});
              auto r = out.mutable_unchecked<2>();
              for (std::size_t i = 0; i < samples.size(); ++i) {
                  const auto& s = samples[i];
                  const double row[5] = {s.t, s.energy, s.momentum_err, s.slope_err, s.mean_err};
                  for (int j = 0; j < 5; ++j) r(static_cast<py::ssize_t>(i), j) = row[j];
              }
              return out;
          },
          py::arg("v0"), py::arg("T"), py::arg("cfg") = SolverConfig{}, py::arg("stride") = 1,
          "Rows of (t, energy, momentum_err, slope_err, mean_err).");

    m.def("exp_map", [](const Array& v0, const SolverConfig& cfg) { return to_array(exp_map(to_field(v0), cfg).lift_values()); },
          py::arg("v0"), py::arg("cfg") = SolverConfig{});
    m.def("log_map",
          [](const Array& psi, const ShootingConfig& cfg) {
              const LogResult r = log_map(to_diffeo(psi, cfg.solver.slope_floor), cfg);
              py::dict d;
              d["v"] = to_array(r.v);
              d["residual"] = r.residual;
              d["condition_number"] = r.condition_number();
              d["singular_values"] = r.singular_values;
              py::list trace;
              for (const auto& t : r.trace) trace.append(py::make_tuple(t.iter, t.residual, t.step_factor));
              d["trace"] = trace;
              return d;
          },
          py::arg("psi"), py::arg("cfg") = ShootingConfig{});

    m.def("burgers_oracle",
          [](const Array& v0, double t, const SolverConfig& cfg) { return to_array(burgers_oracle(to_field(v0), t, cfg)); },
          py::arg("v0"), py::arg("t"), py::arg("cfg") = SolverConfig{});
    m.def("burgers_lagrangian",
          [](const Array& v0, double t, const SolverConfig& cfg) {
              return to_array(burgers_lagrangian(to_field(v0), t, cfg));
          },
          py::arg("v0"), py::arg("t"), py::arg("cfg") = SolverConfig{});

    m.def("run_config",
          [](const std::string& text, const std::string& command, const std::string& out_dir, bool quiet) {
              ExperimentSpec spec = parse_config(text, command.empty() ? std::nullopt
                                                                       : std::optional<Command>(parse_command(command)));
              if (!out_dir.empty()) spec.output_dir = out_dir;
              std::ostringstream log;
              const int rc = run(spec, log, quiet);
              return py::make_tuple(rc, log.str());
          },
          py::arg("text"), py::arg("command") = "", py::arg("out_dir") = "", py::arg("quiet") = true,
          "Runs a configured experiment; returns (exit_code, log).");
}
