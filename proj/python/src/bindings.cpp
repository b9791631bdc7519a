#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "fraxonium/drive_lab.hpp"
#include "fraxonium/errors.hpp"
#include "fraxonium/fraxon_tb.hpp"
#include "fraxonium/harmonic_synth.hpp"
#include "fraxonium/potential_forge.hpp"
#include "fraxonium/spectral_engine.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace fraxonium;

namespace {

py::list coefficient_list(const std::vector<forge::Coefficient>& cs) {
  py::list out;
  for (const auto& c : cs) out.append(py::make_tuple(c.n, c.a));
  return out;
}

tb::OnsiteMode parse_mode(const std::string& mode) {
  if (mode == "simple") return tb::OnsiteMode::Simple;
  if (mode == "expectation") return tb::OnsiteMode::Expectation;
  throw std::invalid_argument("mode must be 'simple' or 'expectation', got '" + mode + "'");
}

tb::TbParams tb_params(int d, double eta, double e_c, int order) {
  return {forge::solve_coefficients({d, eta, order}), e_c};
}

py::dict hopping_dict(const tb::HoppingEstimate& h) {
  return py::dict("t"_a = h.t, "inverse_period"_a = h.inverse_period, "e_l_bar"_a = h.e_l_bar,
                  "e_j_bar"_a = h.e_j_bar, "e_c_bar"_a = h.e_c_bar, "omega_p"_a = h.omega_p,
                  "ell"_a = h.ell, "warnings"_a = h.warnings);
}

drive::State basis_state(int index) {
  if (index < 0 || index > 3) throw std::invalid_argument("initial level must be 0..3");
  drive::State psi = drive::State::Zero();
  psi(index) = 1.0;
  return psi;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fraxonium qudit design toolkit";

  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<synth::KiteFitError>(m, "KiteFitError", numerical.ptr());

  // potential engineering
  py::class_<forge::EngineeredPotential>(m, "EngineeredPotential")
      .def_property_readonly("d", [](const forge::EngineeredPotential& p) { return p.spec.d; })
      .def_property_readonly("eta", &forge::EngineeredPotential::eta)
      .def_property_readonly("correction_order",
                             [](const forge::EngineeredPotential& p) { return p.spec.correction_order; })
      .def_property_readonly("leading_order", &forge::EngineeredPotential::leading_order)
      .def_property_readonly("leading_sign", &forge::EngineeredPotential::leading_sign)
      .def_property_readonly("coefficients",
                             [](const forge::EngineeredPotential& p) { return coefficient_list(p.coefficients); })
      .def_property_readonly("zeroth_order",
                             [](const forge::EngineeredPotential& p) { return coefficient_list(p.zeroth_order); })
      .def_property_readonly("minima", [](const forge::EngineeredPotential& p) {
        py::list out;
        for (const auto& mn : p.minima) out.append(py::make_tuple(mn.l, mn.phi));
        return out;
      });

  m.def(
      "solve_coefficients",
      [](int d, double eta, int order) { return forge::solve_coefficients({d, eta, order}); },
      "d"_a, "eta"_a, "order"_a = 0);
  m.def(
      "evaluate_potential",
      [](const forge::EngineeredPotential& p, const Eigen::VectorXd& phi, double phi_x) {
        Eigen::VectorXd out(phi.size());
        for (Eigen::Index i = 0; i < phi.size(); ++i) out(i) = forge::evaluate_potential(p, phi(i), phi_x);
        return out;
      },
      "potential"_a, "phi"_a, "phi_x"_a = 0.0);
  m.def(
      "lowest_minima",
      [](const forge::EngineeredPotential& p, double phi_x) {
        py::list out;
        for (const auto& mn : forge::lowest_minima(p, phi_x, p.spec.d, forge::default_window(p.spec))) {
          out.append(py::make_tuple(mn.phi, mn.value));
        }
        return out;
      },
      "potential"_a, "phi_x"_a = 0.0);

  // modular elements
  py::class_<synth::EffectiveEnergyPhase>(m, "EffectiveEnergyPhase")
      .def_property_readonly("period_divisor", &synth::EffectiveEnergyPhase::period_divisor)
      .def_property_readonly("max_order", &synth::EffectiveEnergyPhase::max_order)
      .def_property_readonly("samples", &synth::EffectiveEnergyPhase::samples)
      .def("cos_coeff", &synth::EffectiveEnergyPhase::cos_coeff, "n"_a)
      .def("sin_coeff", &synth::EffectiveEnergyPhase::sin_coeff, "n"_a)
      .def("evaluate", &synth::EffectiveEnergyPhase::evaluate, "phi"_a);

  m.def(
      "effective_relation",
      [](double tau, double e_l, int grid_size) { return synth::effective_relation({tau, e_l}, grid_size); },
      "tau"_a, "e_l"_a = 1.0, "grid_size"_a = 1024);
  m.def("parallel_compose", &synth::parallel_compose, "relation"_a, "copies"_a);
  m.def("series_negate", &synth::series_negate, "relation"_a);
  m.def(
      "kite_potential",
      [](double e_j1, double e_j2, double e_l1, double e_l2, double tol) {
        const auto fit = synth::kite_potential(e_j1, e_j2, e_l1, e_l2, 1024, tol);
        return py::dict("e_j_tilde"_a = fit.e_j_tilde, "e_k_tilde"_a = fit.e_k_tilde,
                        "sine_residual"_a = fit.sine_residual, "fit_residual"_a = fit.fit_residual);
      },
      "e_j1"_a, "e_j2"_a, "e_l1"_a = 1.0, "e_l2"_a = 1.0, "tol"_a = 0.1);

  // exact spectra
  py::class_<spectral::HarmonicTerm>(m, "HarmonicTerm")
      .def(py::init([](int order, double amplitude, double phase_offset) {
             return spectral::HarmonicTerm{order, amplitude, phase_offset};
           }),
           "order"_a, "amplitude"_a, "phase_offset"_a = 0.0)
      .def_readwrite("order", &spectral::HarmonicTerm::order)
      .def_readwrite("amplitude", &spectral::HarmonicTerm::amplitude)
      .def_readwrite("phase_offset", &spectral::HarmonicTerm::phase_offset);

  py::class_<spectral::CircuitSpec>(m, "CircuitSpec")
      .def(py::init([](double e_c, double e_l, std::vector<spectral::HarmonicTerm> harmonics, double phi_x,
                       int n_fock) {
             return spectral::CircuitSpec{e_c, e_l, std::move(harmonics), phi_x, n_fock};
           }),
           "e_c"_a, "e_l"_a, "harmonics"_a = std::vector<spectral::HarmonicTerm>{}, "phi_x"_a = 0.0,
           "n_fock"_a = 100)
      .def_readwrite("e_c", &spectral::CircuitSpec::e_c)
      .def_readwrite("e_l", &spectral::CircuitSpec::e_l)
      .def_readwrite("harmonics", &spectral::CircuitSpec::harmonics)
      .def_readwrite("phi_x", &spectral::CircuitSpec::phi_x)
      .def_readwrite("n_fock", &spectral::CircuitSpec::n_fock)
      .def_property_readonly("sigma", &spectral::CircuitSpec::sigma)
      .def_property_readonly("plasma_frequency", &spectral::CircuitSpec::plasma_frequency);

  m.def("preset_names", &spectral::preset_names);
  m.def(
      "make_preset",
      [](const std::string& name, std::optional<double> e_c, std::optional<double> e_l, int n_fock,
         double phi_x) {
        spectral::PresetParams params;
        params.e_c = e_c;
        params.e_l = e_l;
        params.n_fock = n_fock;
        params.phi_x = phi_x;
        return spectral::make_preset(name, params);
      },
      "name"_a, "e_c"_a = py::none(), "e_l"_a = py::none(), "n_fock"_a = 100, "phi_x"_a = 0.0);
  m.def("displacement_element", &spectral::displacement_element, "m"_a, "n"_a, "z"_a);
  m.def(
      "sweep_flux",
      [](const spectral::CircuitSpec& spec, const std::vector<double>& phix, int levels, bool parity) {
        auto s = spectral::sweep_flux(spec, phix, levels, parity);
        py::dict out("phix"_a = s.phix, "energies"_a = s.energies);
        if (s.parities) out["parities"] = *s.parities;
        return out;
      },
      "spec"_a, "phix"_a, "levels"_a = 6, "parity"_a = false);
  m.def(
      "dipole_chart",
      [](const spectral::CircuitSpec& spec, int levels) {
        const auto c = spectral::dipole_chart(spec, levels);
        return py::dict("energies"_a = c.energies, "phi"_a = c.phi, "charge"_a = c.charge,
                        "omega"_a = c.omega, "parity"_a = c.parity, "omega_p"_a = c.omega_p);
      },
      "spec"_a, "levels"_a = 6);
  m.def(
      "convergence_check",
      [](const spectral::CircuitSpec& spec, int levels, int n1, int n2, double tol) {
        const auto r = spectral::convergence_check(spec, levels, n1, n2, tol);
        return py::make_tuple(r.max_shift, r.converged);
      },
      "spec"_a, "levels"_a = 8, "n1"_a = 100, "n2"_a = 140, "tol"_a = 1e-8);

  // tight binding
  m.def("wkb_hopping", &tb::wkb_hopping, "e_j"_a, "e_c"_a);
  m.def(
      "hopping",
      [](int d, double eta, double e_c, int order) { return hopping_dict(tb::hopping(tb_params(d, eta, e_c, order))); },
      "d"_a, "eta"_a, "e_c"_a, "order"_a = 0);
  m.def(
      "tight_binding",
      [](int d, double eta, double e_c, double phi_x, int order, const std::string& mode) {
        const auto model = tb::build_model(tb_params(d, eta, e_c, order), phi_x, parse_mode(mode));
        return py::dict("labels"_a = model.labels, "eps"_a = model.eps, "matrix"_a = model.matrix(),
                        "eigenvalues"_a = model.eigenvalues(), "hopping"_a = hopping_dict(model.hop));
      },
      "d"_a, "eta"_a, "e_c"_a, "phi_x"_a = 0.0, "order"_a = 0, "mode"_a = "expectation");
  m.def(
      "compare_with_exact",
      [](int d, double eta, double e_c, const std::vector<double>& phix, int n_fock, int order,
         const std::string& mode) {
        const auto r = tb::compare_with_exact(tb_params(d, eta, e_c, order), phix, n_fock, parse_mode(mode));
        return py::dict("phix"_a = r.phix, "tb"_a = r.tb, "exact"_a = r.exact,
                        "max_deviation"_a = r.max_deviation, "mean_deviation"_a = r.mean_deviation,
                        "t_tb"_a = r.t_tb, "t_exact"_a = r.t_exact, "splitting_ratio"_a = r.splitting_ratio);
      },
      "d"_a, "eta"_a, "e_c"_a, "phix"_a, "n_fock"_a = 120, "order"_a = 0, "mode"_a = "expectation");

  // STIRAP
  py::class_<drive::PulseSchedule>(m, "PulseSchedule")
      .def_readonly("duration", &drive::PulseSchedule::duration)
      .def("couplings", [](const drive::PulseSchedule& s, double t) { return s.at(t).couplings; }, "t"_a)
      .def("rescaled", &drive::rescaled, "kappa"_a);

  m.def("default_cycle", &drive::default_cycle, "duration"_a = 500.0, "peak"_a = drive::kDefaultCyclePeak);
  m.def("retrace_cycle", &drive::retrace_cycle, "duration"_a = 500.0, "peak"_a = drive::kDefaultCyclePeak);
  m.def(
      "stirap",
      [](const drive::PulseSchedule& schedule, int initial, int trace_points) {
        drive::PropagateOptions opts;
        opts.trace_points = trace_points;
        const auto tr = drive::propagate(schedule, basis_state(initial), opts);
        return py::dict("times"_a = tr.times, "populations"_a = tr.populations,
                        "final_state"_a = tr.final_state, "leakage"_a = tr.leakage,
                        "max_norm_drift"_a = tr.max_norm_drift, "step"_a = tr.step);
      },
      "schedule"_a, "initial"_a = 0, "trace_points"_a = 1001);
  m.def(
      "holonomy",
      [](const drive::PulseSchedule& schedule, int initial, int samples) {
        const auto h = drive::holonomy_oracle(schedule, samples);
        return py::dict("unitary"_a = h.unitary, "rotation_angle"_a = h.rotation_angle,
                        "predicted_state"_a = drive::holonomy_prediction(h, basis_state(initial)),
                        "min_adiabaticity"_a = h.min_adiabaticity, "warnings"_a = h.warnings);
      },
      "schedule"_a, "initial"_a = 0, "samples"_a = 20000);
  m.def("fidelity", &drive::fidelity, "a"_a, "b"_a);
}
