#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/output.hpp"
#include "fraxonium/drive_lab.hpp"
#include "fraxonium/errors.hpp"
#include "fraxonium/format.hpp"
#include "fraxonium/fraxon_tb.hpp"
#include "fraxonium/harmonic_synth.hpp"
#include "fraxonium/potential_forge.hpp"
#include "fraxonium/spectral_engine.hpp"

namespace fraxonium::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutputOpts {
  std::string out = "-";
  std::string format = "csv";

  void add(CLI::App* app) {
    app->add_option("--out", out, "Output path, '-' for stdout")->capture_default_str();
    app->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
  Format kind() const { return format == "json" ? Format::Json : Format::Csv; }
};

struct CircuitOpts {
  std::string preset = "qutrit";
  double e_c = 0.0;
  double e_l = 0.0;
  int n_fock = 100;
  double e_j0 = 0.0;
  double e_j_tilde = 0.0;
  double e_k_tilde = 1.0;
  std::vector<std::string> harmonics;
  CLI::Option* e_c_opt = nullptr;
  CLI::Option* e_l_opt = nullptr;
  CLI::Option* e_j0_opt = nullptr;

  void add(CLI::App* app, int default_fock = 100) {
    n_fock = default_fock;
    app->add_option("--preset", preset,
                    "qutrit, qutrit-asym, d4, d5-paper, d5-solver, fluxonium or custom")
        ->capture_default_str();
    e_c_opt = app->add_option("--ec", e_c, "E_C / E_J (preset default if omitted)");
    e_l_opt = app->add_option("--el", e_l, "E_L / E_J (preset default if omitted)");
    app->add_option("--nfock", n_fock, "Fock-space truncation")->capture_default_str();
    e_j0_opt = app->add_option("--ej0", e_j0, "qutrit-asym: cos(phi) amplitude");
    app->add_option("--ej-tilde", e_j_tilde, "qutrit-asym: sin(phi) amplitude")
        ->capture_default_str();
    app->add_option("--ek-tilde", e_k_tilde, "qutrit-asym: cos(2 phi) amplitude")
        ->capture_default_str();
    app->add_option("--harmonic", harmonics, "custom preset term p:A[:theta], repeatable");
  }

  spectral::CircuitSpec resolve(double phi_x, Report& r) const {
    spectral::CircuitSpec spec;
    if (preset == "custom") {
      if (!e_c_opt->count() || !e_l_opt->count()) {
        throw ConfigError("custom preset needs --ec and --el");
      }
      spec.e_c = e_c;
      spec.e_l = e_l;
      spec.n_fock = n_fock;
      spec.phi_x = phi_x;
      for (const auto& h : harmonics) spec.harmonics.push_back(parse_harmonic(h));
      spec.validate();
    } else {
      if (!harmonics.empty()) throw ConfigError("--harmonic is only valid with --preset custom");
      spectral::PresetParams p;
      if (e_c_opt->count()) p.e_c = e_c;
      if (e_l_opt->count()) p.e_l = e_l;
      if (e_j0_opt->count()) p.e_j0 = e_j0;
      p.e_j_tilde = e_j_tilde;
      p.e_k_tilde = e_k_tilde;
      p.n_fock = n_fock;
      p.phi_x = phi_x;
      spec = spectral::make_preset(preset, p);
    }
    r.set("preset", preset);
    r.set("e_c", number(spec.e_c));
    r.set("e_l", number(spec.e_l));
    r.set("n_fock", spec.n_fock);
    Json terms = Json::array();
    for (const auto& h : spec.harmonics) {
      terms.push_back(std::to_string(h.order) + ":" + format_double(h.amplitude) + ":" +
                      format_double(h.phase_offset));
    }
    r.set("harmonics", terms);
    return spec;
  }

  static spectral::HarmonicTerm parse_harmonic(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
      throw ConfigError("harmonic '" + text + "' is not of the form p:A[:theta]");
    }
    try {
      spectral::HarmonicTerm h;
      std::size_t used = 0;
      h.order = std::stoi(parts[0], &used);
      if (used != parts[0].size()) throw std::invalid_argument(text);
      h.amplitude = std::stod(parts[1], &used);
      if (used != parts[1].size()) throw std::invalid_argument(text);
      if (parts.size() == 3) {
        h.phase_offset = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(text);
      }
      return h;
    } catch (const std::logic_error&) {
      throw ConfigError("harmonic '" + text + "' is not of the form p:A[:theta]");
    }
  }
};

struct FluxGrid {
  double min = -kPi / 2.0;
  double max = kPi / 2.0;
  int points = 201;

  void add(CLI::App* app, int default_points) {
    points = default_points;
    app->add_option("--phix-min", min, "First flux point")->capture_default_str();
    app->add_option("--phix-max", max, "Last flux point")->capture_default_str();
    app->add_option("--points", points, "Number of flux points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  std::vector<double> values(Report& r) const {
    r.set("phix_min", number(min));
    r.set("phix_max", number(max));
    r.set("points", points);
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
      g[i] = points == 1 ? min : min + (max - min) * i / (points - 1);
    }
    return g;
  }
};

std::vector<std::string> level_columns(const std::string& prefix, int k) {
  std::vector<std::string> c;
  for (int i = 0; i < k; ++i) c.push_back(prefix + std::to_string(i));
  return c;
}

// --- engineer -------------------------------------------------------------

struct EngineerCmd {
  int d = 3;
  double eta = 0.04;
  int order = 0;
  OutputOpts out;

  void add(CLI::App* app) {
    app->add_option("--d", d, "Number of degenerate minima")->capture_default_str();
    app->add_option("--eta", eta, "E_L / E_J")->capture_default_str();
    app->add_option("--order", order, "Order in eta kept in a_n (0 or 1)")->capture_default_str();
    out.add(app);
  }

  Report run() const {
    if (d < 3) {
      throw ConfigError(
          "d >= 3 required for engineered coefficients (use the fluxonium preset for d = 2)");
    }
    const forge::QuditPotentialSpec spec{d, eta, order};
    spec.validate();
    const auto pot = forge::solve_coefficients(spec);

    Report r;
    r.command = "engineer";
    r.set("d", d);
    r.set("eta", number(eta));
    r.set("order", order);
    r.columns = {"quantity", "index", "value"};
    for (const auto& c : pot.coefficients) r.rows.push_back({"a", c.n, number(c.a)});
    for (const auto& c : pot.zeroth_order) r.rows.push_back({"a0", c.n, number(c.a)});
    for (const auto& m : pot.minima) r.rows.push_back({"phi", m.l, number(m.phi)});

    const auto numeric = forge::lowest_minima(pot, 0.0, d, forge::default_window(spec));
    const auto [lo, hi] = forge::label_range(spec);
    double u_min = INFINITY, u_max = -INFINITY;
    for (int i = 0; i < static_cast<int>(numeric.size()); ++i) {
      r.rows.push_back({"phi_numeric", lo + i, number(numeric[i].phi)});
      r.rows.push_back({"energy_numeric", lo + i, number(numeric[i].value)});
      u_min = std::min(u_min, numeric[i].value);
      u_max = std::max(u_max, numeric[i].value);
    }
    (void)hi;
    r.result("degeneracy_residual", number(u_max - u_min));
    return r;
  }
};

// --- kite -----------------------------------------------------------------

struct KiteCmd {
  double ej1 = 0.1, ej2 = 0.1, el1 = 1.0, el2 = 1.0;
  int grid = 1024;
  double tol = 0.1;
  OutputOpts out;

  void add(CLI::App* app) {
    app->add_option("--ej1", ej1, "Branch 1 junction energy")->capture_default_str();
    app->add_option("--ej2", ej2, "Branch 2 junction energy")->capture_default_str();
    app->add_option("--el1", el1, "Branch 1 inductive energy")->capture_default_str();
    app->add_option("--el2", el2, "Branch 2 inductive energy")->capture_default_str();
    app->add_option("--grid", grid, "Phase grid size (multiple of 4)")->capture_default_str();
    app->add_option("--tol", tol, "Allowed relative residual outside the two-term fit")
        ->capture_default_str();
    out.add(app);
  }

  Report run() const {
    const auto fit = synth::kite_potential(ej1, ej2, el1, el2, grid, tol);
    Report r;
    r.command = "kite";
    r.set("ej1", number(ej1));
    r.set("ej2", number(ej2));
    r.set("el1", number(el1));
    r.set("el2", number(el2));
    r.set("grid", grid);
    r.set("tol", number(tol));
    r.result("e_j_tilde", number(fit.e_j_tilde));
    r.result("e_k_tilde", number(fit.e_k_tilde));
    r.result("sine_residual", number(fit.sine_residual));
    r.result("parity_residual", number(fit.parity_residual));
    r.result("fit_residual", number(fit.fit_residual));
    r.columns = {"n", "epsilon_n", "sin_n"};
    for (const auto& t : fit.table) r.rows.push_back({t.n, number(t.cos_amp), number(t.sin_amp)});
    return r;
  }
};

// --- spectrum -------------------------------------------------------------

struct SpectrumCmd {
  CircuitOpts circuit;
  FluxGrid grid;
  int levels = 8;
  bool parity = false;
  OutputOpts out;

  void add(CLI::App* app) {
    circuit.add(app);
    grid.add(app, 201);
    app->add_option("--levels", levels, "Number of levels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_flag("--parity", parity, "Append parity expectation columns");
    out.add(app);
  }

  Report run() const {
    Report r;
    r.command = "spectrum";
    const auto spec = circuit.resolve(0.0, r);
    const auto g = grid.values(r);
    r.set("levels", levels);
    r.set("parity", parity);
    const auto sweep = spectral::sweep_flux(spec, g, levels, parity);

    r.columns = {"phix"};
    for (const auto& c : level_columns("E", levels)) r.columns.push_back(c);
    if (parity) {
      for (const auto& c : level_columns("P", levels)) r.columns.push_back(c);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::vector<Json> row{number(g[i])};
      for (double e : sweep.energies[i]) row.push_back(number(e));
      if (parity) {
        for (double p : (*sweep.parities)[i]) row.push_back(number(p));
      }
      r.rows.push_back(std::move(row));
    }
    return r;
  }
};

// --- dipoles --------------------------------------------------------------

struct DipolesCmd {
  CircuitOpts circuit;
  double phix = 0.0;
  int levels = 5;
  OutputOpts out;

  void add(CLI::App* app) {
    circuit.add(app);
    app->add_option("--phix", phix, "External flux")->capture_default_str();
    app->add_option("--levels", levels, "Number of levels")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    out.add(app);
  }

  Report run() const {
    Report r;
    r.command = "dipoles";
    const auto spec = circuit.resolve(phix, r);
    r.set("phix", number(phix));
    r.set("levels", levels);
    const auto chart = spectral::dipole_chart(spec, levels);
    r.result("omega_p", number(chart.omega_p));
    Json energies = Json::array(), parities = Json::array();
    for (int i = 0; i < levels; ++i) {
      energies.push_back(number(chart.energies(i)));
      parities.push_back(number(chart.parity(i)));
    }
    r.result("energies", energies);
    r.result("parities", parities);
    r.columns = {"alpha", "beta", "abs_phi", "abs_n", "omega_over_wp"};
    for (int a = 0; a < levels; ++a) {
      for (int b = a + 1; b < levels; ++b) {
        r.rows.push_back({a, b, number(std::abs(chart.phi(a, b))),
                          number(std::abs(chart.charge(a, b))), number(chart.omega(a, b))});
      }
    }
    return r;
  }
};

// --- tb-compare -----------------------------------------------------------

struct TbCompareCmd {
  std::string preset = "qutrit";
  double e_c = 0.0;
  double e_l = 0.0;
  int order = 0;
  int n_fock = 120;
  std::string mode = "expectation";
  FluxGrid grid;
  CLI::Option* e_c_opt = nullptr;
  CLI::Option* e_l_opt = nullptr;
  OutputOpts out;

  void add(CLI::App* app) {
    app->add_option("--preset", preset, "qutrit, d4 or d5-solver")->capture_default_str();
    e_c_opt = app->add_option("--ec", e_c, "E_C / E_J (preset default if omitted)");
    e_l_opt = app->add_option("--el", e_l, "E_L / E_J (preset default if omitted)");
    app->add_option("--order", order, "Order in eta kept in a_n (0 or 1)")->capture_default_str();
    app->add_option("--nfock", n_fock, "Fock-space truncation")->capture_default_str();
    app->add_option("--mode", mode, "On-site energy: simple or expectation")
        ->check(CLI::IsMember({"simple", "expectation"}))
        ->capture_default_str();
    grid.add(app, 101);
    out.add(app);
  }

  Report run() const {
    int d = 0;
    if (preset == "qutrit") d = 3;
    else if (preset == "d4") d = 4;
    else if (preset == "d5-solver") d = 5;
    else throw ConfigError("tb-compare needs an engineered preset: qutrit, d4 or d5-solver");

    const auto [ec0, el0] = spectral::preset_defaults(preset);
    const double ec = e_c_opt->count() ? e_c : ec0;
    const double el = e_l_opt->count() ? e_l : el0;
    const forge::QuditPotentialSpec fspec{d, el, order};
    fspec.validate();
    const tb::TbParams params{forge::solve_coefficients(fspec), ec};
    const auto m = mode == "simple" ? tb::OnsiteMode::Simple : tb::OnsiteMode::Expectation;

    Report r;
    r.command = "tb-compare";
    r.set("preset", preset);
    r.set("d", d);
    r.set("e_c", number(ec));
    r.set("e_l", number(el));
    r.set("order", order);
    r.set("n_fock", n_fock);
    r.set("mode", mode);
    const auto g = grid.values(r);

    const auto hop = tb::hopping(params);
    const auto cmp = tb::compare_with_exact(params, g, n_fock, m);
    r.result("t", number(hop.t));
    r.result("inverse_period", number(hop.inverse_period));
    r.result("e_j_bar", number(hop.e_j_bar));
    r.result("e_l_bar", number(hop.e_l_bar));
    r.result("e_c_bar", number(hop.e_c_bar));
    r.result("ell", number(hop.ell));
    r.result("overlap", number(hop.overlap));
    r.result("t_min", number(hop.t_min));
    r.result("t_max", number(hop.t_max));
    r.result("max_deviation", number(cmp.max_deviation));
    r.result("mean_deviation", number(cmp.mean_deviation));
    r.result("t_exact", number(cmp.t_exact));
    r.result("splitting_ratio", number(cmp.splitting_ratio));
    r.result("warnings", hop.warnings);

    r.columns = {"phix"};
    for (const auto& c : level_columns("tb_E", d)) r.columns.push_back(c);
    for (const auto& c : level_columns("exact_E", d)) r.columns.push_back(c);
    for (std::size_t i = 0; i < cmp.phix.size(); ++i) {
      std::vector<Json> row{number(cmp.phix[i])};
      for (double e : cmp.tb[i]) row.push_back(number(e));
      for (double e : cmp.exact[i]) row.push_back(number(e));
      r.rows.push_back(std::move(row));
    }
    return r;
  }
};

// --- stirap ---------------------------------------------------------------

struct StirapCmd {
  double duration = 500.0;
  std::string cycle = "default";
  double peak = drive::kDefaultCyclePeak;
  double dt = 0.0;
  int initial = 0;
  int trace_points = 1001;
  double kappa = 1.0;
  OutputOpts out;

  void add(CLI::App* app) {
    app->add_option("--T", duration, "Cycle duration in units of 1/Omega_1")
        ->capture_default_str();
    app->add_option("--cycle", cycle, "default or retrace")
        ->check(CLI::IsMember({"default", "retrace"}))
        ->capture_default_str();
    app->add_option("--peak", peak, "Peak Omega_0/Omega_1 and Omega_2/Omega_1")
        ->capture_default_str();
    app->add_option("--dt", dt, "Integration step, 0 for T/1e5")->capture_default_str();
    app->add_option("--initial", initial, "Initial level 0, 1 or 2")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    app->add_option("--trace-points", trace_points, "Samples kept in the trace")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    app->add_option("--kappa", kappa, "Scale amplitudes by kappa and T by 1/kappa")
        ->capture_default_str();
    out.add(app);
  }

  Report run() const {
    auto schedule = cycle == "retrace" ? drive::retrace_cycle(duration, peak)
                                       : drive::default_cycle(duration, peak);
    schedule.sample_dt = dt;
    schedule = drive::rescaled(schedule, kappa);

    drive::State psi0 = drive::State::Zero();
    psi0(initial) = 1.0;
    drive::PropagateOptions opts;
    opts.trace_points = trace_points;
    const auto trace = drive::propagate(schedule, psi0, opts);
    const auto hol = drive::holonomy_oracle(schedule);
    const auto predicted = drive::holonomy_prediction(hol, psi0);

    Report r;
    r.command = "stirap";
    r.set("T", number(duration));
    r.set("cycle", cycle);
    r.set("peak", number(peak));
    r.set("dt", number(trace.step));
    r.set("initial", initial);
    r.set("trace_points", trace_points);
    r.set("kappa", number(kappa));
    const auto& last = trace.populations.back();
    r.result("P0", number(last[0]));
    r.result("P1", number(last[1]));
    r.result("P2", number(last[2]));
    r.result("Pu", number(last[3]));
    r.result("leakage", number(trace.leakage));
    r.result("max_norm_drift", number(trace.max_norm_drift));
    r.result("fidelity_vs_holonomy", number(drive::fidelity(predicted, trace.final_state)));
    r.result("rotation_angle", number(hol.rotation_angle));
    r.result("adiabaticity", number(hol.min_adiabaticity));
    r.result("warnings", hol.warnings);

    r.columns = {"t", "P0", "P1", "P2", "Pu"};
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      const auto& p = trace.populations[i];
      r.rows.push_back({number(trace.times[i]), number(p[0]), number(p[1]), number(p[2]),
                        number(p[3])});
    }
    return r;
  }
};

// --- check ----------------------------------------------------------------

struct CheckCmd {
  CircuitOpts circuit;
  double phix = 0.0;
  int levels = 8;
  int n1 = 100;
  int n2 = 140;
  double tol = 1e-8;
  OutputOpts out;

  void add(CLI::App* app) {
    circuit.add(app);
    app->add_option("--phix", phix, "External flux")->capture_default_str();
    app->add_option("--levels", levels, "Number of levels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--n1", n1, "Smaller truncation")->capture_default_str();
    app->add_option("--n2", n2, "Larger truncation")->capture_default_str();
    app->add_option("--tol", tol, "Allowed level shift")->capture_default_str();
    out.add(app);
  }

  Report run(bool& converged) const {
    Report r;
    r.command = "check";
    auto spec = circuit.resolve(phix, r);
    r.set("phix", number(phix));
    r.set("levels", levels);
    r.set("n1", n1);
    r.set("n2", n2);
    r.set("tol", number(tol));
    const auto rep = spectral::convergence_check(spec, levels, n1, n2, tol);
    converged = rep.converged;
    r.result("max_shift", number(rep.max_shift));
    r.result("converged", rep.converged);

    spec.n_fock = n1;
    const auto lo = spectral::diagonalize(spectral::build_hamiltonian(spec), levels);
    spec.n_fock = n2;
    const auto hi = spectral::diagonalize(spectral::build_hamiltonian(spec), levels);
    r.columns = {"level", "E_n1", "E_n2", "shift"};
    for (int i = 0; i < levels; ++i) {
      r.rows.push_back({i, number(lo.energies(i)), number(hi.energies(i)),
                        number(std::abs(hi.energies(i) - lo.energies(i)))});
    }
    return r;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Fraxonium qudit toolkit: potentials, spectra, tight binding and tripod drives"};
  app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  EngineerCmd engineer;
  KiteCmd kite;
  SpectrumCmd spectrum;
  DipolesCmd dipoles;
  TbCompareCmd tb_compare;
  StirapCmd stirap;
  CheckCmd check;
  auto* s_engineer = app.add_subcommand("engineer", "Fourier coefficients and minima of a d-fold potential");
  auto* s_kite = app.add_subcommand("kite", "Two-branch kite energy-phase relation");
  auto* s_spectrum = app.add_subcommand("spectrum", "Energy levels versus external flux");
  auto* s_dipoles = app.add_subcommand("dipoles", "Phase and charge matrix elements");
  auto* s_tb = app.add_subcommand("tb-compare", "Tight-binding model versus exact levels");
  auto* s_stirap = app.add_subcommand("stirap", "Tripod STIRAP cycle and holonomy");
  auto* s_check = app.add_subcommand("check", "Fock truncation convergence");
  engineer.add(s_engineer);
  kite.add(s_kite);
  spectrum.add(s_spectrum);
  dipoles.add(s_dipoles);
  tb_compare.add(s_tb);
  stirap.add(s_stirap);
  check.add(s_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitConfig;
  }

  try {
    if (*s_engineer) emit(engineer.run(), engineer.out.kind(), engineer.out.out);
    if (*s_kite) emit(kite.run(), kite.out.kind(), kite.out.out);
    if (*s_spectrum) emit(spectrum.run(), spectrum.out.kind(), spectrum.out.out);
    if (*s_dipoles) emit(dipoles.run(), dipoles.out.kind(), dipoles.out.out);
    if (*s_tb) emit(tb_compare.run(), tb_compare.out.kind(), tb_compare.out.out);
    if (*s_stirap) emit(stirap.run(), stirap.out.kind(), stirap.out.out);
    if (*s_check) {
      bool converged = false;
      emit(check.run(converged), check.out.kind(), check.out.out);
      if (!converged) {
        err << "error: levels not converged between n1 and n2\n";
        return kExitNumerical;
      }
    }
  } catch (const synth::KiteFitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace fraxonium::cli
