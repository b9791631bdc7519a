#include "fraxonium/fraxon_tb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraxonium/errors.hpp"
#include "fraxonium/spectral_engine.hpp"

namespace fraxonium::tb {

namespace {

constexpr double kPi = std::numbers::pi;

void check_label(const TbParams& p, int l) {
  const auto [lo, hi] = forge::label_range(p.potential.spec);
  if (l < lo || l > hi) throw std::out_of_range("fraxon label outside the d-window");
}

double gaussian_width(double e_c, double e_l_bar) { return std::pow(8.0 * e_c / e_l_bar, 0.25); }

// Labels of two adjacent minima straddling the centre of the window.
std::pair<int, int> central_pair(const forge::QuditPotentialSpec& spec) {
  return spec.odd() ? std::pair{0, 1} : std::pair{-1, 0};
}

}  // namespace

double minimum_position(const TbParams& p, int l, double phi_x) {
  check_label(p, l);
  const auto& pot = p.potential;
  return forge::node_position(pot.spec, l) +
         pot.eta() * forge::minima_shift_first_order(pot, l, phi_x);
}

double effective_inductive_energy(const TbParams& p, int l, double phi_x) {
  const auto& pot = p.potential;
  const double phi = minimum_position(p, l, phi_x);
  const int L = pot.leading_order();
  double e = pot.eta() - pot.leading_sign() * L * L * std::cos(L * phi);
  for (const auto& c : pot.coefficients) e -= pot.eta() * c.a * c.n * c.n * std::cos(c.n * phi);
  return e;
}

double onsite_energy(const TbParams& p, int l, double phi_x, OnsiteMode mode) {
  const auto& pot = p.potential;
  const double el = pot.eta();

  if (mode == OnsiteMode::Simple) {
    // Parabola about phi_l; E_0 is taken at l = 0.
    const double phi_l = minimum_position(p, l, 0.0);
    const double phi_0 = minimum_position(p, 0, 0.0);
    const double e0 = 0.5 * std::sqrt(8.0 * p.e_c * effective_inductive_energy(p, 0, 0.0)) +
                      forge::evaluate_potential(pot, phi_0, 0.0);
    return 0.5 * el * (phi_l - phi_x) * (phi_l - phi_x) - 0.5 * el * phi_l * phi_l + e0;
  }

  // Expectation of the full potential in the Gaussian centred at phi_l(phi_x).
  const double phi_l = minimum_position(p, l, phi_x);
  const double ebar = effective_inductive_energy(p, l, phi_x);
  if (!(ebar > 0.0)) throw NumericalError("non-positive curvature at a fraxon minimum");
  const double ell2 = std::sqrt(8.0 * p.e_c / ebar);
  const int L = pot.leading_order();
  double eps = 0.5 * std::sqrt(8.0 * p.e_c * ebar) +
               0.25 * el * (ell2 + 2.0 * (phi_l - phi_x) * (phi_l - phi_x)) - 0.25 * ell2 * ebar +
               pot.leading_sign() * std::exp(-L * L * ell2 / 4.0) * std::cos(L * phi_l);
  for (const auto& c : pot.coefficients) {
    eps += el * c.a * std::exp(-c.n * c.n * ell2 / 4.0) * std::cos(c.n * phi_l);
  }
  return eps;
}

double wkb_hopping(double e_j_bar, double e_c_bar) {
  if (!(e_j_bar > 0.0) || !(e_c_bar > 0.0)) {
    throw std::invalid_argument("WKB hopping needs positive energies");
  }
  const double ratio = 8.0 * e_j_bar / e_c_bar;
  const double wp = std::sqrt(8.0 * e_c_bar * e_j_bar);
  return 2.0 * std::sqrt(2.0 / kPi) * wp * std::pow(ratio, 0.25) * std::exp(-std::sqrt(ratio));
}

HoppingEstimate hopping(const TbParams& p) {
  const auto& spec = p.potential.spec;
  if (!(p.e_c > 0.0)) throw std::invalid_argument("E_C must be positive");
  const auto [l0, l1] = central_pair(spec);

  HoppingEstimate h;
  const double spacing = minimum_position(p, l1, 0.0) - minimum_position(p, l0, 0.0);
  h.inverse_period = 2.0 * kPi / spacing;
  const double L2 = h.inverse_period * h.inverse_period;
  h.e_l_bar = effective_inductive_energy(p, 0, 0.0);
  if (!(h.e_l_bar > 0.0)) throw NumericalError("non-positive curvature at the central minimum");
  h.e_j_bar = h.e_l_bar / L2;
  h.e_c_bar = L2 * p.e_c;
  h.omega_p = std::sqrt(8.0 * h.e_c_bar * h.e_j_bar);
  h.t = wkb_hopping(h.e_j_bar, h.e_c_bar);
  h.ell = gaussian_width(p.e_c, h.e_l_bar);
  h.overlap = std::exp(-spacing * spacing / (4.0 * h.ell * h.ell));

  const auto [lo, hi] = forge::label_range(spec);
  h.t_min = h.t_max = h.t;
  for (int l = lo; l < hi; ++l) {
    const double e = 0.5 * (effective_inductive_energy(p, l, 0.0) +
                            effective_inductive_energy(p, l + 1, 0.0));
    if (!(e > 0.0)) continue;
    const double tl = wkb_hopping(e / L2, h.e_c_bar);
    h.t_min = std::min(h.t_min, tl);
    h.t_max = std::max(h.t_max, tl);
  }
  if (h.e_j_bar / h.e_c_bar < 3.0) {
    h.warnings.push_back("E_J/E_C below 3: WKB hopping estimate is unreliable");
  }
  if (!spec.odd()) {
    h.warnings.push_back("even-d effective period uses half-shifted nodes (experimental)");
  }
  return h;
}

Eigen::MatrixXd TightBindingModel::matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = eps[i];
    if (i + 1 < d) m(i, i + 1) = m(i + 1, i) = -hop.t;
  }
  return m;
}

Eigen::VectorXd TightBindingModel::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

TightBindingModel build_model(const TbParams& p, double phi_x, OnsiteMode mode) {
  TightBindingModel m;
  m.d = p.potential.spec.d;
  m.hop = hopping(p);
  const auto [lo, hi] = forge::label_range(p.potential.spec);
  for (int l = lo; l <= hi; ++l) {
    m.labels.push_back(l);
    m.eps.push_back(onsite_energy(p, l, phi_x, mode));
  }
  return m;
}

ComparisonReport compare_with_exact(const TbParams& p, std::span<const double> phix_grid,
                                    int n_fock, OnsiteMode mode) {
  if (phix_grid.empty()) throw std::invalid_argument("flux grid is empty");
  const int d = p.potential.spec.d;
  const auto circuit = spectral::circuit_from_potential(p.potential, p.e_c, n_fock);

  std::vector<double> grid(phix_grid.begin(), phix_grid.end());
  grid.push_back(0.0);
  const auto sweep = spectral::sweep_flux(circuit, grid, d);
  const auto& exact0 = sweep.energies.back();
  const Eigen::VectorXd tb0 = build_model(p, 0.0, mode).eigenvalues();

  ComparisonReport r;
  r.t_tb = hopping(p).t;
  double sum = 0.0;
  for (std::size_t i = 0; i < phix_grid.size(); ++i) {
    const Eigen::VectorXd tb = build_model(p, phix_grid[i], mode).eigenvalues();
    std::vector<double> tb_row(d), ex_row(d);
    for (int j = 0; j < d; ++j) {
      tb_row[j] = tb(j) - tb0(0);
      ex_row[j] = sweep.energies[i][j] - exact0[0];
      const double dev = std::abs(tb_row[j] - ex_row[j]);
      r.max_deviation = std::max(r.max_deviation, dev);
      sum += dev;
    }
    r.phix.push_back(phix_grid[i]);
    r.tb.push_back(std::move(tb_row));
    r.exact.push_back(std::move(ex_row));
  }
  r.mean_deviation = sum / (static_cast<double>(phix_grid.size()) * d);
  const double spread_tb = tb0(d - 1) - tb0(0);
  const double spread_exact = exact0[d - 1] - exact0[0];
  r.splitting_ratio = spread_tb > 0.0 ? spread_exact / spread_tb : 0.0;
  r.t_exact = r.t_tb * r.splitting_ratio;
  return r;
}

}  // namespace fraxonium::tb
