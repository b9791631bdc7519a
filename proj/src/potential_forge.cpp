#include "fraxonium/potential_forge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fraxonium/errors.hpp"

namespace fraxonium::forge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridPerPeriod = 1.0e4;
constexpr double kBisectionTol = 1.0e-12;
constexpr double kMergeTol = 1.0e-6;

double shift_with(const QuditPotentialSpec& spec, const std::vector<Coefficient>& a0, int l,
                  double phi_x) {
  const int L = spec.leading_order();
  const double x = node_position(spec, l);
  double sum = 0.0;
  for (const auto& c : a0) sum += c.n * c.a * std::sin(c.n * x);
  return -((x - phi_x) - sum) / (L * L);
}

Eigen::VectorXd solve_rows(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    throw NumericalError("degeneracy system is singular: invalid harmonic-order choice");
  }
  return lu.solve(rhs);
}

}  // namespace

void QuditPotentialSpec::validate() const {
  if (d < 2) throw std::invalid_argument("qudit dimension d must be >= 2");
  if (!(eta >= 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("eta = E_L/E_J must lie in [0, 1)");
  }
  if (correction_order != 0 && correction_order != 1) {
    throw std::invalid_argument("correction_order must be 0 or 1");
  }
}

std::pair<int, int> label_range(const QuditPotentialSpec& spec) {
  if (spec.odd()) return {-(spec.d - 1) / 2, (spec.d - 1) / 2};
  return {-spec.d / 2, spec.d / 2 - 1};
}

double node_position(const QuditPotentialSpec& spec, int l) {
  const double L = spec.leading_order();
  return spec.odd() ? 2.0 * kPi * l / L : 2.0 * kPi * (l + 0.5) / L;
}

EngineeredPotential solve_coefficients(const QuditPotentialSpec& spec) {
  spec.validate();
  const int K = spec.coefficient_count();
  const int L = spec.leading_order();
  // Reference node l = 0 (phi = 0 for odd d, pi/L for even d); the rows
  // equate the potential at every other non-negative node with it.
  const int ref = 0;
  const double x_ref = node_position(spec, ref);

  EngineeredPotential pot;
  pot.spec = spec;

  if (K > 0) {
    // Row l: sum_n [cos(n x_ref) - cos(n x_l)] a_n = (x_l^2 - x_ref^2) / 2.
    // For odd d (x_ref = 0) the matrix is 2 sin^2(pi n l / L).
    Eigen::MatrixXd m(K, K);
    Eigen::VectorXd rhs(K);
    for (int row = 0; row < K; ++row) {
      const int l = ref + row + 1;
      const double x = node_position(spec, l);
      for (int col = 0; col < K; ++col) {
        const int n = col + 1;
        m(row, col) = spec.odd() ? 2.0 * std::pow(std::sin(kPi * n * l / L), 2)
                                 : std::cos(n * x_ref) - std::cos(n * x);
      }
      rhs(row) = 0.5 * (x * x - x_ref * x_ref);
    }
    const Eigen::VectorXd a0 = solve_rows(m, rhs);
    for (int col = 0; col < K; ++col) pot.zeroth_order.push_back({col + 1, a0(col)});

    Eigen::VectorXd a = a0;
    if (spec.correction_order == 1) {
      const double d_ref = shift_with(spec, pot.zeroth_order, ref, 0.0);
      Eigen::VectorXd rhs1(K);
      for (int row = 0; row < K; ++row) {
        const double dl = shift_with(spec, pot.zeroth_order, ref + row + 1, 0.0);
        rhs1(row) = 0.5 * L * L * (d_ref * d_ref - dl * dl);
      }
      a += spec.eta * solve_rows(m, rhs1);
    }
    for (int col = 0; col < K; ++col) pot.coefficients.push_back({col + 1, a(col)});
  }

  const auto [lo, hi] = label_range(spec);
  for (int l = lo; l <= hi; ++l) {
    pot.minima.push_back(
        {l, node_position(spec, l) + spec.eta * shift_with(spec, pot.zeroth_order, l, 0.0)});
  }
  return pot;
}

double minima_shift_first_order(const EngineeredPotential& pot, int l, double phi_x) {
  const auto [lo, hi] = label_range(pot.spec);
  if (l < lo || l > hi) {
    throw std::out_of_range("minimum label " + std::to_string(l) + " outside the d-window");
  }
  return shift_with(pot.spec, pot.zeroth_order, l, phi_x);
}

double evaluate_potential(const EngineeredPotential& pot, double phi, double phi_x) {
  const double eta = pot.eta();
  double u = 0.5 * eta * (phi - phi_x) * (phi - phi_x) +
             pot.leading_sign() * std::cos(pot.leading_order() * phi);
  for (const auto& c : pot.coefficients) u += eta * c.a * std::cos(c.n * phi);
  return u;
}

double potential_derivative(const EngineeredPotential& pot, double phi, double phi_x) {
  const double eta = pot.eta();
  const int L = pot.leading_order();
  double du = eta * (phi - phi_x) - pot.leading_sign() * L * std::sin(L * phi);
  for (const auto& c : pot.coefficients) du -= eta * c.a * c.n * std::sin(c.n * phi);
  return du;
}

std::vector<NumericMinimum> find_minima_numeric(const EngineeredPotential& pot, double phi_x,
                                                double half_window) {
  if (!(half_window > 0.0)) throw std::invalid_argument("search window must be positive");
  const auto points =
      static_cast<long>(std::ceil(2.0 * half_window / (2.0 * kPi) * kGridPerPeriod)) + 1;
  const double h = 2.0 * half_window / static_cast<double>(points - 1);

  std::vector<NumericMinimum> found;
  double x_prev = -half_window;
  double g_prev = potential_derivative(pot, x_prev, phi_x);
  for (long i = 1; i < points; ++i) {
    const double x = -half_window + h * static_cast<double>(i);
    const double g = potential_derivative(pot, x, phi_x);
    if (g_prev < 0.0 && g >= 0.0) {
      double a = x_prev, b = x;
      if (g == 0.0) {
        a = b;
      } else {
        for (int it = 0; it < 200 && b - a > kBisectionTol; ++it) {
          const double mid = 0.5 * (a + b);
          (potential_derivative(pot, mid, phi_x) < 0.0 ? a : b) = mid;
        }
      }
      const double root = 0.5 * (a + b);
      if (found.empty() || root - found.back().phi > kMergeTol) {
        found.push_back({root, evaluate_potential(pot, root, phi_x)});
      }
    }
    x_prev = x;
    g_prev = g;
  }
  if (found.empty()) throw NumericalError("no potential minimum inside the search window");
  return found;
}

std::vector<NumericMinimum> lowest_minima(const EngineeredPotential& pot, double phi_x, int count,
                                          double half_window) {
  auto all = find_minima_numeric(pot, phi_x, half_window);
  if (static_cast<int>(all.size()) < count) {
    throw NumericalError("fewer minima in window than requested");
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& x, const auto& y) { return x.value < y.value; });
  all.resize(count);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.phi < y.phi; });
  return all;
}

double default_window(const QuditPotentialSpec& spec) {
  const auto [lo, hi] = label_range(spec);
  const double spacing = 2.0 * kPi / spec.leading_order();
  return std::max(std::abs(node_position(spec, lo)), std::abs(node_position(spec, hi))) + spacing;
}

}  // namespace fraxonium::forge
