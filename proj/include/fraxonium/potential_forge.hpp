#pragma once

#include <utility>
#include <vector>

// Fourier engineering of a d-fold degenerate Josephson potential.
//
// Energies are in units of the leading Josephson energy E_J; eta = E_L / E_J.
// The full potential at flux phi_x is
//
//   U(phi) = eta/2 (phi - phi_x)^2 + s cos(L phi) + eta * sum_n a_n cos(n phi)
//
// with L = d-1, s = -1 for odd d and L = d, s = +1 for even d.
namespace fraxonium::forge {

struct QuditPotentialSpec {
  int d = 3;
  double eta = 0.0;
  int correction_order = 0;  // 0 or 1 (order in eta kept in the a_n)

  bool odd() const { return d % 2 != 0; }
  int leading_order() const { return odd() ? d - 1 : d; }
  int leading_sign() const { return odd() ? -1 : +1; }
  int coefficient_count() const { return odd() ? (d - 1) / 2 : d / 2 - 1; }

  // Throws std::invalid_argument on d < 2, eta outside [0, 1), bad order.
  void validate() const;
};

struct Coefficient {
  int n = 0;
  double a = 0.0;
};

struct Minimum {
  int l = 0;
  double phi = 0.0;
};

struct EngineeredPotential {
  QuditPotentialSpec spec;
  std::vector<Coefficient> coefficients;  // a_n used by the potential
  std::vector<Coefficient> zeroth_order;  // a_n^(0)
  std::vector<Minimum> minima;            // perturbative minima at phi_x = 0

  int leading_order() const { return spec.leading_order(); }
  int leading_sign() const { return spec.leading_sign(); }
  double eta() const { return spec.eta; }
};

// Range of minimum labels belonging to the d-fold window:
// odd d: l = -(d-1)/2 .. (d-1)/2, even d: l = -d/2 .. d/2-1.
std::pair<int, int> label_range(const QuditPotentialSpec& spec);

// Unperturbed position of minimum l: 2 pi l / L (odd) or 2 pi (l + 1/2) / L (even).
double node_position(const QuditPotentialSpec& spec, int l);

EngineeredPotential solve_coefficients(const QuditPotentialSpec& spec);

// First-order shift d(phi_l)/d(eta) of minimum l, evaluated with the
// zeroth-order coefficients. The flux enters as in phi_l(phi_x).
double minima_shift_first_order(const EngineeredPotential& pot, int l, double phi_x = 0.0);

double evaluate_potential(const EngineeredPotential& pot, double phi, double phi_x);
double potential_derivative(const EngineeredPotential& pot, double phi, double phi_x);

struct NumericMinimum {
  double phi = 0.0;
  double value = 0.0;
};

// Dense sampling (1e4 points per 2 pi) over [-half_window, half_window] with
// derivative bisection to 1e-12; minima closer than 1e-6 rad are merged.
// Sorted by phi. Throws fraxonium::NumericalError if none is found.
std::vector<NumericMinimum> find_minima_numeric(const EngineeredPotential& pot, double phi_x,
                                                double half_window);

// The `count` lowest minima from find_minima_numeric, returned sorted by phi.
std::vector<NumericMinimum> lowest_minima(const EngineeredPotential& pot, double phi_x, int count,
                                          double half_window);

// Default search half-window: one node spacing beyond the outermost minimum.
double default_window(const QuditPotentialSpec& spec);

}  // namespace fraxonium::forge
