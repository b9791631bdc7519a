#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "fraxonium/potential_forge.hpp"

// Fraxon tight-binding model: one Gaussian state per potential minimum,
// nearest-neighbour phase-slip hopping from the WKB transmon estimate.
namespace fraxonium::tb {

struct TbParams {
  forge::EngineeredPotential potential;  // carries d, eta = E_L/E_J and the a_n
  double e_c = 0.08;
};

enum class OnsiteMode { Simple, Expectation };

// phi_l(phi_x) to first order in eta.
double minimum_position(const TbParams& p, int l, double phi_x);

// Local curvature E~_{L,d} of the full potential at phi_l(phi_x).
double effective_inductive_energy(const TbParams& p, int l, double phi_x);

double onsite_energy(const TbParams& p, int l, double phi_x, OnsiteMode mode);

// 2 sqrt(2/pi) hbar w_p (8 E_J/E_C)^(1/4) exp(-sqrt(8 E_J/E_C)), hbar w_p = sqrt(8 E_C E_J).
double wkb_hopping(double e_j_bar, double e_c_bar);

struct HoppingEstimate {
  double t = 0.0;
  double inverse_period = 0.0;  // effective L with L (phi_{l+1} - phi_l) = 2 pi
  double e_l_bar = 0.0;
  double e_j_bar = 0.0;
  double e_c_bar = 0.0;
  double omega_p = 0.0;
  double ell = 0.0;       // Gaussian width (8 E_C / E~_L)^(1/4)
  double overlap = 0.0;   // nearest-neighbour Gaussian overlap, diagnostic only
  double t_min = 0.0;     // spread of per-barrier estimates, diagnostic only
  double t_max = 0.0;
  std::vector<std::string> warnings;
};

HoppingEstimate hopping(const TbParams& p);

struct TightBindingModel {
  int d = 0;
  std::vector<int> labels;
  std::vector<double> eps;
  HoppingEstimate hop;

  Eigen::MatrixXd matrix() const;
  Eigen::VectorXd eigenvalues() const;
};

TightBindingModel build_model(const TbParams& p, double phi_x,
                              OnsiteMode mode = OnsiteMode::Expectation);

struct ComparisonReport {
  std::vector<double> phix;
  std::vector<std::vector<double>> tb;     // aligned, [point][level]
  std::vector<std::vector<double>> exact;  // aligned, [point][level]
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
  double t_tb = 0.0;
  double t_exact = 0.0;        // t_tb scaled by the exact / TB multiplet spread at phi_x = 0
  double splitting_ratio = 0.0;  // t_exact / t_tb
};

// Lowest d levels of the exact Fock-space spectrum versus the tight-binding
// model. Each method is shifted by its own lowest level at phi_x = 0.
ComparisonReport compare_with_exact(const TbParams& p, std::span<const double> phix_grid,
                                    int n_fock = 120, OnsiteMode mode = OnsiteMode::Expectation);

}  // namespace fraxonium::tb
