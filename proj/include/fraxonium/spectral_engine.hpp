#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fraxonium::forge {
struct EngineeredPotential;
}

// Truncated harmonic-oscillator (Fock) treatment of
//
//   H = -4 E_C d^2/dphi^2 + E_L/2 (phi - phi_x)^2 + sum_j A_j cos(p_j phi + theta_j)
//
// Energies are in units of E_J. The flux is gauged into the Josephson terms,
// phi -> phi + phi_x, so the oscillator part is flux independent.
namespace fraxonium::spectral {

struct HarmonicTerm {
  int order = 1;
  double amplitude = 0.0;
  double phase_offset = 0.0;  // pi/2 turns A cos(p phi) into -A sin(p phi)
};

struct CircuitSpec {
  double e_c = 0.08;
  double e_l = 0.03;
  std::vector<HarmonicTerm> harmonics;
  double phi_x = 0.0;
  int n_fock = 100;

  void validate() const;
  // Oscillator length (8 E_C / E_L)^(1/4); phi = sigma/sqrt(2) (a + a^dag).
  double sigma() const;
  double oscillator_frequency() const;
  // p sqrt(8 E_C |A|) for the dominant Josephson term (largest |A|);
  // falls back to the oscillator frequency when there are no harmonics.
  double plasma_frequency() const;
};

struct FockOperator {
  Eigen::MatrixXcd entries;
  bool hermitian = false;

  int dim() const { return static_cast<int>(entries.rows()); }
};

// <m| exp(z a^dag - z^* a) |n> via Laguerre polynomials with log-scaled prefactors.
std::complex<double> displacement_element(int m, int n, std::complex<double> z);

FockOperator build_hamiltonian(const CircuitSpec& spec);
FockOperator phase_operator(int n_fock, double sigma);
FockOperator charge_operator(int n_fock, double sigma);
FockOperator parity_operator(int n_fock);

struct Eigensystem {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXcd vectors;  // columns; largest-magnitude component real positive
};

// Lowest k eigenpairs. Throws fraxonium::NumericalError on non-finite input.
Eigensystem diagonalize(const FockOperator& h, int k);

struct SpectrumSweep {
  std::vector<double> phix;
  std::vector<std::vector<double>> energies;  // [point][level]
  std::optional<std::vector<std::vector<double>>> parities;
};

SpectrumSweep sweep_flux(const CircuitSpec& spec, std::span<const double> phix_grid, int k,
                         bool with_parity = false);

struct DipoleChart {
  int levels = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd phi;     // <a|phi|b>
  Eigen::MatrixXcd charge;  // <a|n|b>
  Eigen::MatrixXd omega;    // |E_a - E_b| / omega_p
  Eigen::VectorXd parity;   // <a|P|a>
  double omega_p = 1.0;
};

DipoleChart dipole_chart(const CircuitSpec& spec, int k);

struct DipoleSample {
  double phix = 0.0;
  int alpha = 0;
  int beta = 0;
  std::complex<double> phi;
  std::complex<double> charge;
  double omega = 0.0;  // in units of omega_p
  bool ambiguous = false;  // alternate ordering at a (near) level crossing
};

// Dipole elements of the requested pairs on every grid point, ordered by grid index.
// When a pair level is within 1e-9 of a neighbour an extra record with the
// neighbour swapped in is emitted and both are flagged.
std::vector<DipoleSample> dipole_vs_flux(const CircuitSpec& spec,
                                         std::span<const std::pair<int, int>> pairs,
                                         std::span<const double> phix_grid);

struct ConvergenceReport {
  double max_shift = 0.0;
  bool converged = false;
};

ConvergenceReport convergence_check(const CircuitSpec& spec, int k, int n1, int n2,
                                    double tolerance = 1e-8);

// --- presets -------------------------------------------------------------

struct PresetParams {
  std::optional<double> e_c;
  std::optional<double> e_l;
  int n_fock = 100;
  double phi_x = 0.0;
  // qutrit-asym only.
  std::optional<double> e_j0;
  double e_j_tilde = 0.0;
  double e_k_tilde = 1.0;
};

std::vector<std::string> preset_names();

// qutrit, qutrit-asym, d4, d5-paper, d5-solver, fluxonium.
// Throws std::invalid_argument for unknown names.
CircuitSpec make_preset(std::string_view name, const PresetParams& params = {});

// Default (E_C, E_L) of a preset.
std::pair<double, double> preset_defaults(std::string_view name);

// Harmonics of an engineered potential: s cos(L phi) + eta sum_n a_n cos(n phi).
CircuitSpec circuit_from_potential(const forge::EngineeredPotential& pot, double e_c, int n_fock,
                                   double phi_x = 0.0);

}  // namespace fraxonium::spectral
