#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Effective energy-phase relations of junction + inductor modular elements and
// their parallel / series compositions.
namespace fraxonium::synth {

// Series Josephson junction and inductor. The two-term energy is
//   E(phi, dphi) = E_L [ -tau cos((phi + dphi)/2) + (phi - dphi)^2 / 8 ],
// with tau = E_J / E_L. The perturbative series is only meaningful for tau < 1;
// the numerics below do not depend on it.
struct ModularElement {
  double tau = 0.1;
  double e_l = 1.0;

  double energy(double phi, double dphi) const;
};

struct InternalMinimum {
  double dphi = 0.0;
  double energy = 0.0;
  bool fixed_point = false;  // true if the damped iteration produced the global minimum
};

InternalMinimum minimize_internal_phase(const ModularElement& elem, double phi);

struct FourierTerm {
  int n = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

// A 2 pi / k periodic energy-phase relation tabulated on a uniform grid over
// [0, 2 pi) together with its real Fourier series.
class EffectiveEnergyPhase {
 public:
  EffectiveEnergyPhase() = default;
  EffectiveEnergyPhase(std::vector<double> samples, int period_divisor);

  int grid_size() const { return static_cast<int>(samples_.size()); }
  int period_divisor() const { return period_divisor_; }
  double grid_point(int i) const;
  const std::vector<double>& samples() const { return samples_; }

  // eps_n: coefficient of cos(n phi); n = 0 is the mean value.
  double cos_coeff(int n) const;
  // Coefficient of sin(n phi).
  double sin_coeff(int n) const;
  int max_order() const { return static_cast<int>(cos_.size()) - 1; }

  // Trigonometric interpolation through the samples.
  double evaluate(double phi) const;

  // Harmonics n >= 1 with non-negligible amplitude (relative threshold).
  std::vector<FourierTerm> fourier(double rel_threshold = 0.0) const;

  // Largest |amplitude| among n >= 1.
  double max_harmonic() const;

 private:
  std::vector<double> samples_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  int period_divisor_ = 1;
};

// Tabulates the minimized element energy on grid_size points (>= 64) and
// extracts its Fourier series.
EffectiveEnergyPhase effective_relation(const ModularElement& elem, int grid_size = 1024);

// Sum of `copies` replicas shifted by 2 pi j / copies.
EffectiveEnergyPhase parallel_compose(const EffectiveEnergyPhase& rel, int copies);

// Two identical elements in series, minimized over the relative phase drop:
//   E_s(phi) = min_dphi [ E((phi + dphi)/2) + E((phi - dphi)/2) ].
// For a pure A cos(k phi) input this is -2|A| |cos(k phi / 2)|.
// Throws std::domain_error if no single harmonic dominates.
EffectiveEnergyPhase series_negate(const EffectiveEnergyPhase& rel);

struct KiteFit {
  double e_j_tilde = 0.0;      // U_kite = -E~_J cos(phi) + E~_K cos(2 phi)
  double e_k_tilde = 0.0;
  double sine_residual = 0.0;  // sin(phi) amplitude once biased to a negative cos(2 phi)
  double parity_residual = 0.0;  // sine content of the pi-biased kite itself
  double fit_residual = 0.0;   // rms of harmonics outside the two-term model, relative
  std::vector<FourierTerm> table;
};

class KiteFitError : public std::runtime_error {
 public:
  KiteFitError(const std::string& what, KiteFit fit)
      : std::runtime_error(what), fit_(std::move(fit)) {}
  const KiteFit& fit() const { return fit_; }

 private:
  KiteFit fit_;
};

// Two modular branches in parallel with a pi flux bias between them.
KiteFit kite_potential(double e_j1, double e_j2, double e_l1, double e_l2, int grid_size = 1024,
                       double fit_tolerance = 0.1);

// Leading terms of the small-tau expansion of the single-element relation,
// in units of E_L: eps_1, eps_2, eps_3.
double series_coefficient(double tau, int n);

}  // namespace fraxonium::synth
