#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraxonium/spectral_engine.hpp"

// Resonant tripod drive of a qutrit through an upper level |u>:
//
//   H = sum_a Omega_a |u><a| + h.c. (+ optional diagonal detunings)
//
// in the basis (|0>, |1>, |2>, |u>). Times are in units of 1/Omega_1 when
// Omega_1 = 1 is used as the amplitude scale.
namespace fraxonium::drive {

using State = Eigen::Vector4cd;
using Couplings = std::array<std::complex<double>, 3>;

// Peak Omega_0 / Omega_1 (= Omega_2 / Omega_1) of the default loop. Chosen so
// the dark-state holonomy is a rotation by pi/4, i.e. |0> -> (|0> + |2>)/sqrt 2.
inline constexpr double kDefaultCyclePeak = 2.19736822693562;

struct TripodSystem {
  Couplings couplings{};
  int upper_level_label = 5;
  std::array<double, 4> detunings{};

  Eigen::Matrix4cd hamiltonian() const;
  double omega_bar() const;
};

enum class RampShape { Constant, Linear, SineSquared };

struct Ramp {
  RampShape shape = RampShape::Constant;
  double from = 0.0;
  double to = 0.0;

  // s in [0, 1] across the leg.
  double value(double s) const;
};

struct PulseLeg {
  double weight = 1.0;  // share of the total duration, relative to the other legs
  std::array<Ramp, 3> omega{};
};

struct PulseSchedule {
  double duration = 500.0;
  std::vector<PulseLeg> legs;
  double sample_dt = 0.0;  // 0 selects duration / 1e5
  std::array<double, 4> detunings{};
  int upper_level_label = 5;

  // Throws std::invalid_argument on empty legs, non-positive duration or weights,
  // or amplitudes that jump across a leg boundary.
  void validate() const;
  TripodSystem at(double t) const;
  double step() const;
};

// Three sine-squared legs in the (Omega_0, Omega_2) plane with Omega_1 = 1:
// raise Omega_2, swap it into Omega_0, lower Omega_0.
PulseSchedule default_cycle(double duration, double peak = kDefaultCyclePeak);

// Same path traversed forward then backward (encloses no area).
PulseSchedule retrace_cycle(double duration, double peak = kDefaultCyclePeak);

// Multiplies every amplitude by kappa and the duration by 1/kappa.
PulseSchedule rescaled(const PulseSchedule& schedule, double kappa);

struct StirapTrace {
  std::vector<double> times;
  std::vector<std::array<double, 4>> populations;
  State final_state;
  double leakage = 0.0;          // max over all steps of |c_u|^2
  double max_norm_drift = 0.0;
  double step = 0.0;             // dt actually used
};

struct PropagateOptions {
  int trace_points = 1001;
  double norm_tolerance = 1e-9;
  int max_halvings = 4;
};

// Midpoint-sampled, piecewise-constant exact exponentials. Throws
// fraxonium::NumericalError when norm drift persists after max_halvings.
StirapTrace propagate(const PulseSchedule& schedule, const State& initial,
                      const PropagateOptions& options = {});

// Orthonormal zero-energy states as columns. Throws std::invalid_argument when
// all couplings vanish.
Eigen::Matrix<std::complex<double>, 4, 2> dark_subspace(const Couplings& omega);

// Gauge chosen for maximal overlap with `previous`.
Eigen::Matrix<std::complex<double>, 4, 2> dark_subspace(
    const Couplings& omega, const Eigen::Matrix<std::complex<double>, 4, 2>& previous);

struct Holonomy {
  Eigen::Matrix2cd unitary;  // in the dark basis at t = 0
  Eigen::Matrix<std::complex<double>, 4, 2> basis;
  double rotation_angle = 0.0;
  double min_adiabaticity = 0.0;  // min over the loop of Omega_bar * T
  std::vector<std::string> warnings;
};

// Path-ordered product of polar-unitarized dark-state overlaps.
// Throws std::invalid_argument if the loop does not close.
Holonomy holonomy_oracle(const PulseSchedule& schedule, int samples = 20000);

// Final state predicted by the holonomy for an initial state in the dark subspace.
State holonomy_prediction(const Holonomy& h, const State& initial);

double fidelity(const State& a, const State& b);

struct TransitionCheck {
  int lower = 0;
  int upper = 0;
  double dipole = 0.0;  // max(|<l|phi|u>|, |<l|n|u>|)
  bool forbidden = false;
  double rwa_ratio = 0.0;  // Omega_max / |E_u - E_l|
  bool rwa_violated = false;
};

struct FeasibilityReport {
  std::vector<TransitionCheck> transitions;
  double adiabaticity = 0.0;  // Omega_max * T
  bool feasible = true;
};

// Forbidden transitions (dipole below 1e-10) are flagged, not thrown.
FeasibilityReport rwa_feasibility(const spectral::DipoleChart& chart, double omega_max,
                                  std::span<const std::pair<int, int>> drive_pairs,
                                  double duration, double rwa_threshold = 0.1);

struct DriveStrength {
  std::complex<double> flux;    // phi_drive E_L <a|phi|b>
  std::complex<double> charge;  // 8 E_C n_g <a|n|b>
};

DriveStrength drive_strength(const spectral::CircuitSpec& spec, const spectral::DipoleChart& chart,
                             int a, int b, double flux_amplitude, double n_g);

}  // namespace fraxonium::drive
