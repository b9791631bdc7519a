#include "fraxonium/drive_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraxonium/errors.hpp"

namespace fraxonium::drive {

namespace {

using Dark = Eigen::Matrix<std::complex<double>, 4, 2>;
constexpr std::complex<double> kI{0.0, 1.0};

// Unitary factor of the polar decomposition.
Eigen::Matrix2cd polar_unitary(const Eigen::Matrix2cd& m) {
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Eigen::Matrix4cd step_unitary(const Eigen::Matrix4cd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const Eigen::Vector4cd phases = (-kI * dt * es.eigenvalues().cast<std::complex<double>>())
                                      .array()
                                      .exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct Attempt {
  StirapTrace trace;
  bool ok = true;
};

Attempt run(const PulseSchedule& schedule, const State& initial, double dt_target,
            const PropagateOptions& options) {
  const double T = schedule.duration;
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt_target - 1e-9)));
  const double dt = T / static_cast<double>(steps);
  const long stride = std::max(1L, steps / std::max(1, options.trace_points - 1));

  Attempt a;
  auto& tr = a.trace;
  tr.step = dt;
  State psi = initial;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.populations.push_back({std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2)),
                              std::norm(psi(3))});
  };
  record(0.0);
  tr.leakage = std::norm(psi(3));

  for (long k = 0; k < steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    psi = step_unitary(schedule.at(t_mid).hamiltonian(), dt) * psi;
    const double drift = std::abs(psi.norm() - 1.0);
    tr.max_norm_drift = std::max(tr.max_norm_drift, drift);
    if (!(drift <= options.norm_tolerance)) {
      a.ok = false;
      return a;
    }
    tr.leakage = std::max(tr.leakage, std::norm(psi(3)));
    if ((k + 1) % stride == 0 || k + 1 == steps) record(static_cast<double>(k + 1) * dt);
  }
  tr.final_state = psi;
  return a;
}

}  // namespace

Eigen::Matrix4cd TripodSystem::hamiltonian() const {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 3; ++a) {
    h(3, a) = couplings[a];
    h(a, 3) = std::conj(couplings[a]);
  }
  for (int a = 0; a < 4; ++a) h(a, a) = detunings[a];
  return h;
}

double TripodSystem::omega_bar() const {
  return std::sqrt(std::norm(couplings[0]) + std::norm(couplings[1]) + std::norm(couplings[2]));
}

double Ramp::value(double s) const {
  switch (shape) {
    case RampShape::Constant:
      return from;
    case RampShape::Linear:
      return from + (to - from) * s;
    case RampShape::SineSquared: {
      const double r = std::sin(0.5 * std::numbers::pi * s);
      return from + (to - from) * r * r;
    }
  }
  return from;
}

void PulseSchedule::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
  if (legs.empty()) throw std::invalid_argument("pulse schedule has no legs");
  if (sample_dt < 0.0) throw std::invalid_argument("sample_dt must be non-negative");
  for (const auto& leg : legs) {
    if (!(leg.weight > 0.0)) throw std::invalid_argument("leg weights must be positive");
  }
  for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      if (std::abs(legs[i].omega[a].value(1.0) - legs[i + 1].omega[a].value(0.0)) > 1e-12) {
        throw std::invalid_argument("amplitude of drive " + std::to_string(a) +
                                    " jumps between legs " + std::to_string(i) + " and " +
                                    std::to_string(i + 1));
      }
    }
  }
}

TripodSystem PulseSchedule::at(double t) const {
  double total = 0.0;
  for (const auto& leg : legs) total += leg.weight;
  const double x = std::clamp(t / duration, 0.0, 1.0) * total;

  double start = 0.0;
  std::size_t i = 0;
  while (i + 1 < legs.size() && x > start + legs[i].weight) start += legs[i++].weight;
  const double s = std::clamp((x - start) / legs[i].weight, 0.0, 1.0);

  TripodSystem sys;
  sys.upper_level_label = upper_level_label;
  sys.detunings = detunings;
  for (int a = 0; a < 3; ++a) sys.couplings[a] = legs[i].omega[a].value(s);
  return sys;
}

double PulseSchedule::step() const { return sample_dt > 0.0 ? sample_dt : duration / 1e5; }

PulseSchedule default_cycle(double duration, double peak) {
  const Ramp zero{RampShape::Constant, 0.0, 0.0};
  const Ramp one{RampShape::Constant, 1.0, 1.0};
  PulseSchedule s;
  s.duration = duration;
  s.legs = {
      {1.0, {zero, one, Ramp{RampShape::SineSquared, 0.0, peak}}},
      {1.0, {Ramp{RampShape::SineSquared, 0.0, peak}, one, Ramp{RampShape::SineSquared, peak, 0.0}}},
      {1.0, {Ramp{RampShape::SineSquared, peak, 0.0}, one, zero}},
  };
  return s;
}

PulseSchedule retrace_cycle(double duration, double peak) {
  const Ramp zero{RampShape::Constant, 0.0, 0.0};
  const Ramp one{RampShape::Constant, 1.0, 1.0};
  PulseSchedule s;
  s.duration = duration;
  s.legs = {
      {1.0, {zero, one, Ramp{RampShape::SineSquared, 0.0, peak}}},
      {1.0, {zero, one, Ramp{RampShape::SineSquared, peak, 0.0}}},
  };
  return s;
}

PulseSchedule rescaled(const PulseSchedule& schedule, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  PulseSchedule s = schedule;
  s.duration /= kappa;
  s.sample_dt /= kappa;
  for (auto& d : s.detunings) d *= kappa;
  for (auto& leg : s.legs) {
    for (auto& r : leg.omega) {
      r.from *= kappa;
      r.to *= kappa;
    }
  }
  return s;
}

StirapTrace propagate(const PulseSchedule& schedule, const State& initial,
                      const PropagateOptions& options) {
  schedule.validate();
  if (std::abs(initial.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("initial state must be normalized");
  }
  double dt = schedule.step();
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, dt *= 0.5) {
    auto a = run(schedule, initial, dt, options);
    if (a.ok) return std::move(a.trace);
  }
  throw NumericalError("norm drift above tolerance after " + std::to_string(options.max_halvings) +
                       " step halvings");
}

Dark dark_subspace(const Couplings& omega) {
  Eigen::Vector3cd bright(std::conj(omega[0]), std::conj(omega[1]), std::conj(omega[2]));
  const double norm = bright.norm();
  if (!(norm > 0.0)) {
    throw std::invalid_argument("all couplings vanish: the whole lower subspace is dark");
  }
  bright /= norm;

  Dark out = Dark::Zero();
  std::vector<Eigen::Vector3cd> kept{bright};
  for (int idx : {0, 2, 1}) {
    Eigen::Vector3cd v = Eigen::Vector3cd::Unit(idx);
    for (const auto& k : kept) v -= k * k.dot(v);
    const double n = v.norm();
    if (n <= 0.1) continue;
    v /= n;
    for (const auto& k : kept) v -= k * k.dot(v);  // second pass for orthogonality
    v.normalize();
    out.col(static_cast<int>(kept.size()) - 1).head<3>() = v;
    kept.push_back(v);
    if (kept.size() == 3) break;
  }
  return out;
}

Dark dark_subspace(const Couplings& omega, const Dark& previous) {
  const Dark d = dark_subspace(omega);
  return d * polar_unitary(d.adjoint() * previous);
}

Holonomy holonomy_oracle(const PulseSchedule& schedule, int samples) {
  schedule.validate();
  if (samples < 2) throw std::invalid_argument("holonomy needs at least two samples");
  const auto start = schedule.at(0.0);
  const auto end = schedule.at(schedule.duration);
  for (int a = 0; a < 3; ++a) {
    if (std::abs(start.couplings[a] - end.couplings[a]) > 1e-9 * std::max(1.0, start.omega_bar())) {
      throw std::invalid_argument("pulse schedule is not a closed loop");
    }
  }

  Holonomy h;
  const Dark d0 = dark_subspace(start.couplings);
  Dark d = d0;
  Eigen::Matrix2cd product = Eigen::Matrix2cd::Identity();
  double min_bar = start.omega_bar();
  for (int k = 1; k <= samples; ++k) {
    const auto sys = schedule.at(schedule.duration * k / samples);
    min_bar = std::min(min_bar, sys.omega_bar());
    const Dark next = dark_subspace(sys.couplings, d);
    product = polar_unitary(next.adjoint() * d) * product;
    d = next;
  }
  h.unitary = d0.adjoint() * d * product;
  h.basis = d0;
  h.rotation_angle = std::atan2(std::abs(h.unitary(1, 0)), std::abs(h.unitary(0, 0)));
  h.min_adiabaticity = min_bar * schedule.duration;
  if (h.min_adiabaticity < 10.0) {
    h.warnings.push_back("Omega_bar T below 10: evolution is not adiabatic");
  }
  return h;
}

State holonomy_prediction(const Holonomy& h, const State& initial) {
  return h.basis * (h.unitary * (h.basis.adjoint() * initial));
}

double fidelity(const State& a, const State& b) { return std::norm(a.dot(b)); }

FeasibilityReport rwa_feasibility(const spectral::DipoleChart& chart, double omega_max,
                                  std::span<const std::pair<int, int>> drive_pairs,
                                  double duration, double rwa_threshold) {
  if (!(omega_max > 0.0)) throw std::invalid_argument("omega_max must be positive");
  FeasibilityReport r;
  r.adiabaticity = omega_max * duration;
  for (const auto& [lower, upper] : drive_pairs) {
    if (lower < 0 || upper < 0 || lower >= chart.levels || upper >= chart.levels) {
      throw std::out_of_range("drive pair outside the dipole chart");
    }
    TransitionCheck c;
    c.lower = lower;
    c.upper = upper;
    c.dipole = std::max(std::abs(chart.phi(lower, upper)), std::abs(chart.charge(lower, upper)));
    c.forbidden = c.dipole < 1e-10;
    const double gap = std::abs(chart.energies(upper) - chart.energies(lower));
    c.rwa_ratio = gap > 0.0 ? omega_max / gap : INFINITY;
    c.rwa_violated = c.rwa_ratio > rwa_threshold;
    r.feasible = r.feasible && !c.forbidden && !c.rwa_violated;
    r.transitions.push_back(c);
  }
  return r;
}

DriveStrength drive_strength(const spectral::CircuitSpec& spec, const spectral::DipoleChart& chart,
                             int a, int b, double flux_amplitude, double n_g) {
  if (a < 0 || b < 0 || a >= chart.levels || b >= chart.levels) {
    throw std::out_of_range("level outside the dipole chart");
  }
  return {flux_amplitude * spec.e_l * chart.phi(a, b), 8.0 * spec.e_c * n_g * chart.charge(a, b)};
}

}  // namespace fraxonium::drive
