#include "fraxonium/harmonic_synth.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <unsupported/Eigen/FFT>

#include "fraxonium/errors.hpp"

namespace fraxonium::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFixedPointDamping = 0.5;
constexpr int kFixedPointMaxIter = 10000;
constexpr double kFixedPointTol = 1.0e-12;
constexpr int kScanPoints = 4096;

// Brent refinement followed by Newton polishing on dE/d(dphi).
double refine_internal(const ModularElement& elem, double phi, double lo, double hi) {
  const auto f = [&](double x) { return elem.energy(phi, x); };
  double x = boost::math::tools::brent_find_minima(f, lo, hi, 52).first;
  for (int it = 0; it < 8; ++it) {
    const double s = 0.5 * (phi + x);
    const double g = elem.tau * 0.5 * std::sin(s) - 0.25 * (phi - x);
    const double h = elem.tau * 0.25 * std::cos(s) + 0.25;
    if (h <= 0.0) break;
    const double step = g / h;
    if (std::abs(step) > hi - lo) break;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

double sparse_eval(const std::vector<FourierTerm>& terms, double mean, double phi) {
  double v = mean;
  for (const auto& t : terms) v += t.cos_amp * std::cos(t.n * phi) + t.sin_amp * std::sin(t.n * phi);
  return v;
}

}  // namespace

double ModularElement::energy(double phi, double dphi) const {
  const double inductor = phi - dphi;
  return e_l * (-tau * std::cos(0.5 * (phi + dphi)) + inductor * inductor / 8.0);
}

InternalMinimum minimize_internal_phase(const ModularElement& elem, double phi) {
  if (!(elem.tau >= 0.0) || !(elem.e_l > 0.0)) {
    throw std::invalid_argument("modular element needs tau >= 0 and E_L > 0");
  }
  // Damped fixed point of dphi = phi - 2 tau sin((phi + dphi)/2).
  double x = phi;
  bool converged = false;
  for (int it = 0; it < kFixedPointMaxIter; ++it) {
    const double next = (1.0 - kFixedPointDamping) * x +
                        kFixedPointDamping * (phi - 2.0 * elem.tau * std::sin(0.5 * (phi + x)));
    const double delta = std::abs(next - x);
    x = next;
    if (delta < kFixedPointTol) {
      converged = true;
      break;
    }
  }
  // The two-term energy is strictly convex in dphi for tau < 1.
  if (converged && elem.tau < 1.0) return {x, elem.energy(phi, x), true};

  // Global search: the inductor phase (phi - dphi)/2 = tau sin(...) is bounded by tau.
  const double half = 2.0 * std::max(kPi, elem.tau + 0.5);
  const double lo = phi - half;
  const double step = 2.0 * half / (kScanPoints - 1);
  int best = 0;
  double best_e = elem.energy(phi, lo);
  for (int i = 1; i < kScanPoints; ++i) {
    const double e = elem.energy(phi, lo + step * i);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  const double center = lo + step * best;
  const double y = refine_internal(elem, phi, center - step, center + step);
  const double ey = elem.energy(phi, y);
  if (converged) {
    const double ex = elem.energy(phi, x);
    if (ex <= ey + 1e-14 * std::abs(ey)) return {x, ex, true};
  }
  if (!std::isfinite(ey)) throw NumericalError("internal-phase minimization failed");
  return {y, ey, false};
}

EffectiveEnergyPhase::EffectiveEnergyPhase(std::vector<double> samples, int period_divisor)
    : samples_(std::move(samples)), period_divisor_(period_divisor) {
  const int n = grid_size();
  if (n < 4) throw std::invalid_argument("energy-phase relation needs at least 4 samples");
  if (period_divisor < 1) throw std::invalid_argument("period divisor must be >= 1");

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, samples_);
  const int half = n / 2;
  cos_.assign(half + 1, 0.0);
  sin_.assign(half + 1, 0.0);
  cos_[0] = spectrum[0].real() / n;
  for (int k = 1; k <= half; ++k) {
    const bool nyquist = (n % 2 == 0 && k == half);
    const double scale = nyquist ? 1.0 / n : 2.0 / n;
    cos_[k] = scale * spectrum[k].real();
    sin_[k] = nyquist ? 0.0 : -scale * spectrum[k].imag();
  }
}

double EffectiveEnergyPhase::grid_point(int i) const { return 2.0 * kPi * i / grid_size(); }

double EffectiveEnergyPhase::cos_coeff(int n) const {
  return (n >= 0 && n <= max_order()) ? cos_[n] : 0.0;
}

double EffectiveEnergyPhase::sin_coeff(int n) const {
  return (n >= 0 && n <= max_order()) ? sin_[n] : 0.0;
}

double EffectiveEnergyPhase::evaluate(double phi) const {
  double v = cos_[0];
  for (int k = 1; k <= max_order(); ++k) v += cos_[k] * std::cos(k * phi) + sin_[k] * std::sin(k * phi);
  return v;
}

std::vector<FourierTerm> EffectiveEnergyPhase::fourier(double rel_threshold) const {
  const double cut = rel_threshold * max_harmonic();
  std::vector<FourierTerm> out;
  for (int k = 1; k <= max_order(); ++k) {
    if (rel_threshold <= 0.0 || std::hypot(cos_[k], sin_[k]) > cut) {
      out.push_back({k, cos_[k], sin_[k]});
    }
  }
  return out;
}

double EffectiveEnergyPhase::max_harmonic() const {
  double m = 0.0;
  for (int k = 1; k <= max_order(); ++k) m = std::max(m, std::hypot(cos_[k], sin_[k]));
  return m;
}

EffectiveEnergyPhase effective_relation(const ModularElement& elem, int grid_size) {
  if (grid_size < 64) throw std::invalid_argument("grid_size must be >= 64");
  std::vector<double> samples(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    samples[i] = minimize_internal_phase(elem, 2.0 * kPi * i / grid_size).energy;
  }
  return {std::move(samples), 1};
}

EffectiveEnergyPhase parallel_compose(const EffectiveEnergyPhase& rel, int copies) {
  if (copies < 1) throw std::invalid_argument("parallel composition needs >= 1 copies");
  const int n = rel.grid_size();
  const auto& src = rel.samples();
  std::vector<double> out(n, 0.0);
  for (int j = 0; j < copies; ++j) {
    const double shift = 2.0 * kPi * j / copies;
    if ((static_cast<long>(n) * j) % copies == 0) {
      const int offset = static_cast<int>(static_cast<long>(n) * j / copies);
      for (int i = 0; i < n; ++i) out[i] += src[(i + offset) % n];
    } else {
      for (int i = 0; i < n; ++i) out[i] += rel.evaluate(rel.grid_point(i) + shift);
    }
  }
  return {std::move(out), std::lcm(rel.period_divisor(), copies)};
}

EffectiveEnergyPhase series_negate(const EffectiveEnergyPhase& rel) {
  const int n = rel.grid_size();
  const int k = rel.period_divisor();
  const double mean = rel.cos_coeff(0);
  const double peak = rel.max_harmonic();
  if (peak == 0.0 || peak <= 1e-13 * std::abs(mean)) return {std::vector<double>(n, 2.0 * mean), k};

  double second = 0.0;
  bool seen_peak = false;
  for (int m = 1; m <= rel.max_order(); ++m) {
    const double a = std::hypot(rel.cos_coeff(m), rel.sin_coeff(m));
    if (a == peak && !seen_peak) {
      seen_peak = true;
      continue;
    }
    second = std::max(second, a);
  }
  if (second > 0.5 * peak) {
    throw std::domain_error("series composition needs a single dominant harmonic");
  }

  const auto terms = rel.fourier(1e-14);
  const auto f = [&](double phi, double dphi) {
    return sparse_eval(terms, mean, 0.5 * (phi + dphi)) + sparse_eval(terms, mean, 0.5 * (phi - dphi));
  };
  // f is 4 pi / k periodic in dphi.
  constexpr int kScan = 256;
  const double period = 4.0 * kPi / k;
  const double step = period / kScan;

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double phi = rel.grid_point(i);
    int best = 0;
    double best_v = f(phi, 0.0);
    for (int s = 1; s < kScan; ++s) {
      const double v = f(phi, s * step);
      if (v < best_v) {
        best_v = v;
        best = s;
      }
    }
    const double c = best * step;
    const auto g = [&](double x) { return f(phi, x); };
    const auto r = boost::math::tools::brent_find_minima(g, c - step, c + step, 52);
    out[i] = std::min(r.second, best_v);
  }
  return {std::move(out), k};
}

KiteFit kite_potential(double e_j1, double e_j2, double e_l1, double e_l2, int grid_size,
                       double fit_tolerance) {
  if (!(e_j1 > 0.0 && e_j2 > 0.0 && e_l1 > 0.0 && e_l2 > 0.0)) {
    throw std::invalid_argument("kite branch energies must be positive");
  }
  if (grid_size % 4 != 0) throw std::invalid_argument("kite grid size must be a multiple of 4");
  const auto b1 = effective_relation({e_j1 / e_l1, e_l1}, grid_size);
  const auto b2 = effective_relation({e_j2 / e_l2, e_l2}, grid_size);

  const int n = grid_size;
  std::vector<double> kite(n), biased(n);
  for (int i = 0; i < n; ++i) kite[i] = b1.samples()[i] + b2.samples()[(i + n / 2) % n];
  // Shifting by -pi/2 turns +E~_K cos(2 phi) into -E~_K cos(2 phi).
  for (int i = 0; i < n; ++i) biased[i] = kite[(i + 3 * n / 4) % n];

  const EffectiveEnergyPhase rel(kite, 1);
  const EffectiveEnergyPhase rel_biased(biased, 1);

  KiteFit fit;
  fit.e_j_tilde = -rel.cos_coeff(1);
  fit.e_k_tilde = rel.cos_coeff(2);
  fit.sine_residual = rel_biased.sin_coeff(1);
  fit.table = rel.fourier(1e-14);

  double outside = 0.0;
  for (int m = 1; m <= rel.max_order(); ++m) {
    fit.parity_residual = std::max(fit.parity_residual, std::abs(rel.sin_coeff(m)));
    outside += rel.sin_coeff(m) * rel.sin_coeff(m);
    if (m >= 3) outside += rel.cos_coeff(m) * rel.cos_coeff(m);
  }
  const double scale = std::max(std::abs(fit.e_j_tilde), std::abs(fit.e_k_tilde));
  fit.fit_residual = scale > 0.0 ? std::sqrt(outside) / scale : 0.0;
  if (fit.fit_residual > fit_tolerance) {
    throw KiteFitError("kite relation has harmonics beyond -E~_J cos + E~_K cos 2phi (residual " +
                           std::to_string(fit.fit_residual) + ")",
                       fit);
  }
  return fit;
}

double series_coefficient(double tau, int n) {
  switch (n) {
    case 1:
      return -tau * (1.0 - tau * tau / 8.0);
    case 2:
      return tau * tau / 4.0;
    case 3:
      return -tau * tau * tau / 8.0;
    default:
      throw std::out_of_range("series coefficients are tabulated for n = 1, 2, 3");
  }
}

}  // namespace fraxonium::synth
