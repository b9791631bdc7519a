#include "fraxonium/spectral_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fraxonium/errors.hpp"
#include "parallel.hpp"

namespace fraxonium::spectral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescale = 1.0e100;

// cos(pi k / 2) and sin(pi k / 2) for integer k, exactly.
int cos_quarter(int k) {
  static constexpr int table[4] = {1, 0, -1, 0};
  return table[((k % 4) + 4) % 4];
}
int sin_quarter(int k) {
  static constexpr int table[4] = {0, 1, 0, -1};
  return table[((k % 4) + 4) % 4];
}

// Flux-independent pieces of the Fock-space Hamiltonian.
struct HamiltonianParts {
  Eigen::VectorXd oscillator;                 // sqrt(8 E_C E_L) (n + 1/2)
  std::vector<Eigen::MatrixXd> displacement;  // D_mn(p sigma / sqrt 2), one per term
};

HamiltonianParts precompute(const CircuitSpec& spec) {
  spec.validate();
  const int n = spec.n_fock;
  HamiltonianParts parts;
  parts.oscillator.resize(n);
  const double w = spec.oscillator_frequency();
  for (int i = 0; i < n; ++i) parts.oscillator(i) = w * (i + 0.5);

  const double sigma = spec.sigma();
  for (const auto& term : spec.harmonics) {
    const double z = term.order * sigma / std::sqrt(2.0);
    Eigen::MatrixXd d(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c <= r; ++c) {
        const double v = displacement_element(r, c, z).real();
        d(r, c) = v;
        d(c, r) = ((r - c) % 2 == 0) ? v : -v;  // D_nm(z) = (-1)^(m-n) D_mn(z), z real
      }
    }
    parts.displacement.push_back(std::move(d));
  }
  return parts;
}

// <m| A cos(p (phi + phi_x) + theta) |n> = A D_mn cos(p phi_x + theta + pi (m - n)/2).
Eigen::MatrixXd assemble(const CircuitSpec& spec, const HamiltonianParts& parts, double phi_x) {
  const int n = spec.n_fock;
  Eigen::MatrixXd h = parts.oscillator.asDiagonal();
  for (std::size_t t = 0; t < spec.harmonics.size(); ++t) {
    const auto& term = spec.harmonics[t];
    const double alpha = term.order * phi_x + term.phase_offset;
    const double ca = term.amplitude * std::cos(alpha);
    const double sa = term.amplitude * std::sin(alpha);
    const auto& d = parts.displacement[t];
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) {
        const int k = r - c;
        h(r, c) += d(r, c) * (ca * cos_quarter(k) - sa * sin_quarter(k));
      }
    }
  }
  return h;
}

void fix_phase(Eigen::MatrixXcd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index idx = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&idx);
    const auto pivot = vectors(idx, j);
    if (std::abs(pivot) > 0.0) vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
  }
}

Eigensystem solve_real(const Eigen::MatrixXd& h, int k) {
  if (!h.allFinite()) throw NumericalError("Hamiltonian has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  Eigensystem out;
  out.energies = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k).cast<std::complex<double>>();
  fix_phase(out.vectors);
  return out;
}

double parity_expectation(const Eigen::VectorXcd& v) {
  double p = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) p += (i % 2 == 0 ? 1.0 : -1.0) * std::norm(v(i));
  return p;
}

}  // namespace

void CircuitSpec::validate() const {
  if (!(e_c > 0.0) || !(e_l > 0.0)) throw std::invalid_argument("E_C and E_L must be positive");
  if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
  for (const auto& t : harmonics) {
    if (t.order < 1) throw std::invalid_argument("harmonic orders must be >= 1");
  }
}

double CircuitSpec::sigma() const { return std::pow(8.0 * e_c / e_l, 0.25); }

double CircuitSpec::oscillator_frequency() const { return std::sqrt(8.0 * e_c * e_l); }

double CircuitSpec::plasma_frequency() const {
  const HarmonicTerm* dominant = nullptr;
  for (const auto& t : harmonics) {
    if (!dominant || std::abs(t.amplitude) > std::abs(dominant->amplitude)) dominant = &t;
  }
  if (!dominant || dominant->amplitude == 0.0) return oscillator_frequency();
  return dominant->order * std::sqrt(8.0 * e_c * std::abs(dominant->amplitude));
}

std::complex<double> displacement_element(int m, int n, std::complex<double> z) {
  if (m < 0 || n < 0) throw std::invalid_argument("Fock indices must be non-negative");
  const double x = std::norm(z);
  if (x == 0.0) return m == n ? 1.0 : 0.0;

  // m >= n: sqrt(n!/m!) z^(m-n) e^(-x/2) L_n^(m-n)(x)
  // m <= n: sqrt(m!/n!) (-z*)^(n-m) e^(-x/2) L_m^(n-m)(x)
  const bool lower = m >= n;
  const int j = lower ? n : m;
  const int k = std::abs(m - n);
  const std::complex<double> base = lower ? z : -std::conj(z);

  double log_scale = 0.5 * (std::lgamma(j + 1.0) - std::lgamma(j + k + 1.0)) +
                     k * std::log(std::abs(base)) - 0.5 * x;

  // Upward recurrence in the degree at fixed order k.
  double prev = 1.0;
  double cur = 1.0 + k - x;
  double lag = 1.0;
  if (j >= 1) {
    for (int i = 1; i < j; ++i) {
      const double next = ((2.0 * i + 1.0 + k - x) * cur - (i + k) * prev) / (i + 1.0);
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += std::log(kRescale);
      }
    }
    lag = cur;
  }
  if (lag == 0.0) return 0.0;
  const double magnitude = std::exp(log_scale + std::log(std::abs(lag)));
  const double sign = lag < 0.0 ? -1.0 : 1.0;
  return sign * magnitude * std::polar(1.0, k * std::arg(base));
}

FockOperator build_hamiltonian(const CircuitSpec& spec) {
  const auto parts = precompute(spec);
  const Eigen::MatrixXd h = assemble(spec, parts, spec.phi_x);
  FockOperator op;
  op.entries = h.cast<std::complex<double>>();
  const double scale = h.cwiseAbs().maxCoeff();
  op.hermitian = (h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  return op;
}

FockOperator phase_operator(int n_fock, double sigma) {
  FockOperator op;
  op.entries = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  const double s = sigma / std::sqrt(2.0);
  for (int i = 0; i + 1 < n_fock; ++i) {
    op.entries(i, i + 1) = s * std::sqrt(i + 1.0);
    op.entries(i + 1, i) = s * std::sqrt(i + 1.0);
  }
  op.hermitian = true;
  return op;
}

FockOperator charge_operator(int n_fock, double sigma) {
  // n = -i d/dphi = -i/(sigma sqrt 2) (a - a^dag)
  FockOperator op;
  op.entries = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  const double s = 1.0 / (sigma * std::sqrt(2.0));
  const std::complex<double> i_unit(0.0, 1.0);
  for (int i = 0; i + 1 < n_fock; ++i) {
    op.entries(i, i + 1) = -i_unit * s * std::sqrt(i + 1.0);
    op.entries(i + 1, i) = i_unit * s * std::sqrt(i + 1.0);
  }
  op.hermitian = true;
  return op;
}

FockOperator parity_operator(int n_fock) {
  FockOperator op;
  op.entries = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  for (int i = 0; i < n_fock; ++i) op.entries(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  op.hermitian = true;
  return op;
}

Eigensystem diagonalize(const FockOperator& h, int k) {
  if (k < 1 || k > h.dim()) throw std::invalid_argument("requested level count out of range");
  if (!h.entries.allFinite()) throw NumericalError("operator has non-finite entries");
  if (h.entries.imag().cwiseAbs().maxCoeff() == 0.0) return solve_real(h.entries.real(), k);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  Eigensystem out;
  out.energies = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  fix_phase(out.vectors);
  return out;
}

SpectrumSweep sweep_flux(const CircuitSpec& spec, std::span<const double> phix_grid, int k,
                         bool with_parity) {
  if (phix_grid.empty()) throw std::invalid_argument("flux grid is empty");
  if (k < 1 || k > spec.n_fock) throw std::invalid_argument("level count out of range");
  const auto parts = precompute(spec);

  SpectrumSweep out;
  out.phix.assign(phix_grid.begin(), phix_grid.end());
  out.energies.resize(phix_grid.size());
  std::vector<std::vector<double>> parities(with_parity ? phix_grid.size() : 0);

  detail::parallel_for(phix_grid.size(), [&](std::size_t i) {
    const auto es = solve_real(assemble(spec, parts, phix_grid[i]), k);
    out.energies[i].assign(es.energies.data(), es.energies.data() + k);
    if (with_parity) {
      parities[i].resize(k);
      for (int j = 0; j < k; ++j) parities[i][j] = parity_expectation(es.vectors.col(j));
    }
  });
  if (with_parity) out.parities = std::move(parities);
  return out;
}

DipoleChart dipole_chart(const CircuitSpec& spec, int k) {
  const auto es = diagonalize(build_hamiltonian(spec), k);
  const auto phi_op = phase_operator(spec.n_fock, spec.sigma());
  const auto n_op = charge_operator(spec.n_fock, spec.sigma());

  DipoleChart chart;
  chart.levels = k;
  chart.energies = es.energies;
  chart.omega_p = spec.plasma_frequency();
  // The gauge phi -> phi + phi_x shifts only the diagonal of the phase operator.
  chart.phi = es.vectors.adjoint() * phi_op.entries * es.vectors;
  chart.phi.diagonal().array() += spec.phi_x;
  chart.charge = es.vectors.adjoint() * n_op.entries * es.vectors;
  chart.omega.resize(k, k);
  chart.parity.resize(k);
  for (int a = 0; a < k; ++a) {
    chart.parity(a) = parity_expectation(es.vectors.col(a));
    for (int b = 0; b < k; ++b) {
      chart.omega(a, b) = std::abs(es.energies(a) - es.energies(b)) / chart.omega_p;
    }
  }
  return chart;
}

std::vector<DipoleSample> dipole_vs_flux(const CircuitSpec& spec,
                                         std::span<const std::pair<int, int>> pairs,
                                         std::span<const double> phix_grid) {
  if (pairs.empty() || phix_grid.empty()) throw std::invalid_argument("empty pair list or grid");
  int top = 0;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0) throw std::invalid_argument("negative level index");
    top = std::max({top, a, b});
  }
  const int k = std::min(spec.n_fock, top + 2);
  const auto parts = precompute(spec);
  const auto phi_op = phase_operator(spec.n_fock, spec.sigma());
  const auto n_op = charge_operator(spec.n_fock, spec.sigma());
  const double wp = spec.plasma_frequency();

  std::vector<std::vector<DipoleSample>> per_point(phix_grid.size());
  detail::parallel_for(phix_grid.size(), [&](std::size_t p) {
    const double phix = phix_grid[p];
    const auto es = solve_real(assemble(spec, parts, phix), k);
    const auto sample = [&](int a, int b, bool ambiguous) {
      DipoleSample s;
      s.phix = phix;
      s.alpha = a;
      s.beta = b;
      s.phi = es.vectors.col(a).dot(phi_op.entries * es.vectors.col(b));
      if (a == b) s.phi += phix;
      s.charge = es.vectors.col(a).dot(n_op.entries * es.vectors.col(b));
      s.omega = std::abs(es.energies(a) - es.energies(b)) / wp;
      s.ambiguous = ambiguous;
      return s;
    };
    const auto crossing_partner = [&](int i) {
      if (i + 1 < k && std::abs(es.energies(i + 1) - es.energies(i)) < 1e-9) return i + 1;
      if (i > 0 && std::abs(es.energies(i) - es.energies(i - 1)) < 1e-9) return i - 1;
      return -1;
    };
    for (const auto& [a, b] : pairs) {
      const int pa = crossing_partner(a);
      const int pb = crossing_partner(b);
      const bool ambiguous = pa >= 0 || pb >= 0;
      per_point[p].push_back(sample(a, b, ambiguous));
      if (ambiguous) {
        per_point[p].push_back(sample(pa >= 0 ? pa : a, pb >= 0 ? pb : b, true));
      }
    }
  });

  std::vector<DipoleSample> out;
  for (auto& v : per_point) out.insert(out.end(), v.begin(), v.end());
  return out;
}

ConvergenceReport convergence_check(const CircuitSpec& spec, int k, int n1, int n2,
                                    double tolerance) {
  if (n2 <= n1) throw std::invalid_argument("convergence check needs n2 > n1");
  if (k > n1) throw std::invalid_argument("level count exceeds the smaller basis");
  CircuitSpec a = spec, b = spec;
  a.n_fock = n1;
  b.n_fock = n2;
  const auto ea = diagonalize(build_hamiltonian(a), k).energies;
  const auto eb = diagonalize(build_hamiltonian(b), k).energies;
  ConvergenceReport r;
  r.max_shift = (ea - eb).cwiseAbs().maxCoeff();
  r.converged = r.max_shift < tolerance;
  return r;
}

}  // namespace fraxonium::spectral
