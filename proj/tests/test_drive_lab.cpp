#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "fraxonium/drive_lab.hpp"
#include "fraxonium/errors.hpp"
#include "fraxonium/spectral_engine.hpp"

using namespace fraxonium;
using namespace fraxonium::drive;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

State basis(int i) {
  State s = State::Zero();
  s(i) = 1.0;
  return s;
}

PulseSchedule constant(double o0, double o1, double o2, double duration) {
  PulseSchedule s;
  s.duration = duration;
  s.legs = {{1.0,
             {Ramp{RampShape::Constant, o0, o0}, Ramp{RampShape::Constant, o1, o1},
              Ramp{RampShape::Constant, o2, o2}}}};
  return s;
}

// Solid angle enclosed by the normalized coupling vector, seen from Omega_1,
// by direct quadrature of (1 - cos theta) d(azimuth).
double solid_angle(const PulseSchedule& s, int samples) {
  double total = 0.0;
  auto angles = [&](double t) {
    const auto c = s.at(t).couplings;
    const double r = std::hypot(c[0].real(), c[2].real());
    return std::pair{std::atan2(c[0].real(), c[2].real()), c[1].real() / std::hypot(r, c[1].real())};
  };
  auto off_axis = [&](double t) {
    const auto c = s.at(t).couplings;
    return std::hypot(c[0].real(), c[2].real()) > 1e-14;
  };
  for (int k = 0; k < samples; ++k) {
    const double t0 = s.duration * k / samples, t1 = s.duration * (k + 1) / samples;
    if (!off_axis(t0) || !off_axis(t1)) continue;
    const auto [a0, c0] = angles(t0);
    const auto [a1, c1] = angles(t1);
    total += (1.0 - 0.5 * (c0 + c1)) * (a1 - a0);
  }
  return std::abs(total);
}

}  // namespace

TEST(DriveLab, HamiltonianStructure) {
  TripodSystem sys;
  sys.couplings = {cd(0.3, 0.1), cd(1.0, 0.0), cd(0.0, -0.5)};
  const auto h = sys.hamiltonian();
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_EQ(h(3, 0), cd(0.3, 0.1));
  EXPECT_EQ(h(0, 3), cd(0.3, -0.1));
  EXPECT_EQ((h.topLeftCorner<3, 3>().cwiseAbs().maxCoeff()), 0.0);
}

TEST(DriveLab, RampShapes) {
  EXPECT_DOUBLE_EQ((Ramp{RampShape::SineSquared, 1.0, 3.0}.value(0.5)), 2.0);
  EXPECT_DOUBLE_EQ((Ramp{RampShape::Linear, 1.0, 3.0}.value(0.25)), 1.5);
  EXPECT_DOUBLE_EQ((Ramp{RampShape::Constant, 1.0, 3.0}.value(0.7)), 1.0);
}

TEST(DriveLab, ScheduleValidation) {
  auto s = default_cycle(100.0);
  EXPECT_NO_THROW(s.validate());
  s.legs[1].omega[0].from = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(default_cycle(-1.0).validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(default_cycle(100.0).step(), 1e-3);
}

TEST(DriveLab, DefaultCycleKeepsOmega1Constant) {
  const auto s = default_cycle(300.0);
  for (int k = 0; k <= 100; ++k) EXPECT_EQ(s.at(3.0 * k).couplings[1], cd(1.0, 0.0));
  EXPECT_NEAR(std::abs(s.at(100.0).couplings[2]), kDefaultCyclePeak, 1e-12);
  EXPECT_NEAR(std::abs(s.at(200.0).couplings[0]), kDefaultCyclePeak, 1e-12);
}

TEST(DriveLab, ZeroCouplingsGiveIdentity) {
  const State psi = (basis(0) + cd(0.0, 1.0) * basis(2)).normalized();
  const auto tr = propagate(constant(0.0, 0.0, 0.0, 10.0), psi, {});
  EXPECT_LT((tr.final_state - psi).norm(), 1e-14);
}

TEST(DriveLab, DecoupledLevelStaysPut) {
  const auto tr = propagate(constant(0.0, 1.0, 0.0, 20.0), basis(0), {});
  for (const auto& p : tr.populations) EXPECT_NEAR(p[0], 1.0, 1e-14);
}

TEST(DriveLab, PropagatorMatchesExponential) {
  const auto s = constant(0.4, 1.0, -0.7, 3.0);
  const State psi = basis(1);
  const auto tr = propagate(s, psi, {});
  const Eigen::Matrix4cd u = (cd(0.0, -3.0) * s.at(0.0).hamiltonian()).exp();
  EXPECT_LT((tr.final_state - u * psi).norm(), 1e-10);
}

TEST(DriveLab, NormPreserved) {
  const auto tr = propagate(default_cycle(150.0), basis(0), {});
  EXPECT_LT(tr.max_norm_drift, 1e-9);
  for (const auto& p : tr.populations) EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-9);
  EXPECT_THROW(propagate(default_cycle(10.0), 2.0 * basis(0), {}), std::invalid_argument);
}

TEST(DriveLab, TraceSampling) {
  PropagateOptions opt;
  opt.trace_points = 11;
  const auto tr = propagate(default_cycle(30.0), basis(0), opt);
  EXPECT_EQ(tr.times.size(), 11u);
  EXPECT_DOUBLE_EQ(tr.times.front(), 0.0);
  EXPECT_NEAR(tr.times.back(), 30.0, 1e-9);
}

TEST(DriveLab, DarkStatesSpecialCases) {
  const auto d = dark_subspace({cd(0.0), cd(1.0), cd(0.0)});
  EXPECT_NEAR(std::abs(d(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(d(2, 1)), 1.0, 1e-15);

  const auto e = dark_subspace({cd(1.0), cd(1.0), cd(1.0)});
  const Eigen::Vector4cd bright(1.0, 1.0, 1.0, 0.0);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(bright.dot(e.col(j))), 0.0, 1e-15);
  EXPECT_THROW(dark_subspace({cd(0.0), cd(0.0), cd(0.0)}), std::invalid_argument);
}

TEST(DriveLab, DarkStatesAnnihilatedByHamiltonian) {
  for (int seed = 0; seed < 20; ++seed) {
    const double a = 0.37 * seed, b = 1.3 - 0.05 * seed;
    TripodSystem sys;
    sys.couplings = {cd(std::cos(a), std::sin(b)), cd(0.8, -0.2 * seed), cd(b, a)};
    const auto d = dark_subspace(sys.couplings);
    EXPECT_LT((sys.hamiltonian() * d).norm(), 1e-12 * sys.omega_bar());
    EXPECT_LT((d.adjoint() * d - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
  }
}

TEST(DriveLab, ContinuationMaximisesOverlap) {
  const auto prev = dark_subspace({cd(0.2), cd(1.0), cd(0.1)});
  const auto next = dark_subspace({cd(0.21), cd(1.0), cd(0.11)}, prev);
  const Eigen::Matrix2cd m = next.adjoint() * prev;
  EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
  EXPECT_GT(m.trace().real(), 1.99);
}

TEST(DriveLab, RetracedLoopHasTrivialHolonomy) {
  const auto h = holonomy_oracle(retrace_cycle(500.0));
  EXPECT_LT((h.unitary - Eigen::Matrix2cd::Identity()).norm(), 1e-8);
}

TEST(DriveLab, DefaultCycleRotatesByQuarterPi) {
  const auto h = holonomy_oracle(default_cycle(500.0));
  EXPECT_NEAR(h.rotation_angle, kPi / 4.0, 1e-6);
  EXPECT_NEAR(h.min_adiabaticity, 500.0, 1e-9);
  EXPECT_TRUE(h.warnings.empty());
}

TEST(DriveLab, HolonomyEqualsSolidAngle) {
  for (double peak : {0.7, 1.5, kDefaultCyclePeak, 4.0}) {
    const auto s = default_cycle(1.0, peak);
    EXPECT_NEAR(holonomy_oracle(s).rotation_angle, solid_angle(s, 200000), 1e-5) << peak;
  }
}

TEST(DriveLab, OpenLoopRejected) {
  auto s = default_cycle(100.0);
  s.legs.pop_back();
  EXPECT_THROW(holonomy_oracle(s), std::invalid_argument);
}

TEST(DriveLab, ShortCycleWarns) {
  EXPECT_FALSE(holonomy_oracle(default_cycle(5.0)).warnings.empty());
}

TEST(DriveLab, FidelityImprovesWithDuration) {
  double prev = 0.0;
  for (double T : {50.0, 150.0, 500.0}) {
    const auto s = default_cycle(T);
    const auto tr = propagate(s, basis(0), {});
    const double f = fidelity(holonomy_prediction(holonomy_oracle(s), basis(0)), tr.final_state);
    EXPECT_GT(f, prev);
    prev = f;
  }
  EXPECT_GT(prev, 0.9999);
}

TEST(DriveLab, LeakageDecreasesWithDuration) {
  double prev = 1.0;
  for (double T : {50.0, 150.0, 500.0}) {
    const double leak = propagate(default_cycle(T), basis(0), {}).leakage;
    EXPECT_LT(leak, prev) << "T=" << T;
    prev = leak;
  }
}

TEST(DriveLab, RescalingInvariance) {
  const auto base = propagate(default_cycle(500.0), basis(0), {});
  for (double kappa : {0.5, 2.0}) {
    const auto tr = propagate(rescaled(default_cycle(500.0), kappa), basis(0), {});
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(tr.populations.back()[i], base.populations.back()[i], 1e-3);
    }
  }
}

TEST(DriveLab, RwaFeasibilityFlagsParityForbiddenTransition) {
  const auto chart = spectral::dipole_chart(spectral::make_preset("qutrit", {.n_fock = 120}), 6);
  const std::vector<std::pair<int, int>> pairs{{0, 5}, {1, 5}, {2, 5}};
  const auto r = rwa_feasibility(chart, 0.01, pairs, 5000.0);
  ASSERT_EQ(r.transitions.size(), 3u);
  EXPECT_FALSE(r.transitions[0].forbidden);
  EXPECT_TRUE(r.transitions[1].forbidden);
  EXPECT_FALSE(r.transitions[2].forbidden);
  EXPECT_FALSE(r.feasible);
  EXPECT_DOUBLE_EQ(r.adiabaticity, 50.0);
  EXPECT_NEAR(r.transitions[0].rwa_ratio, 0.01 / (chart.energies(5) - chart.energies(0)), 1e-15);

  const auto detuned =
      spectral::dipole_chart(spectral::make_preset("qutrit", {.n_fock = 120, .phi_x = 0.1}), 6);
  EXPECT_FALSE(rwa_feasibility(detuned, 0.01, pairs, 5000.0).transitions[1].forbidden);
  const std::vector<std::pair<int, int>> bad{{0, 9}};
  EXPECT_THROW(rwa_feasibility(chart, 0.01, bad, 1.0), std::out_of_range);
}

TEST(DriveLab, RwaRatioFlag) {
  const auto chart = spectral::dipole_chart(spectral::make_preset("qutrit"), 6);
  const std::vector<std::pair<int, int>> pairs{{0, 5}};
  EXPECT_TRUE(rwa_feasibility(chart, 1.0, pairs, 10.0).transitions[0].rwa_violated);
}

TEST(DriveLab, DriveStrengthHelper) {
  const auto spec = spectral::make_preset("qutrit", {.phi_x = 0.05});
  const auto chart = spectral::dipole_chart(spec, 6);
  const auto s = drive_strength(spec, chart, 0, 5, 0.01, 0.2);
  EXPECT_NEAR(std::abs(s.flux), 0.01 * spec.e_l * std::abs(chart.phi(0, 5)), 1e-15);
  EXPECT_NEAR(std::abs(s.charge), 8.0 * spec.e_c * 0.2 * std::abs(chart.charge(0, 5)), 1e-15);
}
