#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fraxonium/fraxon_tb.hpp"
#include "fraxonium/potential_forge.hpp"

using namespace fraxonium;
using namespace fraxonium::tb;

namespace {

constexpr double kPi = std::numbers::pi;

TbParams qutrit(double eta, double e_c, int order = 0) {
  return {forge::solve_coefficients({3, eta, order}), e_c};
}

// Ground-band charge dispersion E_0(n_g = 1/2) - E_0(0) of a cosine well.
double transmon_dispersion(double e_j, double e_c) {
  const int n = 41;
  auto ground = [&](double ng) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const double q = i - n / 2 - ng;
      h(i, i) = 4.0 * e_c * q * q;
      if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = -0.5 * e_j;
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues()(0);
  };
  return ground(0.5) - ground(0.0);
}

TightBindingModel flat_model(int d, double eps, double t) {
  TightBindingModel m;
  m.d = d;
  m.eps.assign(d, eps);
  m.hop.t = t;
  return m;
}

}  // namespace

TEST(FraxonTb, WkbClosedForm) {
  // 8 E_J / E_C = 100.
  const double e_j = 1.0, e_c = 0.08;
  const double wp = std::sqrt(8.0 * e_c * e_j);
  const double t = wkb_hopping(e_j, e_c);
  EXPECT_NEAR(t / wp, 2.0 * std::sqrt(2.0 / kPi) * std::sqrt(10.0) * std::exp(-10.0), 1e-15);
  EXPECT_NEAR(t / wp, 2.2910e-4, 1e-7);
  EXPECT_THROW(wkb_hopping(0.0, 1.0), std::invalid_argument);
}

TEST(FraxonTb, WkbTracksHalfTransmonDispersion) {
  for (double e_c : {0.08, 0.05, 0.03}) {
    const double ratio = wkb_hopping(1.0, e_c) / (0.5 * transmon_dispersion(1.0, e_c));
    EXPECT_NEAR(ratio, 1.0, 0.15) << "E_C=" << e_c;
  }
}

TEST(FraxonTb, HoppingDecreasesWithRatio) {
  double prev = INFINITY;
  for (double r = 2.0; r < 400.0; r *= 1.3) {
    const double t = wkb_hopping(r / 8.0, 1.0);
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(FraxonTb, QutritEffectivePeriod) {
  EXPECT_DOUBLE_EQ(hopping(qutrit(0.0, 0.08)).inverse_period, 2.0);
  for (double eta : {0.02, 0.06}) {
    EXPECT_NEAR(hopping(qutrit(eta, 0.08)).inverse_period, 2.0 / (1.0 - eta / 4.0), 1e-12);
  }
}

TEST(FraxonTb, QutritMinimaPositions) {
  const auto p = qutrit(0.06, 0.08);
  for (int l : {-1, 0, 1}) {
    for (double phix : {0.0, 0.4}) {
      EXPECT_NEAR(minimum_position(p, l, phix), kPi * l - 0.06 * (kPi * l - phix) / 4.0, 1e-12);
    }
  }
  EXPECT_THROW(minimum_position(p, 2, 0.0), std::out_of_range);
}

TEST(FraxonTb, EffectiveEnergies) {
  const auto p = qutrit(0.06, 0.08);
  const auto h = hopping(p);
  EXPECT_NEAR(h.e_j_bar, h.e_l_bar / (h.inverse_period * h.inverse_period), 1e-15);
  EXPECT_NEAR(h.e_c_bar, h.inverse_period * h.inverse_period * 0.08, 1e-15);
  EXPECT_NEAR(h.ell, std::pow(8.0 * 0.08 / h.e_l_bar, 0.25), 1e-15);
  EXPECT_GT(h.t, 0.0);
  EXPECT_LT(h.overlap, 0.01);
  EXPECT_LE(h.t_min, h.t);
  EXPECT_GE(h.t_max, h.t);
  // Curvature oracle: second finite difference of the potential at the minimum.
  const double phi = minimum_position(p, 0, 0.0);
  const double step = 1e-4;
  const double curv = (forge::evaluate_potential(p.potential, phi + step, 0.0) -
                       2.0 * forge::evaluate_potential(p.potential, phi, 0.0) +
                       forge::evaluate_potential(p.potential, phi - step, 0.0)) /
                      (step * step);
  EXPECT_NEAR(h.e_l_bar, curv, 1e-6);
}

TEST(FraxonTb, WkbWarningBelowThreshold) {
  EXPECT_FALSE(hopping(qutrit(0.06, 0.08)).warnings.empty());
  EXPECT_TRUE(hopping(qutrit(0.06, 0.01)).warnings.empty());
}

TEST(FraxonTb, SimpleModeAtOriginIsE0) {
  const auto p = qutrit(0.04, 0.08);
  const double phi0 = minimum_position(p, 0, 0.0);
  const double e0 = 0.5 * std::sqrt(8.0 * 0.08 * effective_inductive_energy(p, 0, 0.0)) +
                    forge::evaluate_potential(p.potential, phi0, 0.0);
  EXPECT_NEAR(onsite_energy(p, 0, 0.0, OnsiteMode::Simple), e0, 1e-15);
  // Engineered degeneracy: same E_0 for the outer wells at zero flux.
  EXPECT_NEAR(onsite_energy(p, 1, 0.0, OnsiteMode::Simple), e0, 1e-12);
}

TEST(FraxonTb, SimpleModeParabolaVertices) {
  const auto p = qutrit(0.04, 0.08);
  for (int l : {-1, 1}) {
    // Vertex of a parabola sampled at three points.
    const double a = onsite_energy(p, l, -1.0, OnsiteMode::Simple);
    const double b = onsite_energy(p, l, 0.0, OnsiteMode::Simple);
    const double c = onsite_energy(p, l, 1.0, OnsiteMode::Simple);
    const double vertex = 0.5 * (a - c) / (a - 2.0 * b + c);
    EXPECT_NEAR(vertex, minimum_position(p, l, 0.0), 1e-10);
    EXPECT_NEAR(vertex, kPi * l, 0.04 * kPi);
  }
}

TEST(FraxonTb, ExpectationModeVerticesNearMinima) {
  const auto p = qutrit(0.04, 0.08);
  for (int l : {-1, 1}) {
    double best = INFINITY, arg = 0.0;
    for (int i = -4000; i <= 4000; ++i) {
      const double phix = kPi * l + 1e-3 * i;
      const double e = onsite_energy(p, l, phix, OnsiteMode::Expectation);
      if (e < best) {
        best = e;
        arg = phix;
      }
    }
    EXPECT_NEAR(arg, minimum_position(p, l, 0.0), 0.1) << "l=" << l;
  }
}

TEST(FraxonTb, OnsiteSymmetricUnderReflection) {
  const auto p = TbParams{forge::solve_coefficients({5, 0.04, 0}), 0.01};
  for (auto mode : {OnsiteMode::Simple, OnsiteMode::Expectation}) {
    for (int l = 1; l <= 2; ++l) {
      EXPECT_NEAR(onsite_energy(p, l, 0.0, mode), onsite_energy(p, -l, 0.0, mode), 1e-12);
    }
  }
}

TEST(FraxonTb, ThreeSiteAnalyticSpectrum) {
  const auto ev = flat_model(3, 0.2, 0.01).eigenvalues();
  EXPECT_NEAR(ev(0), 0.2 - std::sqrt(2.0) * 0.01, 1e-15);
  EXPECT_NEAR(ev(1), 0.2, 1e-15);
  EXPECT_NEAR(ev(2), 0.2 + std::sqrt(2.0) * 0.01, 1e-15);
}

TEST(FraxonTb, FiveSiteAnalyticSpectrum) {
  const double t = 0.003;
  const auto ev = flat_model(5, -0.1, t).eigenvalues();
  const double expected[] = {-std::sqrt(3.0), -1.0, 0.0, 1.0, std::sqrt(3.0)};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(ev(i), -0.1 + expected[i] * t, 1e-15);
}

TEST(FraxonTb, ModelStructure) {
  const auto m = build_model(TbParams{forge::solve_coefficients({4, 0.04, 0}), 0.01}, 0.2);
  const auto h = m.matrix();
  EXPECT_EQ(m.d, 4);
  EXPECT_EQ(m.labels, (std::vector<int>{-2, -1, 0, 1}));
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-16);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(i - j) == 1) {
        EXPECT_DOUBLE_EQ(h(i, j), -m.hop.t);
      } else if (i != j) {
        EXPECT_EQ(h(i, j), 0.0);
      }
    }
  }
}

TEST(FraxonTb, ParityEigenvectorsAtZeroFlux) {
  const auto m = build_model(qutrit(0.06, 0.08), 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  for (int j = 0; j < 3; ++j) {
    const auto v = es.eigenvectors().col(j);
    EXPECT_NEAR(std::abs(v(0)), std::abs(v(2)), 1e-12);
  }
}

TEST(FraxonTb, DeviationShrinksWithEta) {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-kPi / 2.0 + kPi * i / 20.0);
  double prev = INFINITY;
  for (double eta : {0.06, 0.04, 0.02, 0.01}) {
    const auto r = compare_with_exact(qutrit(eta, 0.08), grid);
    EXPECT_LT(r.mean_deviation, prev) << "eta=" << eta;
    prev = r.mean_deviation;
  }
}

TEST(FraxonTb, ParabolaBranchesAwayFromOrigin) {
  // Far from the anticrossing the branch slopes agree with the exact ones.
  const std::vector<double> grid{1.2, 1.5};
  const auto r = compare_with_exact(qutrit(0.06, 0.08), grid);
  for (int j = 0; j < 3; ++j) {
    const double slope_tb = r.tb[1][j] - r.tb[0][j];
    const double slope_exact = r.exact[1][j] - r.exact[0][j];
    EXPECT_NEAR(slope_tb, slope_exact, 0.1 * std::abs(slope_exact) + 2e-3) << "level " << j;
  }
}

TEST(FraxonTb, SplittingRatioFrozen) {
  const std::vector<double> grid{0.0};
  const auto r = compare_with_exact(qutrit(0.06, 0.08), grid);
  EXPECT_NEAR(r.splitting_ratio, 0.4478, 2e-3);
  EXPECT_NEAR(r.t_exact, r.t_tb * r.splitting_ratio, 1e-15);
  EXPECT_NEAR(r.tb[0][0], 0.0, 1e-15);
  EXPECT_NEAR(r.exact[0][0], 0.0, 1e-15);
}
