#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "membrane/extremal_ops.hpp"
#include "membrane/traveling_waves.hpp"

using namespace membrane;

namespace {

PointJet random_jet(std::mt19937_64& rng, double scale = 0.3) {
  std::uniform_real_distribution<double> d(-scale, scale);
  PointJet j;
  j.value = d(rng);
  j.d_t = d(rng), j.d_x1 = d(rng), j.d_x2 = d(rng);
  j.d_tt = d(rng), j.d_tx1 = d(rng), j.d_tx2 = d(rng);
  j.d_x1x1 = d(rng), j.d_x1x2 = d(rng), j.d_x2x2 = d(rng);
  return j;
}

// Product-rule expansion of d_t(v_t/sqrt(D)) - div(grad v/sqrt(D)), written out by hand.
double residual_by_hand(const PointJet& j) {
  const double D = 1 + j.d_x1 * j.d_x1 + j.d_x2 * j.d_x2 - j.d_t * j.d_t;
  const double Dt = 2 * (j.d_x1 * j.d_tx1 + j.d_x2 * j.d_tx2 - j.d_t * j.d_tt);
  const double D1 = 2 * (j.d_x1 * j.d_x1x1 + j.d_x2 * j.d_x1x2 - j.d_t * j.d_tx1);
  const double D2 = 2 * (j.d_x1 * j.d_x1x2 + j.d_x2 * j.d_x2x2 - j.d_t * j.d_tx2);
  const double lin = (j.d_tt - j.d_x1x1 - j.d_x2x2) / std::sqrt(D);
  const double corr = (j.d_t * Dt - j.d_x1 * D1 - j.d_x2 * D2) / (2 * D * std::sqrt(D));
  return lin - corr;
}

}  // namespace

TEST(Delta, Definition) {
  PointJet j;
  j.d_t = 0.5, j.d_x1 = 0.3, j.d_x2 = -0.2;
  EXPECT_NEAR(delta_factor(j), 1 + 0.09 + 0.04 - 0.25, 1e-15);
}

TEST(Residual, MatchesHandExpansion) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const PointJet j = random_jet(rng);
    EXPECT_NEAR(membrane_residual(j), residual_by_hand(j), 1e-12);
  }
}

TEST(Residual, SignatureFormAgrees) {
  std::mt19937_64 rng(8);
  const double sigma[] = {1, -1, -1};
  for (int k = 0; k < 50; ++k) {
    const PointJet j = random_jet(rng);
    const double grad[] = {j.d_t, j.d_x1, j.d_x2};
    const double hess[] = {j.d_tt, j.d_tx1, j.d_tx2, j.d_tx1, j.d_x1x1, j.d_x1x2, j.d_tx2, j.d_x1x2, j.d_x2x2};
    EXPECT_NEAR(signature_residual(sigma, grad, hess), membrane_residual(j), 1e-12);
  }
  // Euclidean signature: minimal-surface operator of a plane vanishes
  const double s2[] = {-1, -1};
  const double g2[] = {0.4, -1.2};
  const double h2[] = {0, 0, 0, 0};
  EXPECT_EQ(signature_residual(s2, g2, h2), 0.0);
}

TEST(Residual, DegenerateJetThrows) {
  PointJet j;
  j.d_t = 1.5;
  EXPECT_THROW((void)membrane_residual(j), DegenerateSurfaceError);
  EXPECT_THROW((void)solve_vtt(j), DegenerateSurfaceError);
}

TEST(NullForm, CartesianEqualsGoursat) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const PointJet a = random_jet(rng, 2.0), b = random_jet(rng, 2.0);
    const double c = null_form_cartesian(a, b);
    EXPECT_NEAR(null_form_goursat(GoursatJet::from_cartesian(a), GoursatJet::from_cartesian(b)), c, 1e-12);
  }
}

TEST(NullForm, VanishesOnNullPlaneWaves) {
  PointJet a, b;  // functions of t + x1 only
  a.d_t = a.d_x1 = 0.7;
  b.d_t = b.d_x1 = -1.3;
  EXPECT_EQ(null_form_cartesian(a, b), 0.0);
}

TEST(GoursatJet, RoundTrip) {
  std::mt19937_64 rng(10);
  const PointJet j = random_jet(rng);
  const PointJet r = GoursatJet::from_cartesian(j).to_cartesian();
  EXPECT_NEAR(r.d_t, j.d_t, 1e-15);
  EXPECT_NEAR(r.d_tx1, j.d_tx1, 1e-15);
  EXPECT_NEAR(r.d_x1x1, j.d_x1x1, 1e-15);
  EXPECT_NEAR(r.d_tx2, j.d_tx2, 1e-15);
  // xi = t + x1: v = xi gives d_xi = 1
  PointJet x;
  x.d_t = 1, x.d_x1 = 1;
  const GoursatJet g = GoursatJet::from_cartesian(x);
  EXPECT_NEAR(g.d_xi, 1.0, 1e-15);
  EXPECT_NEAR(g.d_eta, 0.0, 1e-15);
}

TEST(Metric, QuasilinearFormIsScaledResidual) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const PointJet j = random_jet(rng);
    const double D = delta_factor(j);
    const double r = membrane_residual(j);
    EXPECT_NEAR(apply_metric(quasilinear_coeffs(j), j), D * std::sqrt(D) * r, 1e-12 * (1 + std::abs(r)));
  }
}

TEST(Metric, SolveVttZeroesResidual) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 50; ++k) {
    PointJet j = random_jet(rng);
    j.d_tt = solve_vtt(j, 0.25);
    EXPECT_NEAR(membrane_residual(j), 0.25, 1e-12);
  }
}

TEST(BoxForm, ExactSurfaceSatisfiesNullFormEquation) {
  const auto sol = superluminal_solution(WaveProfile::sech(0.8), 1.7);
  for (double x : {-0.5, 0.1, 0.9}) {
    const PointJet v = sol.point_jet(0.3, x, 0.2 - x);
    EXPECT_NEAR(v.d_tt - v.d_x1x1 - v.d_x2x2, box_rhs(v), 1e-12);
  }
}

TEST(Perturbed, CartesianRhsIsExactForUntiltedBackground) {
  const auto sol = superluminal_solution(WaveProfile::sech(0.6), 2.0);
  const auto F = WaveProfile::sech(0.5);
  for (double x2 : {-0.7, 0.0, 0.4}) {
    const double t = 0.2, x1 = 0.35;
    BackgroundJet bg;
    bg.a = 0.0, bg.b = 1.1, bg.x2 = x2;
    bg.F = F.eval(x1 + t), bg.dF = F.d1(x1 + t), bg.ddF = F.d2(x1 + t);
    const PointJet u = sol.point_jet(t, x1, x2) - bg.jet();
    EXPECT_NEAR(u.d_tt - u.d_x1x1 - u.d_x2x2, perturbed_rhs_cartesian(u, bg), 1e-12);
  }
}

TEST(Perturbed, GoursatRhsIsExact) {
  const auto sol = superluminal_solution(WaveProfile::sech(0.6), 2.0);
  const auto F = WaveProfile::sech(0.5);
  const double t = -0.1, x1 = 0.4, x2 = 0.3;
  BackgroundJet bg;
  bg.F = F.eval(x1 + t), bg.dF = F.d1(x1 + t), bg.ddF = F.d2(x1 + t);
  const PointJet u = sol.point_jet(t, x1, x2) - bg.jet();
  const GoursatJet g = GoursatJet::from_cartesian(u);
  const double box = u.d_tt - u.d_x1x1 - u.d_x2x2;
  EXPECT_NEAR(box - 4 * bg.dF * bg.dF * g.d_etaeta, perturbed_rhs_goursat(g, bg.dF, bg.ddF), 1e-12);
  EXPECT_NEAR(varsigma_goursat(g, bg.dF), null_form_cartesian(u, u) + 2 * bg.dF * (u.d_t - u.d_x1), 1e-13);
}

TEST(Perturbed, DegenerateVarsigmaThrows) {
  PointJet u;
  u.d_t = 1.2;
  BackgroundJet bg;
  EXPECT_THROW((void)perturbed_rhs_cartesian(u, bg), DegenerateSurfaceError);
}
