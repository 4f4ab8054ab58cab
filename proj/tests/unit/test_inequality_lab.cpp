#include <cmath>

#include <gtest/gtest.h>

#include "membrane/inequality_lab.hpp"

using namespace membrane;

namespace {

double b(double s) { return std::abs(s) < 1 ? std::exp(-1 / (1 - s * s)) : 0.0; }
double db(double s) { return std::abs(s) < 1 ? b(s) * (-2 * s / ((1 - s * s) * (1 - s * s))) : 0.0; }

const SampleSpec kCoarse{13, 3, 201};

}  // namespace

TEST(ConeBump, PartialsMatchClosedForm) {
  const ConeBump phi{2.0, {5.0, 4.0, 0.3}, {1.0, 0.5, 0.8}};
  const double xi = 5.3, eta = 3.8, x2 = 0.1;
  const double sa = (xi - 5.0) / 1.0, sb = (eta - 4.0) / 0.5, sc = (x2 - 0.3) / 0.8;
  EXPECT_NEAR(phi.partial({0, 0, 0}, xi, eta, x2), 2 * b(sa) * b(sb) * b(sc), 1e-15);
  EXPECT_NEAR(phi.partial({0, 1, 0}, xi, eta, x2), 2 * b(sa) * db(sb) / 0.5 * b(sc), 1e-13);
  EXPECT_NEAR(phi.partial({1, 0, 1}, xi, eta, x2), 2 * db(sa) * b(sb) * db(sc) / 0.8, 1e-13);
  EXPECT_EQ(phi.partial({0, 0, 0}, 7.0, eta, x2), 0.0);
  EXPECT_THROW((void)phi.partial({9, 0, 0}, xi, eta, x2), std::invalid_argument);
}

TEST(ConeBump, ConeMembership) {
  EXPECT_TRUE(standard_bump().inside_cone());
  EXPECT_FALSE(standard_bump(-0.5, 5.0).inside_cone());
  ConeBump wide = standard_bump(0.5, 0.5);
  wide.width[2] = 3.0;
  EXPECT_FALSE(wide.inside_cone());
  EXPECT_EQ(standard_bump().translated(1, 9.0).center[1], 9.0);
  EXPECT_EQ(standard_bump().scaled(3.0).amplitude, 3.0);
}

TEST(Family, SeededAndInsideCone) {
  ConeBumpFamily f;
  f.count = 20;
  const auto a = f.members(), b2 = f.members();
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].inside_cone());
    EXPECT_EQ(a[i].center, b2[i].center);
    EXPECT_EQ(a[i].width, b2[i].width);
  }
  f.seed = 43;
  EXPECT_NE(f.members()[0].center, a[0].center);
  const auto p = ConeBumpFamily{20}.partners();
  ASSERT_EQ(p.size(), 20u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p[i].center, a[i].center);
    for (int k = 0; k < 3; ++k) EXPECT_LE(p[i].width[k], a[i].width[k]);
  }
}

TEST(Estimates, NamesAndAxes) {
  for (auto e : {Estimate::hardy_cone, Estimate::hardy_pointwise, Estimate::nullform_xi, Estimate::nullform_eta,
                 Estimate::sobolev, Estimate::derivative_eta, Estimate::derivative_xi, Estimate::corollary})
    EXPECT_EQ(estimate_from_string(to_string(e)), e);
  EXPECT_THROW((void)estimate_from_string("poincare"), std::invalid_argument);
  EXPECT_EQ(translation_axis(Estimate::derivative_xi), 0);
  EXPECT_EQ(translation_axis(Estimate::derivative_eta), 1);
}

TEST(Estimates, RatiosAreScaleInvariant) {
  const ConeBump phi = standard_bump(4.0, 3.0), psi = standard_bump(4.0, 3.0).scaled(0.5);
  for (auto e : {Estimate::hardy_cone, Estimate::nullform_xi, Estimate::sobolev, Estimate::derivative_xi,
                 Estimate::corollary}) {
    const auto r1 = estimate_ratio(e, phi, psi, kCoarse);
    const auto r2 = estimate_ratio(e, phi.scaled(7.0), psi.scaled(0.2), kCoarse);
    EXPECT_GT(r1.ratio, 0.0) << to_string(e);
    EXPECT_TRUE(std::isfinite(r1.ratio));
    EXPECT_NEAR(r2.ratio, r1.ratio, 1e-10 * r1.ratio) << to_string(e);
    EXPECT_EQ(r1.violations, 0);
  }
}

TEST(Estimates, FamilyReportIsStable) {
  ConeBumpFamily f;
  f.count = 4;
  const auto r = family_report(Estimate::sobolev, f, SampleSpec{});
  EXPECT_TRUE(r.finite());
  EXPECT_GE(r.argmax, 0);
  EXPECT_LT(r.refinement_drift, 0.1);
  EXPECT_TRUE(r.accepted());
}

TEST(Estimates, TranslationAlongXi) {
  const auto t = translation_study(Estimate::sobolev, {5.0, 10.0}, kCoarse);
  ASSERT_EQ(t.ratios.size(), 2u);
  EXPECT_EQ(t.axis, 0);
  EXPECT_NEAR(t.max_growth, std::max(0.0, t.ratios[1] / t.ratios[0] - 1.0), 1e-12);
}

TEST(Estimates, SobolevSumsOrdered) {
  const ConeBump phi = standard_bump();
  EXPECT_GT(sobolev_rhs_sum(phi, 5.0, 13, false), sobolev_rhs_sum(phi, 5.0, 13, true));
  EXPECT_EQ(sobolev_rhs_sum(phi, 7.5, 13, true), 0.0);
}

TEST(Estimates, CorollaryBoundedByCombination) {
  const auto c = corollary_consistency(standard_bump(4.0, 4.0), kCoarse);
  EXPECT_GT(c.corollary, 0.0);
  EXPECT_LE(c.corollary, c.implied_bound() * 1.01);
}

TEST(Hardy, AgainstIndependentQuadrature) {
  const double a = 1.2;
  const auto f = [](const Jet& x) {
    if (std::abs(x.value()) >= 1.0) return Jet(x.dim(), x.order(), 0.0);
    return exp(-1.0 * reciprocal(1.0 - x * x));
  };
  // Simpson on [-1, 1], where f is supported
  const int n = 20000;
  const double h = 2.0 / n;
  double num = 0, den = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = -1 + i * h;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    num += w * std::pow(b(x) / (a - std::abs(x)), 2);
    den += w * db(x) * db(x);
  }
  EXPECT_NEAR(hardy_ratio(f, a, 8000), std::sqrt(num / den), 1e-5);
  EXPECT_THROW((void)hardy_ratio(f, 0.9), std::invalid_argument);
  EXPECT_EQ(hardy_ratio([](const Jet& x) { return Jet(x.dim(), x.order(), 0.0); }, 1.0), 0.0);
}

TEST(Hardy, FamilyBelowTwo) {
  const auto r = hardy_family(20, 42, 1000);
  EXPECT_LE(r.max_ratio, 2.0);
  EXPECT_LT(r.refinement_drift, 0.1);
}
