#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "membrane/vector_fields.hpp"

using namespace membrane;

namespace {

std::vector<Polynomial> suite(int count, int degree) {
  std::mt19937_64 rng(3);
  std::vector<Polynomial> out;
  for (int i = 0; i < count; ++i) out.push_back(Polynomial::random(rng, degree));
  return out;
}

}  // namespace

TEST(Fields, NamesRoundTrip) {
  for (auto id : kGammaFields) EXPECT_EQ(vector_field_from_string(to_string(id)), id);
  EXPECT_THROW((void)vector_field_from_string("Gamma7"), std::invalid_argument);
}

TEST(Fields, GammaDecompositions) {
  using enum VectorFieldId;
  EXPECT_LT(operator_distance(cartesian_op(Gamma4), cartesian_op(L0) - cartesian_op(L1)), 1e-12);
  EXPECT_LT(operator_distance(cartesian_op(Gamma5), cartesian_op(L0) + cartesian_op(L1)), 1e-12);
  EXPECT_LT(operator_distance(cartesian_op(Gamma6), cartesian_op(L2) + cartesian_op(Omega)), 1e-12);
  EXPECT_GT(operator_distance(cartesian_op(Gamma6), cartesian_op(L2)), 0.5);
}

TEST(Fields, HandComputedAction) {
  // f = t x2: Gamma5 f = (t + x1) x2 + x2 t
  const Polynomial t = Polynomial::variable(0), x1 = Polynomial::variable(1), x2 = Polynomial::variable(2);
  const Polynomial g = apply_vf(VectorFieldId::Gamma5, t * x2);
  const Polynomial expect = (t + x1) * x2 + x2 * t;
  EXPECT_TRUE((g - expect).is_zero());
  // Omega rotates: Omega x1 = -x2
  EXPECT_TRUE((apply_vf(VectorFieldId::Omega, x1) + x2).is_zero());
}

TEST(Fields, CartesianAndNullFormsAgree) {
  const SpacetimeExpr f = [](std::span<const Jet> v) { return sin(v[0]) * v[1] * v[1] + exp(0.3 * v[2]) * v[0]; };
  const SpacetimeExpr fg = [&](std::span<const Jet> w) {
    const Jet t = 0.5 * (w[0] + w[1]), x1 = 0.5 * (w[0] - w[1]);
    const Jet args[] = {t, x1, w[2]};
    return f(args);
  };
  for (int k = 0; k < 13; ++k) {
    const auto id = static_cast<VectorFieldId>(k);
    const std::array<double, 3> p{0.4, -0.7, 1.1};
    const auto q = GoursatPoint::from_cartesian(p[0], p[1], p[2]);
    EXPECT_NEAR(apply_vf(id, f, p), apply_vf_goursat(id, fg, q), 1e-12) << to_string(id);
  }
}

TEST(Fields, PointJetMatchesAnalytic) {
  const SpacetimeExpr f = [](std::span<const Jet> v) { return v[0] * v[2] + 0.5 * v[1] * v[1]; };
  const std::array<double, 3> p{0.3, 0.2, -0.5};
  PointJet j;
  j.d_t = p[2], j.d_x1 = p[1], j.d_x2 = p[0];
  for (auto id : kGammaFields) EXPECT_NEAR(apply_vf(id, j, p), apply_vf(id, f, p), 1e-14);
}

TEST(Commutators, LambdaValues) {
  const auto polys = suite(6, 4);
  const auto lattice = cube_lattice(-1, 1, 4);
  const double expect[] = {0, 0, 0, 2, 2, 0};
  for (int i = 0; i < 6; ++i) {
    const auto fit = commutator_box(kGammaFields[static_cast<std::size_t>(i)], polys, lattice);
    EXPECT_NEAR(fit.lambda, expect[i], 1e-8) << i;
    EXPECT_LT(fit.max_residual, 1e-8);
    EXPECT_LT(fit.operator_residual, 1e-12);
  }
}

TEST(Commutators, AnalyticVariant) {
  const SpacetimeExpr f = [](std::span<const Jet> v) { return sin(v[0] - 0.5 * v[1]) * cos(v[2]); };
  const auto lattice = cube_lattice(-0.5, 0.5, 3);
  EXPECT_NEAR(commutator_box(VectorFieldId::Gamma5, f, lattice).lambda, 2.0, 1e-8);
}

TEST(Leibniz, FirstOrderDefects) {
  const auto polys = suite(2, 3);
  const auto lattice = cube_lattice(-1, 1, 4);
  // translations and Lorentz/rotation parts obey Leibniz exactly; the scaling part gives -2
  const double expect[] = {0, 0, 0, -2, -2, 0};
  for (int i = 0; i < 6; ++i) {
    const VectorFieldId k[] = {kGammaFields[static_cast<std::size_t>(i)]};
    const auto fit = gamma_nullform_leibniz(k, polys[0], polys[1], lattice);
    ASSERT_EQ(fit.coefficients.size(), 1u);
    EXPECT_NEAR(fit.coefficients[0], expect[i], 1e-9) << i;
    EXPECT_LT(fit.max_residual, 1e-9);
  }
}

TEST(Leibniz, SecondOrderFitIsExact) {
  const auto polys = suite(2, 3);
  const auto lattice = cube_lattice(-1, 1, 4);
  const VectorFieldId k[] = {VectorFieldId::Gamma4, VectorFieldId::Gamma6};
  const auto fit = gamma_nullform_leibniz(k, polys[0], polys[1], lattice);
  EXPECT_EQ(fit.basis.size(), 5u);
  EXPECT_LT(fit.max_residual, 1e-8);
}

TEST(Slab, BuilderReproducesLinearField) {
  // u = t + 2 x1 - x2: u_xi = 3/2, u_eta = -1/2, u_x2 = -1
  const Grid2D g = Grid2D::square(4.0, 41);
  const auto lattice = GoursatLattice::uniform({0.5, 2.5, 3}, {-0.5, 1.5, 9}, {-1, 1, 9});
  GoursatSlabBuilder b(lattice);
  for (int s = 0; s <= 20; ++s) {
    const double t = 0.1 * s;
    const auto u = ScalarField::sample(g, [t](double x1, double x2) { return t + 2 * x1 - x2; }, t);
    const auto ut = ScalarField::sample(g, [](double, double) { return 1.0; }, t);
    b.add_slice(u, ut);
  }
  ASSERT_TRUE(b.complete());
  const GoursatSlab slab = b.finish();
  for (std::size_t i = 0; i < lattice.xi.size(); ++i)
    for (int j = 0; j < lattice.eta.n; ++j)
      for (int k = 0; k < lattice.x2.n; ++k) {
        const double xi = lattice.xi[i], eta = lattice.eta.at(j), x2 = lattice.x2.at(k);
        EXPECT_NEAR(slab.u(i, j, k), 0.5 * (xi + eta) + (xi - eta) - x2, 1e-12);
        EXPECT_NEAR(slab.u_xi(i, j, k), 1.5, 1e-12);
        EXPECT_NEAR(slab.u_eta(i, j, k), -0.5, 1e-12);
        EXPECT_NEAR(slab.u_x2(i, j, k), -1.0, 1e-12);
      }
}

TEST(Slab, UncoveredStationThrows) {
  const Grid2D g = Grid2D::square(4.0, 41);
  const auto lattice = GoursatLattice::uniform({0.5, 2.5, 3}, {-0.5, 1.5, 9}, {-1, 1, 9});
  GoursatSlabBuilder b(lattice);
  for (double t : {0.0, 0.5}) b.add_slice(ScalarField(g, t), ScalarField(g, t));
  EXPECT_FALSE(b.complete());
  EXPECT_THROW((void)b.finish(), std::out_of_range);
}

TEST(Slab, ConeExcess) {
  const auto lattice = GoursatLattice::uniform({0, 1, 9}, {0, 1, 9}, {-4, 4, 9});
  // supported where |x2| <= 3; at xi = eta = 0 the cone radius is 2
  const auto u = SlabField::sample(lattice, [](double, double, double x2) { return std::abs(x2) <= 3 ? 1.0 : 0.0; });
  EXPECT_NEAR(cone_excess(u, 0.5), 1.0, 1e-12);
  const auto inside = SlabField::sample(lattice, [](double, double, double x2) { return std::abs(x2) <= 1 ? 1.0 : 0.0; });
  EXPECT_EQ(cone_excess(inside, 0.5), 0.0);
}
