#include <cmath>

#include <gtest/gtest.h>

#include "membrane/energy.hpp"

using namespace membrane;

namespace {

// closed-form integral of (2 + s)^p over [lo, hi]
double power_integral(double p, double lo, double hi) {
  return (std::pow(2 + hi, p + 1) - std::pow(2 + lo, p + 1)) / (p + 1);
}

}  // namespace

TEST(Weights, Formulae) {
  EXPECT_NEAR(weight_a(1.0, 2.0), std::pow(3.0, -1.1) * std::pow(4.0, -0.1), 1e-15);
  EXPECT_NEAR(weight_b(1.0, 2.0), weight_a(2.0, 1.0), 1e-15);
}

TEST(WeightB, SechClosedForm) {
  // F = A sech: F'^2 = A^2 sech^2 tanh^2, so B = A^2 (tanh^3(xi) - tanh^3(-1)) / 3
  const double A = 0.5;
  const WeightB B(WaveProfile::sech(A), {-1.0, 30.0, 311});
  for (double xi : {-1.0, 0.0, 2.5, 17.0}) {
    const double exact = A * A * (std::pow(std::tanh(xi), 3) - std::pow(std::tanh(-1.0), 3)) / 3;
    EXPECT_NEAR(B(xi), exact, 1e-6);
  }
  EXPECT_TRUE(B.respects_bounds());
  EXPECT_NEAR(B.bounds().first, std::exp(-B.table().back()), 1e-15);
  EXPECT_THROW(WeightB(WaveProfile::sech(), {1.0, 0.0, 5}), std::invalid_argument);
}

TEST(Words, Counts) {
  EXPECT_EQ(gamma_words(0).size(), 1u);
  EXPECT_TRUE(gamma_words(0)[0].empty());
  EXPECT_EQ(gamma_words(1).size(), 7u);
  EXPECT_EQ(gamma_words(2).size(), 43u);
}

TEST(Slab, ApplyGoursatOnLinearField) {
  const auto l = GoursatLattice::uniform({0, 2, 9}, {0, 2, 9}, {-1, 1, 9});
  const auto u = SlabField::sample(l, [](double xi, double eta, double x2) { return xi - eta + 3 * x2; });
  // Gamma5 = 2 xi d_xi + x2 d_x2 in null variables
  const auto g = apply_goursat(goursat_op(VectorFieldId::Gamma5), u);
  for (std::size_t i = 0; i < l.xi.size(); ++i)
    for (int k = 0; k < l.x2.n; ++k) EXPECT_NEAR(g(i, 4, k), 2 * l.xi[i] + 3 * l.x2.at(k), 1e-12);
}

TEST(Energies, EsOfLinearFieldMatchesClosedForm) {
  const UniformAxis xi{1, 3, 81}, eta{0, 2, 81}, x2{-1, 1, 9};
  const auto u = SlabField::sample(GoursatLattice::uniform(xi, eta, x2), [](double, double, double y) { return y; });
  const double area = 2.0;
  const double exact = area * (power_integral(-1.1, 1, 3) * power_integral(-0.1, 0, 2) +
                               power_integral(-0.1, 1, 3) * power_integral(-1.1, 0, 2));
  EXPECT_NEAR(energy_Es(u, 0), exact, 1e-4 * exact);
  EXPECT_NEAR(energy_es(u, 0), 4.0, 1e-12);
  EXPECT_THROW((void)energy_Es(u, 3), std::invalid_argument);
}

TEST(Energies, ZeroFieldAndEtilde) {
  const auto l = GoursatLattice::uniform({0, 2, 9}, {0, 2, 9}, {-1, 1, 9});
  EXPECT_EQ(energy_Es(SlabField(l), 2), 0.0);
  const auto c = SlabField::sample(l, [](double, double, double) { return 2.0; });
  EXPECT_NEAR(energy_etilde(c, 0.1, 0), 2.0 * std::pow(2.0, -0.1), 1e-14);
  EXPECT_THROW((void)energy_etilde(c, 0.2, 0), std::invalid_argument);
  const auto reps = station_reports(c, 1);
  ASSERT_EQ(reps.size(), 9u);
  EXPECT_EQ(reps[3].xi_station, l.xi[3]);
  EXPECT_NEAR(reps[3].sup_u, 2.0, 1e-15);
}

TEST(Energies, SliceEnergyIsPositiveAndVanishesOnZero) {
  const Grid2D g = Grid2D::square(4.0, 81);
  const ScalarField z(g);
  EXPECT_EQ(energy_slice(z, z, z, 1), 0.0);
  const auto u = make_bump(g, {0, 0}, 1.0, 1.0);
  EXPECT_GT(energy_slice(u, z, z, 0), 0.0);
  EXPECT_GT(energy_slice(u, z, z, 1), energy_slice(u, z, z, 0));
  EXPECT_THROW((void)energy_slice(u, z, z, 2), std::invalid_argument);
}

TEST(Fit, RecoversPowerLaw) {
  std::vector<std::pair<double, double>> st;
  for (double xi : {5.0, 8.0, 13.0, 21.0, 40.0}) st.emplace_back(xi, 3.0 * std::pow(2 + xi, -0.4));
  const auto f = fit_decay(st);
  EXPECT_NEAR(f.slope, -0.4, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.used, 5);
  st[0].second = 0.0;
  EXPECT_THROW((void)fit_decay(st), std::invalid_argument);
}

TEST(Hamiltonian, SmallDataReducesToWaveEnergy) {
  // v = eps exp(-r^2), v_t = eps exp(-r^2): quadratic part (eps^2/2)(pi/2 + pi)
  const double eps = 1e-3;
  const Grid2D g = Grid2D::square(6.0, 241);
  const auto v = ScalarField::sample(g, [eps](double x, double y) { return eps * std::exp(-x * x - y * y); });
  const double H = hamiltonian_excess(v, v);
  EXPECT_NEAR(H, 0.5 * eps * eps * (M_PI / 2 + M_PI), 1e-5 * H);
  const ScalarField fast = ScalarField::sample(g, [](double, double) { return 2.0; });
  EXPECT_THROW((void)hamiltonian_excess(ScalarField(g), fast), DegenerateSurfaceError);
}
