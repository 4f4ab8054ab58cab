#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "membrane/evolver.hpp"

using namespace membrane;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.grid = Grid2D::square(4.0, 65);
  c.t_end = 2.0;
  c.output_every = 0.5;
  return c;
}

// u = A cos(t) exp(-r^2) as a Taylor expression in (t, x1, x2)
constexpr double kAmp = 0.05;

Jet manufactured(const std::array<Jet, 3>& v) {
  return kAmp * cos(v[0]) * exp(-1.0 * (v[1] * v[1] + v[2] * v[2]));
}

PointJet manufactured_jet(double t, double x1, double x2) {
  return PointJet::from_taylor(manufactured(Jet::variables<3>(2, {t, x1, x2})));
}

double manufactured_error(int n) {
  SimConfig c;
  c.background = BackgroundSpec::none();
  c.grid = Grid2D::square(3.0, n);
  c.t_end = 0.5;
  c.forcing = [](double t, double x1, double x2) { return membrane_residual(manufactured_jet(t, x1, x2)); };
  auto u0 = ScalarField::sample(c.grid, [](double x, double y) { return manufactured_jet(0, x, y).value; });
  auto ut0 = ScalarField::sample(c.grid, [](double x, double y) { return manufactured_jet(0, x, y).d_t; });
  SimState s = init_fields(c, u0, ut0);
  while (s.t < c.t_end - 1e-12) s = step(s, c, std::min(stable_dt(s, c, c.t_end - s.t), c.t_end - s.t));
  // the edge ring carries the truncated Gaussian tail with no boundary data, so stay inside r < 2
  double err = 0.0;
  for (int i = 0; i < c.grid.n1; ++i)
    for (int j = 0; j < c.grid.n2; ++j)
      if (std::hypot(c.grid.x1(i), c.grid.x2(j)) < 2.0)
        err = std::max(err, std::abs(s.u(i, j) - manufactured_jet(s.t, c.grid.x1(i), c.grid.x2(j)).value));
  return err;
}

}  // namespace

TEST(Background, JetMatchesExactSolution) {
  const auto bg = BackgroundSpec::lightspeed(0.3, 1.0, WaveProfile::sech(0.5), -1);
  const auto sol = lightspeed_solution(0.3, 1.0, WaveProfile::sech(0.5), -1);
  const PointJet a = bg.jet(0.4, 0.2, -0.6), b = sol.point_jet(0.4, 0.2, -0.6);
  EXPECT_NEAR(a.value, b.value, 1e-15);
  EXPECT_NEAR(a.d_tt, b.d_tt, 1e-14);
  EXPECT_NEAR(a.d_tx2, b.d_tx2, 1e-14);
  EXPECT_NEAR(bg.value_t(0.4, 0.2, -0.6), b.d_t, 1e-15);
  EXPECT_EQ(BackgroundSpec::none().value(1, 2, 3), 0.0);
}

TEST(Config, Validation) {
  SimConfig c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.cfl = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.t_end = 5.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.scheme_order = 3;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(evolution_mode_from_string(to_string(EvolutionMode::direct)), EvolutionMode::direct);
  EXPECT_THROW((void)evolution_mode_from_string("implicit"), std::invalid_argument);
}

TEST(Init, BumpsNormalizedToPeak) {
  SimConfig c = small_config();
  c.epsilon = 0.01;
  const SimState s = init_cauchy(c);
  EXPECT_NEAR(s.u.max_abs(), 0.01, 1e-12);
  EXPECT_LE(s.u_t.max_abs(), 0.005 + 1e-12);
  EXPECT_GT(s.data_norm, 0.0);
  EXPECT_EQ(s.t, 0.0);
}

TEST(Step, ZeroDataStaysZero) {
  SimConfig c = small_config();
  c.epsilon = 0.0;
  SimState s = init_cauchy(c);
  for (int k = 0; k < 10; ++k) s = step(s, c);
  EXPECT_LE(s.u.max_abs(), 1e-12);
  EXPECT_EQ(s.step_count, 10);
  EXPECT_LE(s.min_delta_seen, 1.0);
}

TEST(Step, DtRespectsCfl) {
  const SimConfig c = small_config();
  const SimState s = init_cauchy(c);
  EXPECT_LE(stable_dt(s, c, 1.0), c.cfl * c.grid.h_min() + 1e-15);
  EXPECT_GE(max_speed(s, c), 1.0);
  EXPECT_EQ(stable_dt(s, c, 1e-4), 1e-4);
}

TEST(Step, ManufacturedSolutionConverges) {
  const double e1 = manufactured_error(65), e2 = manufactured_error(129);
  EXPECT_LT(e2, 1e-6);
  EXPECT_GT(std::log2(e1 / e2), 3.5);
}

TEST(Step, NonFiniteStateThrows) {
  const SimConfig c = small_config();
  SimState s = init_cauchy(c);
  s.u.at(30, 30) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW((void)step(s, c), std::runtime_error);
}

TEST(Step, NullSurfaceThrows) {
  SimConfig c = small_config();
  c.background = BackgroundSpec::none();
  const auto fast = ScalarField::sample(c.grid, [](double, double) { return 1.0; });
  const SimState s = init_fields(c, ScalarField(c.grid), fast);
  EXPECT_THROW((void)step(s, c, 0.01), DegenerateSurfaceError);
}

TEST(Run, EmissionsSupportAndDeterminism) {
  SimConfig c = small_config();
  c.epsilon = 1e-3;
  const RunResult a = run(c);
  ASSERT_EQ(a.emissions.size(), 5u);
  EXPECT_EQ(a.emissions.back().t, 2.0);
  EXPECT_TRUE(a.support_ok);
  for (const auto& e : a.emissions) {
    EXPECT_LE(e.support_radius, e.support_bound);
    EXPECT_NEAR(e.support_bound, e.t + 1 + 2 * c.grid.h_min(), 1e-12);
  }
  EXPECT_LE(a.max_sup_u, 10 * c.epsilon);
  EXPECT_GT(a.min_delta, 0.5);
  const RunResult b = run(c);
  EXPECT_EQ(a.final_state.u.values().size(), b.final_state.u.values().size());
  for (std::size_t i = 0; i < a.final_state.u.values().size(); ++i)
    ASSERT_EQ(a.final_state.u.values()[i], b.final_state.u.values()[i]);
}

// The modes differ by the stencil error on the background, so they converge to each other.
TEST(Run, ModesAgreeUnderRefinement) {
  double diff[2];
  for (int k = 0; k < 2; ++k) {
    SimConfig c = small_config();
    c.grid = Grid2D::square(4.0, k == 0 ? 65 : 129);
    c.t_end = 1.0;
    c.epsilon = 1e-2;
    const RunResult a = run(c);
    c.mode = EvolutionMode::direct;
    const RunResult b = run(c);
    diff[k] = 0.0;
    for (std::size_t i = 0; i < a.final_state.u.values().size(); ++i)
      diff[k] = std::max(diff[k], std::abs(a.final_state.u.values()[i] - b.final_state.u.values()[i]));
  }
  EXPECT_LT(diff[0], 1e-2 * 1e-2);
  EXPECT_GT(diff[0] / diff[1], 8.0);
}

TEST(Decay, LatticeLayout) {
  SimConfig c;
  const auto l = decay_lattice(c, DecayOptions{});
  ASSERT_EQ(l.xi.size(), 5u);
  EXPECT_NEAR(l.xi.front(), 5.0, 1e-12);
  EXPECT_NEAR(l.xi.back(), 40.0, 1e-12);
  EXPECT_NEAR((2 + l.xi[1]) / (2 + l.xi[0]), (2 + l.xi[2]) / (2 + l.xi[1]), 1e-12);
  EXPECT_EQ(l.eta.min, -1.0);
  EXPECT_EQ(l.eta.max, 0.0);
  c.t_end = 10.0;
  EXPECT_THROW((void)decay_lattice(c, DecayOptions{}), std::invalid_argument);
}

TEST(Stability, SmallEpsilonIsStable) {
  SimConfig c = small_config();
  c.t_end = 1.0;
  const auto scan = stability_scan(c, {1e-3, 1e-2});
  ASSERT_EQ(scan.stable.size(), 2u);
  EXPECT_TRUE(scan.stable[0]);
  EXPECT_GE(scan.largest_stable, 1e-3);
}
