#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "membrane/grid.hpp"

using namespace membrane;

TEST(Grid, SquareGeometry) {
  const Grid2D g = Grid2D::square(4.0, 9);
  EXPECT_DOUBLE_EQ(g.h1(), 1.0);
  EXPECT_DOUBLE_EQ(g.x1(0), -4.0);
  EXPECT_DOUBLE_EQ(g.x2(8), 4.0);
  EXPECT_DOUBLE_EQ(g.half_width(), 4.0);
  EXPECT_EQ(g.size(), 81u);
  EXPECT_EQ(g.index(1, 2), 11u);
}

TEST(Grid, RejectsDegenerateGrids) {
  EXPECT_THROW(Grid2D(0, 1, 0, 1, 5, 9), std::invalid_argument);
  EXPECT_THROW(Grid2D(1, 0, 0, 1, 9, 9), std::invalid_argument);
}

TEST(Fd, WeightsMatchClassicalStencils) {
  const double nodes[] = {-2, -1, 0, 1, 2};
  const auto w = fd_weights(0.0, nodes, 2);
  const double expect[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(w[i], expect[i], 1e-14);
  const auto w1 = fd_weights(0.0, nodes, 1);
  const double expect1[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(w1[i], expect1[i], 1e-14);
}

TEST(Fd, QuarticIsDifferentiatedExactly) {
  const Grid2D g(-1, 1, -1, 1, 11, 11);
  const auto f = ScalarField::sample(g, [](double x, double y) { return x * x * x * x - 3 * x * y + y * y * y; });
  const auto fx = derivative(f, Axis::X1, 1, 4);
  const auto fyy = derivative(f, Axis::X2, 2, 4);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      EXPECT_NEAR(fx(i, j), 4 * std::pow(g.x1(i), 3) - 3 * g.x2(j), 1e-11);
      EXPECT_NEAR(fyy(i, j), 6 * g.x2(j), 1e-10);
    }
}

TEST(Fd, ConvergenceOrder) {
  double err[2];
  for (int s = 0; s < 2; ++s) {
    const Grid2D g = Grid2D::square(1.0, s == 0 ? 41 : 81);
    const auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(2 * x) * std::cos(y); });
    const auto fx = derivative(f, Axis::X1, 1, 4);
    double e = 0;
    // interior nodes, where the stencil is central
    for (int i = 2; i < g.n1 - 2; ++i)
      for (int j = 0; j < g.n2; ++j)
        e = std::max(e, std::abs(fx(i, j) - 2 * std::cos(2 * g.x1(i)) * std::cos(g.x2(j))));
    err[s] = e;
  }
  EXPECT_GT(std::log2(err[0] / err[1]), 3.7);
}

TEST(Quadrature, TrapezoidOnBilinearIsExact) {
  const Grid2D g(0, 2, 0, 1, 9, 9);
  const auto f = ScalarField::sample(g, [](double x, double y) { return 1 + x + 2 * x * y; });
  EXPECT_NEAR(integrate(f), 2 + 2 + 2, 1e-13);
}

TEST(Norms, SobolevOfGaussian) {
  // ||exp(-r^2)||_L2^2 = pi/2; ||grad||^2 = pi
  const Grid2D g = Grid2D::square(6.0, 241);
  const auto f = ScalarField::sample(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  EXPECT_NEAR(l2_norm(f), std::sqrt(M_PI / 2), 1e-8);
  EXPECT_NEAR(h_norm(f, 1), std::sqrt(M_PI / 2 + M_PI), 1e-5);
}

TEST(Bump, ProfileAndSupport) {
  EXPECT_NEAR(unit_bump(0.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(unit_bump(1.0), 0.0);
  const Grid2D g = Grid2D::square(3.0, 61);
  const auto b = make_bump(g, {0.5, 0.0}, 1.0, 2.0);
  EXPECT_NEAR(b.max_abs(), 2.0 * std::exp(-1.0), 1e-12);
  EXPECT_LE(b.support_radius(0.0), 1.5 + 1e-12);
}

TEST(Field, InterpolationIsBilinear) {
  const Grid2D g(0, 1, 0, 1, 9, 9);
  const auto f = ScalarField::sample(g, [](double x, double y) { return 2 * x + 3 * y + x * y; });
  EXPECT_NEAR(f.interpolate(0.25, 0.75), 0.5 + 2.25 + 0.1875, 1e-14);
  EXPECT_THROW((void)f.interpolate(1.5, 0.0), std::out_of_range);
}

TEST(Field, ArithmeticChecksGrid) {
  ScalarField a(Grid2D::square(1, 9)), b(Grid2D::square(1, 11));
  EXPECT_THROW(a += b, std::invalid_argument);
}

TEST(Serialization, BinaryRoundTrip) {
  const Grid2D g(-1, 2, 0, 1, 10, 9);
  const auto f = ScalarField::sample(g, [](double x, double y) { return x - y * y; }, 1.5);
  std::stringstream ss;
  write_binary(ss, f);
  const auto r = read_binary(ss);
  EXPECT_EQ(r.grid(), g);
  EXPECT_EQ(r.time_label(), 1.5);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) EXPECT_EQ(r(i, j), f(i, j));
  std::stringstream bad("XXXX");
  EXPECT_THROW((void)read_binary(bad), std::runtime_error);
}

TEST(Serialization, Csv) {
  const Grid2D g(0, 1, 0, 1, 9, 9);
  std::stringstream ss;
  write_csv(ss, ScalarField::sample(g, [](double x, double y) { return x + 10 * y; }));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "x1,x2,value");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) ++rows;
  EXPECT_EQ(rows, 81);
}

TEST(Slab, LatticeAndWeightedIntegral) {
  const auto l = GoursatLattice::uniform({0, 2, 9}, {0, 1, 9}, {-1, 1, 9});
  EXPECT_TRUE(l.uniform_xi());
  const auto f = SlabField::sample(l, [](double, double, double) { return 1.0; });
  // volume 2 * 1 * 2
  EXPECT_NEAR(weighted_l2(f, [](double, double) { return 1.0; }), 4.0, 1e-13);
  const auto g = SlabField::sample(l, [](double xi, double eta, double x2) { return xi + 2 * eta - x2; });
  const auto gx = slab_derivative(g, 2);
  for (double v : gx.values) EXPECT_NEAR(v, -1.0, 1e-12);
}
