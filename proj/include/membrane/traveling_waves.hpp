#pragma once

/// \file traveling_waves.hpp
/// Wave profiles, the exact traveling-wave solution families of the membrane
/// equation, the profile decay hypothesis check, and the reduced equations
/// for subluminal, light-speed and superluminal traveling waves.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "membrane/extremal_ops.hpp"
#include "membrane/grid.hpp"
#include "membrane/taylor.hpp"

namespace membrane {

enum class DecayClass { compact, exponential, inverse_power, none };

std::string to_string(DecayClass d);

/// A 1D profile F defined through Taylor arithmetic, so every derivative is analytic.
class WaveProfile {
public:
  using JetFn = std::function<Jet(const Jet&)>;

  WaveProfile() = default;
  WaveProfile(std::string name, JetFn fn, DecayClass decay);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] DecayClass decay_class() const { return decay_; }

  /// F composed with a jet argument.
  [[nodiscard]] Jet operator()(const Jet& xi) const { return fn_(xi); }

  [[nodiscard]] double eval(double xi) const;
  [[nodiscard]] double d1(double xi) const { return derivative(xi, 1); }
  [[nodiscard]] double d2(double xi) const { return derivative(xi, 2); }
  [[nodiscard]] double d3(double xi) const { return derivative(xi, 3); }
  [[nodiscard]] double derivative(double xi, int k) const;
  /// F, F', ..., F^(k) at xi in one pass.
  [[nodiscard]] std::vector<double> derivatives(double xi, int k) const;

  static WaveProfile sech(double amplitude = 1.0);
  /// amplitude / (2 + xi), defined for xi > -2.
  static WaveProfile inv_power(double amplitude = 1.0);
  /// amplitude * exp(-1/(1 - ((xi - center)/radius)^2)), zero outside.
  static WaveProfile bump(double amplitude = 1.0, double radius = 1.0, double center = 0.0);
  static WaveProfile zero();
  static WaveProfile cosine(double amplitude = 1.0, double frequency = 1.0, double phase = 0.0);
  static WaveProfile sine(double amplitude = 1.0, double frequency = 1.0, double phase = 0.0);
  /// F = xi, so F' = 1.
  static WaveProfile linear();
  /// F = xi^2 / 2, so F' = xi.
  static WaveProfile quadratic();
  /// F = (2 + xi) log(2 + xi) - xi, so F' = log(2 + xi).
  static WaveProfile log_slope();

  /// Catalog lookup: sech, inv_power, bump, zero, cos, sin, linear, quadratic, log_slope.
  /// Recognized parameters: amplitude, radius, center, frequency, phase.
  static WaveProfile by_name(const std::string& name, const std::map<std::string, double>& params = {});

private:
  std::string name_ = "zero";
  JetFn fn_;
  DecayClass decay_ = DecayClass::compact;
};

enum class SolutionKind { affine_subluminal, lightspeed_product, lightspeed_sum, superluminal };

std::string to_string(SolutionKind k);

/// An exact solution v(t, x_1..x_n) of the membrane equation.
class TravelingWaveSolution {
public:
  /// Expression over jets (t, x_1, ..., x_n).
  using Expr = std::function<Jet(std::span<const Jet>)>;

  TravelingWaveSolution(SolutionKind kind, int n, std::vector<double> parameters, std::vector<WaveProfile> profiles,
                        Expr expr);

  [[nodiscard]] SolutionKind kind() const { return kind_; }
  [[nodiscard]] int spatial_dim() const { return n_; }
  [[nodiscard]] const std::vector<double>& parameters() const { return params_; }
  [[nodiscard]] const std::vector<WaveProfile>& profiles() const { return profiles_; }

  /// v at (t, x_1, ..., x_n).
  [[nodiscard]] double value(std::span<const double> tx) const;
  /// Taylor jet of v at (t, x1, x2); n must be 1 or 2.
  [[nodiscard]] Jet jet(double t, double x1, double x2, int order = 2) const;
  /// 2-jet of v at (t, x1, x2).
  [[nodiscard]] PointJet point_jet(double t, double x1, double x2) const;
  /// Analytic membrane residual at (t, x1, x2).
  [[nodiscard]] double residual(double t, double x1, double x2) const;

  /// Largest analytic residual over a small lattice in [0, 1]^3 (n <= 2), or a
  /// finite-difference residual for n > 2.
  [[nodiscard]] double self_check() const;

private:
  SolutionKind kind_;
  int n_;
  std::vector<double> params_;
  std::vector<WaveProfile> profiles_;
  Expr expr_;
};

/// v = (a x2 + b) F(x1 + sign t).
TravelingWaveSolution lightspeed_solution(double a, double b, const WaveProfile& profile, int sign = 1);

/// v = sum_{i<n} a_i x_i F_i(x_n + sign t) + b F_n(x_n + sign t); coeffs = (a_1..a_{n-1}, b).
TravelingWaveSolution lightspeed_sum_solution(std::span<const double> coeffs, std::span<const WaveProfile> profiles,
                                              int sign, int n);

/// v = sum_{i<n} a_i x_i + a_n (x_n - c t)/sqrt(1 - c^2) + b; a has n entries.
TravelingWaveSolution affine_subluminal_solution(std::span<const double> a, double b, double c);

/// v = Phi(x1 + (x2 - c t)/sqrt(c^2 - 1)) for c > 1.
TravelingWaveSolution superluminal_solution(const WaveProfile& phi, double c);

/// Orthogonal reflection taking x to (x~1, x~2) with
/// x~1 = (sqrt(c^2-1)/c) x1 + x2/c, x~2 = x1/c - (sqrt(c^2-1)/c) x2.
Eigen::Matrix2d superluminal_rotation(double c);

/// The light-speed plane wave Phi~(x~1 - t) equal to superluminal_solution(phi, c),
/// with Phi~(s) = Phi(c s / sqrt(c^2 - 1)).
TravelingWaveSolution superluminal_rotated_solution(const WaveProfile& phi, double c);

/// Membrane residual at one spacetime point of an n-dimensional solution using
/// central point stencils of step h for every derivative.
double fd_residual(const TravelingWaveSolution& sol, std::span<const double> tx, double h, int scheme_order = 4);

/// Membrane residual on a grid at time t: spatial derivatives from grid
/// stencils, time derivatives from a central stencil over neighbouring time
/// levels spaced by the grid's smallest spacing. n must be 1 or 2.
ScalarField grid_residual(const TravelingWaveSolution& sol, const Grid2D& grid, double t, int scheme_order = 4);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double max_residual = 0.0;
  double order = 0.0;  // against the previous row; 0 for the first
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double min_order = 0.0;
  /// True when every residual is at roundoff level (finite differences are exact).
  bool exact = false;
  [[nodiscard]] bool passes(int scheme_order, double slack = 0.3) const;
};

inline constexpr double kRoundoffResidual = 1e-9;

ConvergenceStudy residual_convergence(const TravelingWaveSolution& sol, double half_width, std::span<const int> sizes,
                                      double t, int scheme_order = 4);

// ---------------------------------------------------------------------------
// Decay hypothesis on F'

struct H1Entry {
  int k1 = 0, k2 = 0;
  double constant = 0.0;           // sup over the base lattice
  double extended_constant = 0.0;  // sup over the lattice with doubled xi_max
};

struct H1Report {
  bool passes = false;
  double worst_constant = 0.0;
  std::vector<H1Entry> entries;
  [[nodiscard]] const H1Entry& entry(int k1, int k2) const;
};

/// sup (2 + xi) |(xi d/dxi)^k2 (d/dxi)^k1 F'(xi)| over xi_grid for k1 + k2 <= k_max <= 3;
/// passes when all values are finite and grow by less than 5% when xi_max doubles.
H1Report check_H1(const WaveProfile& profile, int k_max, const UniformAxis& xi_grid);

// ---------------------------------------------------------------------------
// Reduced equations for v = f(x - c t e_n)

enum class SpeedRegime { subluminal, lightspeed, superluminal };

std::string to_string(SpeedRegime r);

/// Spatial profile f(x_1, ..., x_n) over jets, n <= 2.
using SpatialExpr = std::function<Jet(std::span<const Jet>)>;

struct ReductionReport {
  double max_full = 0.0;      // max |membrane residual of v|
  double max_reduced = 0.0;   // max |reduced residual|
  double max_mismatch = 0.0;  // max |full - sign * reduced|
  int sign = 1;               // full = sign * reduced
  int points = 0;
};

/// Compares the membrane residual of v(t, x) = f(x_1, .., x_{n-1}, x_n - c t) with
/// the reduced operator:
///  - subluminal: minimal-surface operator of g(x') = f(.., sqrt(1-c^2) x'_n), full = -reduced;
///  - lightspeed: (n-1)-dimensional minimal-surface operator at fixed x_n - c t, full = -reduced;
///  - superluminal: Lorentzian operator of g(x') = f(.., sqrt(c^2-1) x'_n) with x'_n as time,
///    full = +reduced.
/// Evaluated on an n-dimensional sample lattice `points` (each entry x_1..x_n) at time t.
ReductionReport reduction_residual(SpeedRegime regime, const SpatialExpr& f, int n, double c,
                                   std::span<const std::vector<double>> points, double t = 0.0);

}  // namespace membrane
