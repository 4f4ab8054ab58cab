#pragma once

/// \file grid.hpp
/// Uniform 2D grids, sampled scalar fields, finite-difference stencils,
/// discrete norms and the Goursat-slab lattice used by the diagnostics.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "membrane/taylor.hpp"

namespace membrane {

enum class Axis { X1 = 0, X2 = 1 };

struct Grid2D {
  double x1_min = -1.0, x1_max = 1.0;
  double x2_min = -1.0, x2_max = 1.0;
  int n1 = 9, n2 = 9;

  Grid2D() = default;
  Grid2D(double x1_lo, double x1_hi, double x2_lo, double x2_hi, int n1_, int n2_);

  /// [-half_width, half_width]^2 with n points per axis.
  static Grid2D square(double half_width, int n);

  [[nodiscard]] double h1() const { return (x1_max - x1_min) / (n1 - 1); }
  [[nodiscard]] double h2() const { return (x2_max - x2_min) / (n2 - 1); }
  [[nodiscard]] double h_min() const;
  [[nodiscard]] double x1(int i) const { return x1_min + i * h1(); }
  [[nodiscard]] double x2(int j) const { return x2_min + j * h2(); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j);
  }
  /// Distance from the origin to the nearest edge of the domain.
  [[nodiscard]] double half_width() const;
  [[nodiscard]] int n(Axis a) const { return a == Axis::X1 ? n1 : n2; }
  [[nodiscard]] double h(Axis a) const { return a == Axis::X1 ? h1() : h2(); }

  bool operator==(const Grid2D&) const = default;
};

/// A scalar sampled on a Grid2D at one time level. Values are row-major with
/// x1 as the slow index.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const Grid2D& grid, double time_label = 0.0);
  ScalarField(const Grid2D& grid, std::vector<double> values, double time_label = 0.0);

  static ScalarField sample(const Grid2D& grid, const std::function<double(double, double)>& f,
                            double time_label = 0.0);

  [[nodiscard]] const Grid2D& grid() const { return grid_; }
  [[nodiscard]] double time_label() const { return time_; }
  void set_time_label(double t) { time_ = t; }

  [[nodiscard]] double operator()(int i, int j) const { return v_[grid_.index(i, j)]; }
  double& at(int i, int j) { return v_[grid_.index(i, j)]; }
  [[nodiscard]] std::span<const double> values() const { return v_; }
  std::vector<double>& data() { return v_; }

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool all_finite() const;
  /// Largest |x| over nodes with |value| > threshold (0 if none).
  [[nodiscard]] double support_radius(double threshold) const;
  /// Bilinear interpolation; points outside the grid are an error.
  [[nodiscard]] double interpolate(double x1, double x2) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
  Grid2D grid_;
  std::vector<double> v_;
  double time_ = 0.0;
};

/// 2-jet of a scalar at a spacetime point (t, x1, x2).
struct PointJet {
  double value = 0.0;
  double d_t = 0.0, d_x1 = 0.0, d_x2 = 0.0;
  double d_tt = 0.0, d_tx1 = 0.0, d_tx2 = 0.0;
  double d_x1x1 = 0.0, d_x1x2 = 0.0, d_x2x2 = 0.0;

  /// Read off a Taylor jet in variables (t, x1, x2) of order >= 2.
  static PointJet from_taylor(const Jet& j);

  friend PointJet operator+(const PointJet& a, const PointJet& b);
  friend PointJet operator-(const PointJet& a, const PointJet& b);
  friend PointJet operator*(double s, const PointJet& a);
};

/// Value of the unit C-infinity bump profile exp(-1/(1-rho^2)^m) for rho in [0, 1).
double unit_bump(double rho, int smoothness = 1);

/// amplitude * exp(-1/(1 - r^2/radius^2)^smoothness) for r < radius, 0 elsewhere.
ScalarField make_bump(const Grid2D& grid, std::array<double, 2> center, double radius, double amplitude,
                      int smoothness = 1);

/// Finite-difference derivative along one axis. Central stencils in the
/// interior, one-sided stencils of matching order at the edges.
ScalarField derivative(const ScalarField& f, Axis axis, int order, int scheme_order = 4);

/// Weights w such that sum_k w_k f(x_k) approximates f^(m)(z) (Fornberg).
std::vector<double> fd_weights(double z, std::span<const double> nodes, int m);

/// Composite trapezoid integral over the grid.
double integrate(const ScalarField& f);
double l2_norm(const ScalarField& f);

/// Discrete H^m norm: sqrt(sum over all d1^a d2^b with a+b <= m of ||.||_L2^2).
double h_norm(const ScalarField& f, int m, int scheme_order = 4);

/// sum over pairs (f, g) of ||f||_{H^{s+1}} + ||g||_{H^s}; s <= 4.
double sobolev_norm(std::span<const std::pair<ScalarField, ScalarField>> fields, int s, int scheme_order = 4);

// ---------------------------------------------------------------------------
// Goursat slab lattice: samples over (xi, eta, x2) with xi = t + x1, eta = t - x1.

struct UniformAxis {
  double min = 0.0, max = 1.0;
  int n = 2;
  [[nodiscard]] double h() const { return n > 1 ? (max - min) / (n - 1) : 0.0; }
  [[nodiscard]] double at(int i) const { return min + i * h(); }
};

struct GoursatLattice {
  std::vector<double> xi;  // strictly increasing stations
  UniformAxis eta;
  UniformAxis x2;

  [[nodiscard]] std::size_t size() const {
    return xi.size() * static_cast<std::size_t>(eta.n) * static_cast<std::size_t>(x2.n);
  }
  [[nodiscard]] std::size_t index(std::size_t i, int j, int k) const {
    return (i * static_cast<std::size_t>(eta.n) + static_cast<std::size_t>(j)) * static_cast<std::size_t>(x2.n) +
           static_cast<std::size_t>(k);
  }
  [[nodiscard]] bool uniform_xi(double rel_tol = 1e-9) const;
  static GoursatLattice uniform(UniformAxis xi, UniformAxis eta, UniformAxis x2);
};

struct SlabField {
  GoursatLattice lattice;
  std::vector<double> values;

  SlabField() = default;
  explicit SlabField(GoursatLattice l) : lattice(std::move(l)), values(lattice.size(), 0.0) {}
  static SlabField sample(const GoursatLattice& l, const std::function<double(double, double, double)>& f);

  [[nodiscard]] double operator()(std::size_t i, int j, int k) const { return values[lattice.index(i, j, k)]; }
  double& at(std::size_t i, int j, int k) { return values[lattice.index(i, j, k)]; }
  [[nodiscard]] double max_abs() const;
};

/// Trapezoid integral of weight(xi, eta) * phi^2 over the (xi, eta, x2) slab.
/// With a single xi station the xi-integral is omitted (plane integral).
double weighted_l2(const SlabField& phi, const std::function<double(double, double)>& weight);

/// Finite-difference derivative of a slab field along 0 = xi, 1 = eta, 2 = x2.
SlabField slab_derivative(const SlabField& f, int axis, int scheme_order = 4);

// ---------------------------------------------------------------------------
// Serialization

/// Binary layout: "MLF1", int32 n1, n2, float64 x1_min, x1_max, x2_min, x2_max,
/// time_label, then n1*n2 float64 values (row-major, little-endian host order).
void write_binary(std::ostream& os, const ScalarField& f);
ScalarField read_binary(std::istream& is);
/// "x1,x2,value" header then one triple per node, row-major.
void write_csv(std::ostream& os, const ScalarField& f);

}  // namespace membrane
