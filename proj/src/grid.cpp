#include "membrane/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace membrane {

// ---------------------------------------------------------------------------
// Grid2D

Grid2D::Grid2D(double x1_lo, double x1_hi, double x2_lo, double x2_hi, int n1_, int n2_)
    : x1_min(x1_lo), x1_max(x1_hi), x2_min(x2_lo), x2_max(x2_hi), n1(n1_), n2(n2_) {
  if (n1 < 9 || n2 < 9) throw std::invalid_argument("Grid2D: need at least 9 points per axis");
  if (!(x1_hi > x1_lo) || !(x2_hi > x2_lo)) throw std::invalid_argument("Grid2D: empty extent");
}

Grid2D Grid2D::square(double half_width, int n) { return {-half_width, half_width, -half_width, half_width, n, n}; }

double Grid2D::h_min() const { return std::min(h1(), h2()); }

double Grid2D::half_width() const {
  return std::min({-x1_min, x1_max, -x2_min, x2_max});
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid2D& grid, double time_label) : grid_(grid), v_(grid.size(), 0.0), time_(time_label) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values, double time_label)
    : grid_(grid), v_(std::move(values)), time_(time_label) {
  if (v_.size() != grid_.size()) throw std::invalid_argument("ScalarField: value count does not match grid");
  if (!all_finite()) throw std::domain_error("ScalarField: non-finite value");
}

ScalarField ScalarField::sample(const Grid2D& grid, const std::function<double(double, double)>& f,
                                double time_label) {
  ScalarField out(grid, time_label);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) out.at(i, j) = f(grid.x1(i), grid.x2(j));
  if (!out.all_finite()) throw std::domain_error("ScalarField::sample: non-finite value");
  return out;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

double ScalarField::support_radius(double threshold) const {
  double r2 = 0.0;
  for (int i = 0; i < grid_.n1; ++i) {
    const double x1 = grid_.x1(i);
    for (int j = 0; j < grid_.n2; ++j) {
      if (std::abs((*this)(i, j)) <= threshold) continue;
      const double x2 = grid_.x2(j);
      r2 = std::max(r2, x1 * x1 + x2 * x2);
    }
  }
  return std::sqrt(r2);
}

double ScalarField::interpolate(double x1, double x2) const {
  const double s1 = (x1 - grid_.x1_min) / grid_.h1();
  const double s2 = (x2 - grid_.x2_min) / grid_.h2();
  constexpr double slack = 1e-9;
  if (s1 < -slack || s2 < -slack || s1 > grid_.n1 - 1 + slack || s2 > grid_.n2 - 1 + slack)
    throw std::out_of_range("ScalarField::interpolate: point outside grid");
  const int i = std::clamp(static_cast<int>(std::floor(s1)), 0, grid_.n1 - 2);
  const int j = std::clamp(static_cast<int>(std::floor(s2)), 0, grid_.n2 - 2);
  const double a = std::clamp(s1 - i, 0.0, 1.0);
  const double b = std::clamp(s2 - j, 0.0, 1.0);
  return (1 - a) * (1 - b) * (*this)(i, j) + a * (1 - b) * (*this)(i + 1, j) + (1 - a) * b * (*this)(i, j + 1) +
         a * b * (*this)(i + 1, j + 1);
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// PointJet

PointJet PointJet::from_taylor(const Jet& j) {
  if (j.dim() != 3 || j.order() < 2) throw std::invalid_argument("PointJet::from_taylor: need a 3-variable jet of order >= 2");
  PointJet p;
  p.value = j.value();
  p.d_t = j.derivative({1, 0, 0});
  p.d_x1 = j.derivative({0, 1, 0});
  p.d_x2 = j.derivative({0, 0, 1});
  p.d_tt = j.derivative({2, 0, 0});
  p.d_tx1 = j.derivative({1, 1, 0});
  p.d_tx2 = j.derivative({1, 0, 1});
  p.d_x1x1 = j.derivative({0, 2, 0});
  p.d_x1x2 = j.derivative({0, 1, 1});
  p.d_x2x2 = j.derivative({0, 0, 2});
  return p;
}

PointJet operator+(const PointJet& a, const PointJet& b) {
  return {a.value + b.value,   a.d_t + b.d_t,       a.d_x1 + b.d_x1,     a.d_x2 + b.d_x2,     a.d_tt + b.d_tt,
          a.d_tx1 + b.d_tx1,   a.d_tx2 + b.d_tx2,   a.d_x1x1 + b.d_x1x1, a.d_x1x2 + b.d_x1x2, a.d_x2x2 + b.d_x2x2};
}

PointJet operator-(const PointJet& a, const PointJet& b) { return a + (-1.0) * b; }

PointJet operator*(double s, const PointJet& a) {
  return {s * a.value, s * a.d_t, s * a.d_x1, s * a.d_x2, s * a.d_tt,
          s * a.d_tx1, s * a.d_tx2, s * a.d_x1x1, s * a.d_x1x2, s * a.d_x2x2};
}

// ---------------------------------------------------------------------------
// Bumps

double unit_bump(double rho, int smoothness) {
  const double q = 1.0 - rho * rho;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / std::pow(q, smoothness));
}

ScalarField make_bump(const Grid2D& grid, std::array<double, 2> center, double radius, double amplitude,
                      int smoothness) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_bump: radius must be positive");
  if (smoothness < 1) throw std::invalid_argument("make_bump: smoothness must be a positive integer");
  if (center[0] - radius < grid.x1_min || center[0] + radius > grid.x1_max || center[1] - radius < grid.x2_min ||
      center[1] + radius > grid.x2_max)
    throw std::invalid_argument("bump escapes grid");
  return ScalarField::sample(grid, [&](double x1, double x2) {
    const double dx = x1 - center[0];
    const double dy = x2 - center[1];
    return amplitude * unit_bump(std::sqrt(dx * dx + dy * dy) / radius, smoothness);
  });
}

// ---------------------------------------------------------------------------
// Finite differences

std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids" (1988).
  const int n = static_cast<int>(x.size()) - 1;
  if (n < m) throw std::invalid_argument("fd_weights: not enough nodes for the derivative order");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

namespace {

struct Stencil {
  int start = 0;
  std::vector<double> w;
};

/// One stencil per node of a line of nodes; weights already include spacing.
std::vector<Stencil> plan_line(std::span<const double> nodes, int order, int scheme_order) {
  if (order < 1 || order > 2) throw std::invalid_argument("derivative: order must be 1 or 2");
  if (scheme_order != 2 && scheme_order != 4) throw std::invalid_argument("derivative: scheme_order must be 2 or 4");
  const int n = static_cast<int>(nodes.size());
  const int half = scheme_order / 2;
  const int central = scheme_order + 1;
  const int one_sided = order == 1 ? scheme_order + 1 : scheme_order + 2;
  if (n < one_sided) throw std::invalid_argument("derivative: grid too small for stencil");
  std::vector<Stencil> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int start = 0;
    int width = 0;
    if (i - half >= 0 && i + half <= n - 1) {
      start = i - half;
      width = central;
    } else {
      width = one_sided;
      start = std::clamp(i - width / 2, 0, n - width);
    }
    // Node offsets relative to the evaluation point keep the weights well conditioned.
    std::vector<double> rel(static_cast<std::size_t>(width));
    for (int k = 0; k < width; ++k) rel[static_cast<std::size_t>(k)] = nodes[static_cast<std::size_t>(start + k)] - nodes[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {start, fd_weights(0.0, rel, order)};
  }
  return out;
}

std::vector<double> axis_nodes(const Grid2D& g, Axis a) {
  const int n = g.n(a);
  std::vector<double> x(static_cast<std::size_t>(n));
  // Offsets only matter relative to each other; use index * h.
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i * g.h(a);
  return x;
}

}  // namespace

ScalarField derivative(const ScalarField& f, Axis axis, int order, int scheme_order) {
  const Grid2D& g = f.grid();
  const auto plan = plan_line(axis_nodes(g, axis), order, scheme_order);
  ScalarField out(g, f.time_label());
  const auto in = f.values();
  auto& dst = out.data();
  const auto n2 = static_cast<std::size_t>(g.n2);
  if (axis == Axis::X1) {
    for (int i = 0; i < g.n1; ++i) {
      const Stencil& s = plan[static_cast<std::size_t>(i)];
      double* row = dst.data() + static_cast<std::size_t>(i) * n2;
      for (std::size_t k = 0; k < s.w.size(); ++k) {
        const double w = s.w[k];
        const double* src = in.data() + static_cast<std::size_t>(s.start + static_cast<int>(k)) * n2;
        for (std::size_t j = 0; j < n2; ++j) row[j] += w * src[j];
      }
    }
  } else {
    for (int i = 0; i < g.n1; ++i) {
      const double* src = in.data() + static_cast<std::size_t>(i) * n2;
      double* row = dst.data() + static_cast<std::size_t>(i) * n2;
      for (std::size_t j = 0; j < n2; ++j) {
        const Stencil& s = plan[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * src[static_cast<std::size_t>(s.start) + k];
        row[j] = acc;
      }
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  const Grid2D& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g.n1; ++i) {
    const double wi = (i == 0 || i == g.n1 - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.n2; ++j) {
      const double wj = (j == 0 || j == g.n2 - 1) ? 0.5 : 1.0;
      s += wi * wj * f(i, j);
    }
  }
  return s * g.h1() * g.h2();
}

double l2_norm(const ScalarField& f) {
  ScalarField sq = f;
  for (double& x : sq.data()) x *= x;
  return std::sqrt(integrate(sq));
}

namespace {

ScalarField repeated_derivative(const ScalarField& f, Axis axis, int count, int scheme_order) {
  ScalarField out = f;
  while (count >= 2) {
    out = derivative(out, axis, 2, scheme_order);
    count -= 2;
  }
  if (count == 1) out = derivative(out, axis, 1, scheme_order);
  return out;
}

}  // namespace

double h_norm(const ScalarField& f, int m, int scheme_order) {
  if (m < 0) throw std::invalid_argument("h_norm: negative order");
  double sum = 0.0;
  for (int a = 0; a <= m; ++a) {
    const ScalarField da = repeated_derivative(f, Axis::X1, a, scheme_order);
    for (int b = 0; a + b <= m; ++b) {
      const double n = l2_norm(repeated_derivative(da, Axis::X2, b, scheme_order));
      sum += n * n;
    }
  }
  return std::sqrt(sum);
}

double sobolev_norm(std::span<const std::pair<ScalarField, ScalarField>> fields, int s, int scheme_order) {
  if (s < 0 || s > 4) throw std::invalid_argument("sobolev_norm: s must be in [0, 4]");
  double total = 0.0;
  for (const auto& [f, g] : fields) total += h_norm(f, s + 1, scheme_order) + h_norm(g, s, scheme_order);
  return total;
}

// ---------------------------------------------------------------------------
// Goursat slabs

bool GoursatLattice::uniform_xi(double rel_tol) const {
  if (xi.size() < 2) return true;
  const double h = xi[1] - xi[0];
  for (std::size_t i = 2; i < xi.size(); ++i)
    if (std::abs((xi[i] - xi[i - 1]) - h) > rel_tol * std::abs(h)) return false;
  return true;
}

GoursatLattice GoursatLattice::uniform(UniformAxis xi_axis, UniformAxis eta, UniformAxis x2) {
  GoursatLattice l;
  l.xi.resize(static_cast<std::size_t>(xi_axis.n));
  for (int i = 0; i < xi_axis.n; ++i) l.xi[static_cast<std::size_t>(i)] = xi_axis.at(i);
  l.eta = eta;
  l.x2 = x2;
  return l;
}

SlabField SlabField::sample(const GoursatLattice& l, const std::function<double(double, double, double)>& f) {
  SlabField out(l);
  for (std::size_t i = 0; i < l.xi.size(); ++i)
    for (int j = 0; j < l.eta.n; ++j)
      for (int k = 0; k < l.x2.n; ++k) out.at(i, j, k) = f(l.xi[i], l.eta.at(j), l.x2.at(k));
  return out;
}

double SlabField::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

namespace {

std::vector<double> trapezoid_weights(std::span<const double> x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

std::vector<double> uniform_trapezoid_weights(const UniformAxis& a) {
  std::vector<double> x(static_cast<std::size_t>(a.n));
  for (int i = 0; i < a.n; ++i) x[static_cast<std::size_t>(i)] = a.at(i);
  return trapezoid_weights(x);
}

}  // namespace

double weighted_l2(const SlabField& phi, const std::function<double(double, double)>& weight) {
  const auto& l = phi.lattice;
  const auto wxi = l.xi.size() > 1 ? trapezoid_weights(l.xi) : std::vector<double>(1, 1.0);
  const auto weta = uniform_trapezoid_weights(l.eta);
  const auto wx2 = uniform_trapezoid_weights(l.x2);
  double s = 0.0;
  for (std::size_t i = 0; i < l.xi.size(); ++i)
    for (int j = 0; j < l.eta.n; ++j) {
      const double w = weight(l.xi[i], l.eta.at(j)) * wxi[i] * weta[static_cast<std::size_t>(j)];
      if (w == 0.0) continue;
      double line = 0.0;
      for (int k = 0; k < l.x2.n; ++k) {
        const double v = phi(i, j, k);
        line += wx2[static_cast<std::size_t>(k)] * v * v;
      }
      s += w * line;
    }
  return s;
}

SlabField slab_derivative(const SlabField& f, int axis, int scheme_order) {
  const auto& l = f.lattice;
  std::vector<double> nodes;
  if (axis == 0) {
    nodes = l.xi;
  } else {
    const UniformAxis& a = axis == 1 ? l.eta : l.x2;
    for (int i = 0; i < a.n; ++i) nodes.push_back(a.at(i));
  }
  std::vector<Stencil> plan;
  try {
    plan = plan_line(nodes, 1, scheme_order);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("slab too small for stencils");
  }
  SlabField out(l);
  const auto nxi = l.xi.size();
  for (std::size_t i = 0; i < nxi; ++i)
    for (int j = 0; j < l.eta.n; ++j)
      for (int k = 0; k < l.x2.n; ++k) {
        const int pos = axis == 0 ? static_cast<int>(i) : (axis == 1 ? j : k);
        const Stencil& s = plan[static_cast<std::size_t>(pos)];
        double acc = 0.0;
        for (std::size_t q = 0; q < s.w.size(); ++q) {
          const int p = s.start + static_cast<int>(q);
          const double v = axis == 0 ? f(static_cast<std::size_t>(p), j, k) : (axis == 1 ? f(i, p, k) : f(i, j, p));
          acc += s.w[q] * v;
        }
        out.at(i, j, k) = acc;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
constexpr char kMagic[4] = {'M', 'L', 'F', '1'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("read_binary: truncated field");
  return v;
}
}  // namespace

void write_binary(std::ostream& os, const ScalarField& f) {
  const Grid2D& g = f.grid();
  os.write(kMagic, 4);
  put<std::int32_t>(os, g.n1);
  put<std::int32_t>(os, g.n2);
  put(os, g.x1_min);
  put(os, g.x1_max);
  put(os, g.x2_min);
  put(os, g.x2_max);
  put(os, f.time_label());
  const auto v = f.values();
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

ScalarField read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("read_binary: bad magic");
  const auto n1 = get<std::int32_t>(is);
  const auto n2 = get<std::int32_t>(is);
  const auto a = get<double>(is);
  const auto b = get<double>(is);
  const auto c = get<double>(is);
  const auto d = get<double>(is);
  const auto t = get<double>(is);
  Grid2D g(a, b, c, d, n1, n2);
  std::vector<double> v(g.size());
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_binary: truncated field");
  return {g, std::move(v), t};
}

void write_csv(std::ostream& os, const ScalarField& f) {
  const Grid2D& g = f.grid();
  os << "x1,x2,value\n";
  char buf[96];
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g\n", g.x1(i), g.x2(j), f(i, j));
      os << buf;
    }
}

}  // namespace membrane
