#pragma once

/// \file taylor.hpp
/// Truncated multivariate Taylor arithmetic.
///
/// A Jet stores the Taylor coefficients c_a = d^a f / a! of a function of up
/// to three variables about a fixed point, truncated at a total degree.
/// Arithmetic on jets propagates exact derivatives (forward-mode automatic
/// differentiation of arbitrary order), which is how analytic PointJets of
/// the exact solutions and the derivative tables of test bumps are produced.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace membrane {

using MultiIndex = std::array<int, 3>;

class Jet {
public:
  Jet() = default;

  /// Constant jet.
  Jet(int dim, int order, double value = 0.0)
      : dim_(dim), order_(order), c_(dense_size(dim, order), 0.0) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Jet: dim must be 1..3");
    if (order < 0 || order > 8) throw std::invalid_argument("Jet: order must be 0..8");
    c_[0] = value;
  }

  /// The coordinate function x_index expanded about `at`.
  static Jet variable(int dim, int order, int index, double at) {
    Jet j(dim, order, at);
    if (order >= 1) j.c_[stride(order, index)] = 1.0;
    return j;
  }

  /// Jets of all coordinate functions at `point`.
  template <std::size_t N>
  static std::array<Jet, N> variables(int order, const std::array<double, N>& point) {
    std::array<Jet, N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = variable(static_cast<int>(N), order, static_cast<int>(i), point[i]);
    return out;
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] double value() const { return c_[0]; }

  /// Taylor coefficient of the monomial with exponents `a`.
  [[nodiscard]] double coeff(const MultiIndex& a) const {
    if (degree(a) > order_) return 0.0;
    for (int i = dim_; i < 3; ++i)
      if (a[static_cast<std::size_t>(i)] != 0) return 0.0;
    return c_[linear(a)];
  }

  /// Partial derivative d^a f at the expansion point.
  [[nodiscard]] double derivative(const MultiIndex& a) const {
    return coeff(a) * factorial(a[0]) * factorial(a[1]) * factorial(a[2]);
  }

  /// Convenience for dim == 1: k-th derivative.
  [[nodiscard]] double d(int k) const { return derivative({k, 0, 0}); }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    return a += s;
  }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet out(a.dim_, a.order_);
    const auto& idx = valid_indices(a.dim_, a.order_);
    for (const auto& ia : idx) {
      const double ca = a.c_[ia.linear];
      if (ca == 0.0) continue;
      for (const auto& ib : idx) {
        if (ia.degree + ib.degree > a.order_) continue;
        out.c_[ia.linear + ib.linear] += ca * b.c_[ib.linear];
      }
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  /// g(self) where `taylor` holds g^(k)(x0)/k! at x0 = value(), k = 0..order.
  [[nodiscard]] Jet compose(std::span<const double> taylor) const {
    if (static_cast<int>(taylor.size()) < order_ + 1)
      throw std::invalid_argument("Jet::compose: not enough Taylor coefficients");
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r(dim_, order_, taylor[static_cast<std::size_t>(order_)]);
    for (int k = order_ - 1; k >= 0; --k) {
      r = r * h;
      r.c_[0] += taylor[static_cast<std::size_t>(k)];
    }
    return r;
  }

  friend Jet exp(const Jet& x) {
    std::vector<double> g(static_cast<std::size_t>(x.order_ + 1));
    const double e = std::exp(x.value());
    double fact = 1.0;
    for (int k = 0; k <= x.order_; ++k) {
      if (k > 0) fact *= k;
      g[static_cast<std::size_t>(k)] = e / fact;
    }
    return x.compose(g);
  }

  friend Jet log(const Jet& x) {
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw std::domain_error("Jet log of non-positive value");
    std::vector<double> g(static_cast<std::size_t>(x.order_ + 1));
    g[0] = std::log(x0);
    for (int k = 1; k <= x.order_; ++k)
      g[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(x0, k));
    return x.compose(g);
  }

  /// x^p for real p (x > 0 unless p is a non-negative integer).
  friend Jet pow(const Jet& x, double p) {
    const double x0 = x.value();
    std::vector<double> g(static_cast<std::size_t>(x.order_ + 1));
    double binom = 1.0;
    for (int k = 0; k <= x.order_; ++k) {
      if (k > 0) binom *= (p - (k - 1)) / k;
      g[static_cast<std::size_t>(k)] = binom * std::pow(x0, p - k);
    }
    return x.compose(g);
  }

  friend Jet reciprocal(const Jet& x) {
    const double x0 = x.value();
    if (x0 == 0.0) throw std::domain_error("Jet reciprocal of zero");
    std::vector<double> g(static_cast<std::size_t>(x.order_ + 1));
    double p = 1.0 / x0;
    for (int k = 0; k <= x.order_; ++k) {
      g[static_cast<std::size_t>(k)] = ((k % 2 == 0) ? 1.0 : -1.0) * p;
      p /= x0;
    }
    return x.compose(g);
  }

  friend Jet sqrt(const Jet& x) { return pow(x, 0.5); }

  friend Jet sin(const Jet& x) { return trig(x, false); }
  friend Jet cos(const Jet& x) { return trig(x, true); }

  friend Jet cosh(const Jet& x) { return 0.5 * (exp(x) + exp(-x)); }
  friend Jet sinh(const Jet& x) { return 0.5 * (exp(x) - exp(-x)); }
  friend Jet sech(const Jet& x) { return reciprocal(cosh(x)); }
  friend Jet tanh(const Jet& x) { return sinh(x) * sech(x); }

private:
  struct Index {
    std::size_t linear;
    int degree;
  };

  static std::size_t dense_size(int dim, int order) {
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(order + 1);
    return n;
  }
  static std::size_t stride(int order, int axis) {
    std::size_t s = 1;
    for (int i = 0; i < axis; ++i) s *= static_cast<std::size_t>(order + 1);
    return s;
  }
  static int degree(const MultiIndex& a) { return a[0] + a[1] + a[2]; }
  static double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  }
  [[nodiscard]] std::size_t linear(const MultiIndex& a) const {
    std::size_t l = 0;
    for (int i = dim_ - 1; i >= 0; --i) l = l * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(a[static_cast<std::size_t>(i)]);
    return l;
  }

  static const std::vector<Index>& valid_indices(int dim, int order) {
    // dim in 1..3, order in 0..8
    static const std::array<std::vector<Index>, 27> cache = [] {
      std::array<std::vector<Index>, 27> tabs;
      for (int d = 1; d <= 3; ++d)
        for (int o = 0; o <= 8; ++o) {
          auto& tab = tabs[static_cast<std::size_t>((d - 1) * 9 + o)];
          const int n = o + 1;
          const int e1 = d > 1 ? n : 1;
          const int e2 = d > 2 ? n : 1;
          for (int k = 0; k < e2; ++k)
            for (int j = 0; j < e1; ++j)
              for (int i = 0; i < n; ++i)
                if (i + j + k <= o)
                  tab.push_back({static_cast<std::size_t>(i + n * (j + n * k)), i + j + k});
        }
      return tabs;
    }();
    return cache[static_cast<std::size_t>((dim - 1) * 9 + order)];
  }

  void check_compatible(const Jet& o) const {
    if (dim_ != o.dim_ || order_ != o.order_) throw std::invalid_argument("Jet: incompatible jets");
  }

  static Jet trig(const Jet& x, bool is_cos) {
    const double s = std::sin(x.value());
    const double c = std::cos(x.value());
    // derivatives of sin: s, c, -s, -c ; of cos: c, -s, -c, s
    const std::array<double, 4> cyc = is_cos ? std::array<double, 4>{c, -s, -c, s}
                                             : std::array<double, 4>{s, c, -s, -c};
    std::vector<double> g(static_cast<std::size_t>(x.order_ + 1));
    double fact = 1.0;
    for (int k = 0; k <= x.order_; ++k) {
      if (k > 0) fact *= k;
      g[static_cast<std::size_t>(k)] = cyc[static_cast<std::size_t>(k % 4)] / fact;
    }
    return x.compose(g);
  }

  int dim_ = 1;
  int order_ = 0;
  std::vector<double> c_ = std::vector<double>(1, 0.0);
};

// Namespace-scope declarations so the elementary functions are also found by
// qualified lookup (e.g. from classes with members of the same name).
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet pow(const Jet& x, double p);
Jet reciprocal(const Jet& x);
Jet sqrt(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet cosh(const Jet& x);
Jet sinh(const Jet& x);
Jet sech(const Jet& x);
Jet tanh(const Jet& x);

}  // namespace membrane
