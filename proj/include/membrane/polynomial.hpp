#pragma once

// Sparse real polynomials in three variables, plus first-order-composable
// differential operators with polynomial coefficients. Used for the exact
// vector-field algebra: commutators, Leibniz defects, Goursat/Cartesian
// duality, and the Gamma-derivative stacks of the inequality tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "membrane/taylor.hpp"

namespace membrane {

class Polynomial {
public:
  using Terms = std::map<MultiIndex, double>;

  Polynomial() = default;
  explicit Polynomial(double c) {
    if (c != 0.0) terms_[{0, 0, 0}] = c;
  }
  static Polynomial monomial(const MultiIndex& e, double c = 1.0) {
    Polynomial p;
    if (c != 0.0) p.terms_[e] = c;
    return p;
  }
  static Polynomial variable(int axis) {
    MultiIndex e{0, 0, 0};
    e[static_cast<std::size_t>(axis)] = 1;
    return monomial(e);
  }

  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  [[nodiscard]] double operator()(const std::array<double, 3>& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
      s += c * ipow(x[0], e[0]) * ipow(x[1], e[1]) * ipow(x[2], e[2]);
    return s;
  }

  [[nodiscard]] Polynomial derivative(int axis) const {
    Polynomial out;
    for (const auto& [e, c] : terms_) {
      const int k = e[static_cast<std::size_t>(axis)];
      if (k == 0) continue;
      MultiIndex f = e;
      f[static_cast<std::size_t>(axis)] -= 1;
      out.add(f, c * k);
    }
    return out;
  }

  /// p(q0(y), q1(y), q2(y)).
  [[nodiscard]] Polynomial substitute(const std::array<Polynomial, 3>& q) const {
    Polynomial out;
    for (const auto& [e, c] : terms_) {
      Polynomial term(c);
      for (std::size_t a = 0; a < 3; ++a)
        for (int k = 0; k < e[a]; ++k) term = term * q[a];
      out += term;
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        out.add({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return out;
  }

  /// Random polynomial of total degree <= deg with coefficients in [-1, 1].
  template <class Rng>
  static Polynomial random(Rng& rng, int deg) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Polynomial p;
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j)
        for (int k = 0; i + j + k <= deg; ++k) p.add({i, j, k}, coef(rng));
    return p;
  }

private:
  static double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }
  void add(const MultiIndex& e, double c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != 0.0) terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }

  Terms terms_;
};

/// Linear differential operator sum_a p_a(y) d^a with polynomial coefficients.
class DiffOp {
public:
  using Terms = std::map<MultiIndex, Polynomial>;

  /// The identity operator.
  static DiffOp identity() {
    DiffOp d;
    d.terms_[{0, 0, 0}] = Polynomial(1.0);
    return d;
  }
  /// sum_i coeffs[i] * d/dy_i.
  static DiffOp first_order(const std::array<Polynomial, 3>& coeffs) {
    DiffOp d;
    for (int i = 0; i < 3; ++i) {
      if (coeffs[static_cast<std::size_t>(i)].is_zero()) continue;
      MultiIndex e{0, 0, 0};
      e[static_cast<std::size_t>(i)] = 1;
      d.terms_[e] = coeffs[static_cast<std::size_t>(i)];
    }
    return d;
  }
  static DiffOp partial(int axis) {
    std::array<Polynomial, 3> c;
    c[static_cast<std::size_t>(axis)] = Polynomial(1.0);
    return first_order(c);
  }

  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] int order() const {
    int o = 0;
    for (const auto& [e, p] : terms_) o = std::max(o, e[0] + e[1] + e[2]);
    return o;
  }

  /// (this o other): apply `other` first, then this.
  [[nodiscard]] DiffOp compose(const DiffOp& other) const {
    if (order() > 1) throw std::invalid_argument("DiffOp::compose: left factor must be first order");
    DiffOp out;
    for (const auto& [el, pl] : terms_) {
      const int axis = el[0] == 1 ? 0 : (el[1] == 1 ? 1 : (el[2] == 1 ? 2 : -1));
      for (const auto& [er, pr] : other.terms_) {
        if (axis < 0) {  // multiplication operator
          out.add(er, pl * pr);
          continue;
        }
        out.add(er, pl * pr.derivative(axis));
        MultiIndex e = er;
        e[static_cast<std::size_t>(axis)] += 1;
        out.add(e, pl * pr);
      }
    }
    return out;
  }

  DiffOp& operator+=(const DiffOp& o) {
    for (const auto& [e, p] : o.terms_) add(e, p);
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  DiffOp& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, p] : terms_) p *= s;
    return *this;
  }
  friend DiffOp operator*(double s, DiffOp a) { return a *= s; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a += (-1.0) * b; }

  /// Apply to a function given through its partial derivatives at y.
  [[nodiscard]] double apply(const std::array<double, 3>& y,
                             const std::function<double(const MultiIndex&)>& partials) const {
    double s = 0.0;
    for (const auto& [e, p] : terms_) s += p(y) * partials(e);
    return s;
  }

  /// Apply to a polynomial exactly.
  [[nodiscard]] Polynomial apply(const Polynomial& f) const {
    Polynomial out;
    for (const auto& [e, p] : terms_) {
      Polynomial g = f;
      for (int a = 0; a < 3; ++a)
        for (int k = 0; k < e[static_cast<std::size_t>(a)]; ++k) g = g.derivative(a);
      out += p * g;
    }
    return out;
  }

private:
  void add(const MultiIndex& e, const Polynomial& p) {
    if (p.is_zero()) return;
    auto& slot = terms_[e];
    slot += p;
    if (slot.is_zero()) terms_.erase(e);
  }

  Terms terms_;
};

}  // namespace membrane
