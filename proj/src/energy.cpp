#include "membrane/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "membrane/extremal_ops.hpp"

namespace membrane {

// ---------------------------------------------------------------------------
// WeightB

namespace {

double simpson(const WaveProfile& p, double a, double b, int panels) {
  if (b <= a) return 0.0;
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  auto g = [&](double x) {
    const double d = p.d1(x);
    return d * d;
  };
  double s = g(a) + g(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

}  // namespace

WeightB::WeightB(const WaveProfile& profile, const UniformAxis& xi, int substeps) : axis_(xi) {
  if (xi.n < 2 || !(xi.max > xi.min)) throw std::invalid_argument("WeightB: need an increasing axis");
  if (substeps < 2) throw std::invalid_argument("WeightB: substeps must be >= 2");
  b_.resize(static_cast<std::size_t>(xi.n), 0.0);
  double prev = -1.0, acc = 0.0;
  for (int i = 0; i < xi.n; ++i) {
    const double x = xi.at(i);
    if (x > prev) {
      const int cells = std::max(1, static_cast<int>(std::ceil((x - prev) / xi.h() - 1e-9)));
      acc += simpson(profile, prev, x, substeps * cells);
      prev = x;
    }
    b_[static_cast<std::size_t>(i)] = acc;
  }
}

double WeightB::operator()(double xi) const {
  if (xi <= axis_.min) return b_.front();
  if (xi >= axis_.max) return b_.back();
  const double s = (xi - axis_.min) / axis_.h();
  const auto i = std::min(static_cast<std::size_t>(s), b_.size() - 2);
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * b_[i] + f * b_[i + 1];
}

bool WeightB::respects_bounds() const {
  const auto [m, M] = bounds();
  for (double b : b_) {
    const double w = std::exp(-b);
    if (!(w >= m * (1.0 - 1e-12) && w <= M * (1.0 + 1e-12))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Slab energies

double weight_a(double xi, double eta) { return std::pow(2.0 + xi, -1.1) * std::pow(2.0 + eta, -0.1); }
double weight_b(double xi, double eta) { return std::pow(2.0 + xi, -0.1) * std::pow(2.0 + eta, -1.1); }

std::vector<std::vector<VectorFieldId>> gamma_words(int s_num) {
  if (s_num < 0) throw std::invalid_argument("gamma_words: negative length");
  std::vector<std::vector<VectorFieldId>> out{{}};
  std::vector<std::vector<VectorFieldId>> layer{{}};
  for (int l = 0; l < s_num; ++l) {
    std::vector<std::vector<VectorFieldId>> next;
    for (const auto& w : layer)
      for (auto g : kGammaFields) {
        auto v = w;
        v.insert(v.begin(), g);
        next.push_back(std::move(v));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

SlabField apply_goursat(const DiffOp& op, const SlabField& f, int scheme_order) {
  const auto& l = f.lattice;
  SlabField out(l);
  for (const auto& [e, p] : op.terms()) {
    const int order = e[0] + e[1] + e[2];
    if (order > 1) throw std::invalid_argument("apply_goursat: operator must be of order <= 1");
    const int axis = order == 0 ? -1 : (e[0] ? 0 : (e[1] ? 1 : 2));
    const SlabField d = axis < 0 ? f : slab_derivative(f, axis, scheme_order);
    for (std::size_t i = 0; i < l.xi.size(); ++i)
      for (int j = 0; j < l.eta.n; ++j)
        for (int k = 0; k < l.x2.n; ++k) out.at(i, j, k) += p({l.xi[i], l.eta.at(j), l.x2.at(k)}) * d(i, j, k);
  }
  return out;
}

namespace {

void check_s(int s_num) {
  if (s_num < 0 || s_num > 2) throw std::invalid_argument("s_num must be in [0, 2]");
}

SlabField apply_word(const std::vector<VectorFieldId>& word, const SlabField& u, int scheme) {
  SlabField r = u;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = apply_goursat(goursat_op(*it), r, scheme);
  return r;
}

/// Trapezoid integral of weight(xi, eta) * sum of squares over one xi station.
double plane_integral(const std::vector<const SlabField*>& fs, std::size_t i,
                      const std::function<double(double, double)>& weight) {
  const auto& l = fs.front()->lattice;
  double s = 0.0;
  for (int j = 0; j < l.eta.n; ++j) {
    const double wj = (l.eta.n > 1 && (j == 0 || j == l.eta.n - 1)) ? 0.5 : 1.0;
    const double w = weight(l.xi[i], l.eta.at(j));
    for (int k = 0; k < l.x2.n; ++k) {
      const double wk = (l.x2.n > 1 && (k == 0 || k == l.x2.n - 1)) ? 0.5 : 1.0;
      double q = 0.0;
      for (const auto* f : fs) q += (*f)(i, j, k) * (*f)(i, j, k);
      s += wj * wk * w * q;
    }
  }
  return s * (l.eta.n > 1 ? l.eta.h() : 1.0) * (l.x2.n > 1 ? l.x2.h() : 1.0);
}

/// Per-station Es and es densities summed over the Gamma-words.
struct StationSums {
  std::vector<double> Es, es, etilde_raw;
};

StationSums station_sums(const SlabField& u, int s_num, int scheme, bool need_xi) {
  const auto& l = u.lattice;
  const auto nxi = l.xi.size();
  StationSums out{std::vector<double>(nxi, 0.0), std::vector<double>(nxi, 0.0), {}};
  for (const auto& w : gamma_words(s_num)) {
    const SlabField uk = apply_word(w, u, scheme);
    const SlabField d_eta = slab_derivative(uk, 1, scheme);
    const SlabField d_x2 = slab_derivative(uk, 2, scheme);
    SlabField d_xi;
    if (need_xi) d_xi = slab_derivative(uk, 0, scheme);
    for (std::size_t i = 0; i < nxi; ++i) {
      out.es[i] += plane_integral({&d_eta, &d_x2}, i, [](double, double) { return 1.0; });
      if (need_xi)
        out.Es[i] += plane_integral({&d_eta, &d_x2}, i, weight_a) + plane_integral({&d_xi, &d_x2}, i, weight_b);
    }
  }
  return out;
}

}  // namespace

double energy_Es(const SlabField& u, int s_num, int scheme_order) {
  check_s(s_num);
  const auto& l = u.lattice;
  const auto sums = station_sums(u, s_num, scheme_order, true);
  if (l.xi.size() == 1) return sums.Es.front();
  // trapezoid in xi over possibly non-uniform stations
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < l.xi.size(); ++i) s += 0.5 * (l.xi[i + 1] - l.xi[i]) * (sums.Es[i] + sums.Es[i + 1]);
  return s;
}

double energy_es(const SlabField& u, int s_num, int scheme_order) {
  check_s(s_num);
  const auto sums = station_sums(u, s_num, scheme_order, false);
  return *std::max_element(sums.es.begin(), sums.es.end());
}

double energy_etilde(const SlabField& u, double delta, int s_num, int scheme_order) {
  if (!(delta > 0.0 && delta < 0.15)) throw std::invalid_argument("energy_etilde: delta must lie in (0, 3/20)");
  check_s(s_num);
  const auto& l = u.lattice;
  SlabField total(l);
  for (const auto& w : gamma_words(s_num)) {
    const SlabField uk = apply_word(w, u, scheme_order);
    for (std::size_t q = 0; q < total.values.size(); ++q) total.values[q] += std::abs(uk.values[q]);
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < l.xi.size(); ++i) {
    const double w = std::pow(2.0 + l.xi[i], -delta);
    for (int j = 0; j < l.eta.n; ++j)
      for (int k = 0; k < l.x2.n; ++k) sup = std::max(sup, w * total(i, j, k));
  }
  return sup;
}

std::vector<EnergyReport> station_reports(const SlabField& u, int s_num, double delta, int scheme_order) {
  check_s(s_num);
  const auto& l = u.lattice;
  const bool need_xi = l.xi.size() >= static_cast<std::size_t>(scheme_order + 1);
  const auto sums = station_sums(u, s_num, scheme_order, need_xi);
  const SlabField u_eta = slab_derivative(u, 1, scheme_order);
  const SlabField u_x2 = slab_derivative(u, 2, scheme_order);
  SlabField u_xi;
  if (need_xi) u_xi = slab_derivative(u, 0, scheme_order);
  SlabField total(l);
  for (const auto& w : gamma_words(s_num)) {
    const SlabField uk = apply_word(w, u, scheme_order);
    for (std::size_t q = 0; q < total.values.size(); ++q) total.values[q] += std::abs(uk.values[q]);
  }
  const double threshold = std::max(1e-6 * u.max_abs(), 1e-13);
  std::vector<EnergyReport> out;
  for (std::size_t i = 0; i < l.xi.size(); ++i) {
    EnergyReport r;
    r.xi_station = l.xi[i];
    r.Es_proxy = need_xi ? sums.Es[i] : 0.0;
    r.es_proxy = sums.es[i];
    const double w = std::pow(2.0 + l.xi[i], -delta);
    for (int j = 0; j < l.eta.n; ++j)
      for (int k = 0; k < l.x2.n; ++k) {
        r.etildes_proxy = std::max(r.etildes_proxy, w * total(i, j, k));
        const double v = std::abs(u(i, j, k));
        r.sup_u = std::max(r.sup_u, v);
        r.sup_u_eta = std::max(r.sup_u_eta, std::abs(u_eta(i, j, k)));
        r.sup_u_x2 = std::max(r.sup_u_x2, std::abs(u_x2(i, j, k)));
        if (need_xi) r.sup_u_xi = std::max(r.sup_u_xi, std::abs(u_xi(i, j, k)));
        if (v > threshold) r.support_radius_x2 = std::max(r.support_radius_x2, std::abs(l.x2.at(k)));
      }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Time-slice energy

double energy_slice(const ScalarField& u, const ScalarField& u_t, const ScalarField& u_tt, int s_num,
                    int scheme_order) {
  if (s_num < 0 || s_num > 1) throw std::invalid_argument("energy_slice: s_num must be 0 or 1");
  const Grid2D& g = u.grid();
  if (!(u_t.grid() == g) || !(u_tt.grid() == g)) throw std::invalid_argument("energy_slice: grid mismatch");
  const double t = u.time_label();

  // (G, G_t) pairs for every word
  std::vector<std::pair<ScalarField, ScalarField>> fields{{u, u_t}};
  if (s_num == 1) {
    const ScalarField u_x1 = derivative(u, Axis::X1, 1, scheme_order);
    const ScalarField u_x2 = derivative(u, Axis::X2, 1, scheme_order);
    const ScalarField ut_x1 = derivative(u_t, Axis::X1, 1, scheme_order);
    const ScalarField ut_x2 = derivative(u_t, Axis::X2, 1, scheme_order);
    const ScalarField* D[3] = {&u_t, &u_x1, &u_x2};
    const ScalarField* Dt[3] = {&u_tt, &ut_x1, &ut_x2};
    for (auto id : kGammaFields) {
      ScalarField G(g, t), Gt(g, t);
      const DiffOp op = cartesian_op(id);
      for (const auto& [e, p] : op.terms()) {
        const int c = e[0] ? 0 : (e[1] ? 1 : 2);
        const Polynomial pt = p.derivative(0);
        for (int i = 0; i < g.n1; ++i)
          for (int j = 0; j < g.n2; ++j) {
            const std::array<double, 3> x{t, g.x1(i), g.x2(j)};
            const double pv = p(x);
            G.at(i, j) += pv * (*D[c])(i, j);
            Gt.at(i, j) += pt(x) * (*D[c])(i, j) + pv * (*Dt[c])(i, j);
          }
      }
      fields.emplace_back(std::move(G), std::move(Gt));
    }
  }

  ScalarField density(g, t);
  for (const auto& [G, Gt] : fields) {
    const ScalarField G1 = derivative(G, Axis::X1, 1, scheme_order);
    const ScalarField G2 = derivative(G, Axis::X2, 1, scheme_order);
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        const double xi = t + g.x1(i), eta = t - g.x1(i);
        if (xi < -1.0 || eta < -1.0) continue;
        const double g_xi = 0.5 * (Gt(i, j) + G1(i, j));
        const double g_eta = 0.5 * (Gt(i, j) - G1(i, j));
        const double g_x2 = G2(i, j);
        density.at(i, j) += weight_a(xi, eta) * (g_eta * g_eta + g_x2 * g_x2) +
                            weight_b(xi, eta) * (g_xi * g_xi + g_x2 * g_x2);
      }
  }
  return integrate(density);
}

// ---------------------------------------------------------------------------

DecayFit fit_decay(const std::vector<std::pair<double, double>>& stations) {
  std::vector<double> x, y;
  for (const auto& [xi, v] : stations) {
    if (!(v > 0.0) || !(xi > -2.0)) continue;
    x.push_back(std::log(2.0 + xi));
    y.push_back(std::log(v));
  }
  if (x.size() < 5) throw std::invalid_argument("fit_decay: fewer than 5 usable stations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_decay: stations must differ");
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.used = static_cast<int>(x.size());
  return f;
}

double hamiltonian_excess(const ScalarField& v, const ScalarField& v_t, int scheme_order) {
  const Grid2D& g = v.grid();
  const ScalarField v1 = derivative(v, Axis::X1, 1, scheme_order);
  const ScalarField v2 = derivative(v, Axis::X2, 1, scheme_order);
  const ScalarField v11 = derivative(v, Axis::X1, 2, scheme_order);
  const ScalarField v22 = derivative(v, Axis::X2, 2, scheme_order);
  ScalarField e(g, v.time_label());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double vt2 = v_t(i, j) * v_t(i, j);
      const double grad2 = v1(i, j) * v1(i, j) + v2(i, j) * v2(i, j);
      const double delta = 1.0 + grad2 - vt2;
      if (!(delta > 0.0)) throw DegenerateSurfaceError("hamiltonian_excess: surface not timelike");
      // (1 + g)/sqrt(d) - 1 without cancellation for small data
      const double s = std::sqrt(delta);
      const double full = ((1.0 + grad2) * grad2 + vt2) / (1.0 + grad2 + s) / s;
      // quadratic part in the form the second-difference stencils conserve exactly
      const double quad = 0.5 * (vt2 + grad2);
      const double quad_sbp = 0.5 * (vt2 - v(i, j) * (v11(i, j) + v22(i, j)));
      e.at(i, j) = (full - quad) + quad_sbp;
    }
  return integrate(e);
}

}  // namespace membrane
