#include "membrane/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "membrane/vector_fields.hpp"

namespace membrane {

namespace {

constexpr int kTableOrder = 4;
constexpr double kRhsFloor = 1e-14;
constexpr double kLhsFloor = 1e-10;

/// b^(k)(s) for s = (y - c)/w, scaled by w^-k, k = 0..kTableOrder.
std::array<double, kTableOrder + 1> axis_table(double y, double c, double w) {
  std::array<double, kTableOrder + 1> out{};
  const double s = (y - c) / w;
  if (std::abs(s) >= 1.0) return out;
  const Jet x = Jet::variable(1, kTableOrder, 0, s);
  const Jet b = exp(-1.0 * reciprocal(1.0 - x * x));
  double scale = 1.0;
  for (int k = 0; k <= kTableOrder; ++k) {
    out[static_cast<std::size_t>(k)] = b.d(k) * scale;
    scale /= w;
  }
  return out;
}

struct CompiledOp {
  struct Mono {
    int a, b, c;
    double coef;
  };
  struct Term {
    MultiIndex e;
    std::vector<Mono> monos;
  };
  std::vector<Term> terms;
};

CompiledOp compile(const DiffOp& op) {
  CompiledOp c;
  for (const auto& [e, p] : op.terms()) {
    if (e[0] > kTableOrder || e[1] > kTableOrder || e[2] > kTableOrder)
      throw std::logic_error("operator order exceeds the derivative tables");
    CompiledOp::Term t{e, {}};
    for (const auto& [m, coef] : p.terms()) t.monos.push_back({m[0], m[1], m[2], coef});
    c.terms.push_back(std::move(t));
  }
  return c;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

/// Samples of a bump and operators applied to it on one xi plane; the (eta, x2)
/// lattice spans the support box of `box`.
class PlaneSampler {
public:
  PlaneSampler(const ConeBump& f, const ConeBump& box, double xi, int n) : xi_(xi), n_(n) {
    if (n < 3) throw std::invalid_argument("PlaneSampler: need at least 3 points per axis");
    eta_lo_ = box.center[1] - box.width[1];
    x2_lo_ = box.center[2] - box.width[2];
    h_eta_ = 2.0 * box.width[1] / (n - 1);
    h_x2_ = 2.0 * box.width[2] / (n - 1);
    txi_ = axis_table(xi, f.center[0], f.width[0]);
    for (double& v : txi_) v *= f.amplitude;
    teta_.resize(static_cast<std::size_t>(n));
    tx2_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      teta_[static_cast<std::size_t>(j)] = axis_table(eta(j), f.center[1], f.width[1]);
      tx2_[static_cast<std::size_t>(j)] = axis_table(x2(j), f.center[2], f.width[2]);
    }
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double xi() const { return xi_; }
  [[nodiscard]] double eta(int j) const { return eta_lo_ + j * h_eta_; }
  [[nodiscard]] double x2(int k) const { return x2_lo_ + k * h_x2_; }

  [[nodiscard]] std::vector<double> field(const CompiledOp& op) const {
    std::vector<double> out(static_cast<std::size_t>(n_ * n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      const double y = eta(j);
      const auto& te = teta_[static_cast<std::size_t>(j)];
      for (int k = 0; k < n_; ++k) {
        const double z = x2(k);
        const auto& tz = tx2_[static_cast<std::size_t>(k)];
        double s = 0.0;
        for (const auto& t : op.terms) {
          const double d = txi_[static_cast<std::size_t>(t.e[0])] * te[static_cast<std::size_t>(t.e[1])] *
                           tz[static_cast<std::size_t>(t.e[2])];
          if (d == 0.0) continue;
          double c = 0.0;
          for (const auto& m : t.monos) c += m.coef * ipow(xi_, m.a) * ipow(y, m.b) * ipow(z, m.c);
          s += c * d;
        }
        out[static_cast<std::size_t>(j * n_ + k)] = s;
      }
    }
    return out;
  }

  /// Trapezoid L2 norm over the (eta, x2) box.
  [[nodiscard]] double l2(const std::vector<double>& v) const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double wj = (j == 0 || j == n_ - 1) ? 0.5 : 1.0;
      for (int k = 0; k < n_; ++k) {
        const double wk = (k == 0 || k == n_ - 1) ? 0.5 : 1.0;
        const double x = v[static_cast<std::size_t>(j * n_ + k)];
        s += wj * wk * x * x;
      }
    }
    return std::sqrt(s * h_eta_ * h_x2_);
  }

private:
  double xi_;
  int n_;
  double eta_lo_ = 0.0, x2_lo_ = 0.0, h_eta_ = 0.0, h_x2_ = 0.0;
  std::array<double, kTableOrder + 1> txi_{};
  std::vector<std::array<double, kTableOrder + 1>> teta_, tx2_;
};

struct OperatorSets {
  CompiledOp id, d_xi, d_eta, d_x2;
  std::vector<CompiledOp> gammas;
  std::vector<CompiledOp> sobolev;          // |k1|, |k2| <= 1
  std::vector<CompiledOp> sobolev_full;     // |k1| + |k2| <= 2
  std::vector<CompiledOp> sobolev_eta;      // restricted set applied to phi_eta
  std::vector<CompiledOp> derivative_x2;    // |k1| + |k2| <= 2 applied to phi_x2
  std::vector<CompiledOp> corollary;        // |k1| + |k2| <= 1 applied to D phi
};

std::vector<DiffOp> restricted_set(const DiffOp& right) {
  std::vector<DiffOp> out{right};
  const DiffOp nab[2] = {DiffOp::partial(1), DiffOp::partial(2)};
  for (auto g : kGammaFields) out.push_back(goursat_op(g).compose(right));
  for (const auto& d : nab) out.push_back(d.compose(right));
  for (auto g : kGammaFields)
    for (const auto& d : nab) out.push_back(goursat_op(g).compose(d.compose(right)));
  return out;
}

std::vector<DiffOp> full_set(const DiffOp& right) {
  std::vector<DiffOp> out{right};
  const DiffOp nab[2] = {DiffOp::partial(1), DiffOp::partial(2)};
  for (auto g : kGammaFields) out.push_back(goursat_op(g).compose(right));
  for (const auto& d : nab) out.push_back(d.compose(right));
  for (auto g1 : kGammaFields)
    for (auto g2 : kGammaFields) out.push_back(goursat_op(g1).compose(goursat_op(g2).compose(right)));
  for (auto g : kGammaFields)
    for (const auto& d : nab) out.push_back(goursat_op(g).compose(d.compose(right)));
  for (const auto& d1 : nab)
    for (const auto& d2 : nab) out.push_back(d1.compose(d2.compose(right)));
  return out;
}

std::vector<CompiledOp> compile_all(const std::vector<DiffOp>& ops) {
  std::vector<CompiledOp> out;
  for (const auto& o : ops) out.push_back(compile(o));
  return out;
}

const OperatorSets& operators() {
  static const OperatorSets sets = [] {
    OperatorSets s;
    s.id = compile(DiffOp::identity());
    s.d_xi = compile(DiffOp::partial(0));
    s.d_eta = compile(DiffOp::partial(1));
    s.d_x2 = compile(DiffOp::partial(2));
    for (auto g : kGammaFields) s.gammas.push_back(compile(goursat_op(g)));
    s.sobolev = compile_all(restricted_set(DiffOp::identity()));
    s.sobolev_full = compile_all(full_set(DiffOp::identity()));
    s.sobolev_eta = compile_all(restricted_set(DiffOp::partial(1)));
    s.derivative_x2 = compile_all(full_set(DiffOp::partial(2)));
    std::vector<DiffOp> cor;
    const DiffOp nab[2] = {DiffOp::partial(1), DiffOp::partial(2)};
    for (const auto& d : nab) cor.push_back(d);
    for (auto g : kGammaFields)
      for (const auto& d : nab) cor.push_back(goursat_op(g).compose(d));
    for (const auto& d1 : nab)
      for (const auto& d2 : nab) cor.push_back(d1.compose(d2));
    s.corollary = compile_all(cor);
    return s;
  }();
  return sets;
}

double norm_sum(const PlaneSampler& s, const std::vector<CompiledOp>& ops) {
  double total = 0.0;
  for (const auto& op : ops) total += s.l2(s.field(op));
  return total;
}

std::vector<double> xi_planes(const ConeBump& phi, int planes) {
  std::vector<double> out;
  if (planes <= 1) return {phi.center[0]};
  for (int p = 0; p < planes; ++p) out.push_back(phi.center[0] + phi.width[0] * (-0.6 + 1.2 * p / (planes - 1)));
  return out;
}

void accumulate(RatioSample& r, double lhs, double rhs) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    r.ratio = std::numeric_limits<double>::infinity();
    return;
  }
  if (rhs < kRhsFloor) {
    if (lhs > kLhsFloor) ++r.violations;
    return;
  }
  r.ratio = std::max(r.ratio, lhs / rhs);
}

double euclid(const std::vector<std::vector<double>>& f, std::size_t p) {
  double s = 0.0;
  for (const auto& v : f) s += v[p] * v[p];
  return std::sqrt(s);
}

std::vector<std::vector<double>> gamma_fields(const PlaneSampler& s) {
  std::vector<std::vector<double>> out;
  for (const auto& g : operators().gammas) out.push_back(s.field(g));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bumps and families

double ConeBump::partial(const MultiIndex& e, double xi, double eta, double x2) const {
  for (int a : e)
    if (a < 0 || a > kTableOrder) throw std::invalid_argument("ConeBump::partial: order out of range");
  const auto a = axis_table(xi, center[0], width[0]);
  const auto b = axis_table(eta, center[1], width[1]);
  const auto c = axis_table(x2, center[2], width[2]);
  return amplitude * a[static_cast<std::size_t>(e[0])] * b[static_cast<std::size_t>(e[1])] *
         c[static_cast<std::size_t>(e[2])];
}

bool ConeBump::inside_cone() const {
  const double xi_lo = center[0] - width[0];
  const double eta_lo = center[1] - width[1];
  if (xi_lo < -1.0 || eta_lo < -1.0) return false;
  return std::abs(center[2]) + width[2] < std::sqrt((2.0 + xi_lo) * (2.0 + eta_lo));
}

ConeBump ConeBump::scaled(double s) const {
  ConeBump b = *this;
  b.amplitude *= s;
  return b;
}

ConeBump ConeBump::translated(int axis, double new_center) const {
  ConeBump b = *this;
  b.center[static_cast<std::size_t>(axis)] = new_center;
  return b;
}

ConeBump standard_bump(double xi_center, double eta_center) {
  return ConeBump{1.0, {xi_center, eta_center, 0.0}, {1.0, 1.0, 1.0}};
}

namespace {

ConeBump standard_partner(const ConeBump& phi) {
  ConeBump p = phi;
  p.width = {0.7 * phi.width[0], 0.8 * phi.width[1], 0.9 * phi.width[2]};
  p.amplitude = 0.8 * phi.amplitude;
  return p;
}

double log_uniform(std::mt19937_64& rng, const Interval& r) {
  std::uniform_real_distribution<double> u(std::log(r.lo), std::log(r.hi));
  return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, const Interval& r) {
  std::uniform_real_distribution<double> u(r.lo, r.hi);
  return u(rng);
}

}  // namespace

std::vector<ConeBump> ConeBumpFamily::members() const {
  if (count < 0) throw std::invalid_argument("ConeBumpFamily: negative count");
  if (xi_range.lo < -1.0 || eta_range.lo < -1.0) throw std::invalid_argument("ConeBumpFamily: ranges must lie in xi, eta >= -1");
  std::mt19937_64 rng(seed);
  std::vector<ConeBump> out;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000000) throw std::runtime_error("ConeBumpFamily: rejection sampling did not converge");
    ConeBump b;
    b.center[0] = uniform(rng, xi_range);
    b.center[1] = uniform(rng, eta_range);
    for (double& w : b.width) w = log_uniform(rng, width_range);
    b.amplitude = log_uniform(rng, amplitude_range);
    const double xi_lo = b.center[0] - b.width[0];
    const double eta_lo = b.center[1] - b.width[1];
    if (xi_lo < -1.0 || eta_lo < -1.0) continue;
    const double R = std::sqrt((2.0 + xi_lo) * (2.0 + eta_lo)) - b.width[2];
    if (R <= 0.0) continue;
    b.center[2] = uniform(rng, {-0.95 * R, 0.95 * R});
    if (b.inside_cone()) out.push_back(b);
  }
  return out;
}

std::vector<ConeBump> ConeBumpFamily::partners() const {
  const auto m = members();
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<ConeBump> out;
  for (const auto& b : m) {
    ConeBump p = b;
    for (double& w : p.width) w *= uniform(rng, {0.5, 1.0});
    p.amplitude = log_uniform(rng, amplitude_range);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Estimates

std::string to_string(Estimate e) {
  switch (e) {
    case Estimate::hardy_cone:
      return "hardy_cone";
    case Estimate::hardy_pointwise:
      return "hardy_pointwise";
    case Estimate::nullform_xi:
      return "nullform_xi";
    case Estimate::nullform_eta:
      return "nullform_eta";
    case Estimate::sobolev:
      return "sobolev";
    case Estimate::derivative_eta:
      return "derivative_eta";
    case Estimate::derivative_xi:
      return "derivative_xi";
    case Estimate::corollary:
      break;
  }
  return "corollary";
}

Estimate estimate_from_string(const std::string& name) {
  for (auto e : {Estimate::hardy_cone, Estimate::hardy_pointwise, Estimate::nullform_xi, Estimate::nullform_eta,
                 Estimate::sobolev, Estimate::derivative_eta, Estimate::derivative_xi, Estimate::corollary})
    if (to_string(e) == name) return e;
  throw std::invalid_argument("unknown estimate: " + name);
}

int translation_axis(Estimate e) {
  switch (e) {
    case Estimate::nullform_eta:
    case Estimate::derivative_eta:
    case Estimate::corollary:
      return 1;
    default:
      return 0;
  }
}

bool RatioReport::finite() const { return std::isfinite(max_ratio) && std::isfinite(refinement_drift); }

bool RatioReport::accepted(double drift_tol) const { return finite() && violations == 0 && refinement_drift < drift_tol; }

RatioSample estimate_ratio(Estimate e, const ConeBump& phi, const ConeBump& psi, const SampleSpec& spec) {
  const auto& ops = operators();
  RatioSample r;
  for (double xi : xi_planes(phi, spec.planes)) {
    const PlaneSampler s(phi, phi, xi, spec.n);
    const int n = s.n();
    const auto np = static_cast<std::size_t>(n * n);
    switch (e) {
      case Estimate::hardy_cone: {
        const auto f = s.field(ops.id);
        auto w = f;
        for (int j = 0; j < n; ++j) {
          const double a = std::sqrt((3.0 + xi) * (3.0 + s.eta(j)));
          for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(j * n + k)] /= a - std::abs(s.x2(k));
        }
        accumulate(r, s.l2(w), s.l2(s.field(ops.d_x2)));
        break;
      }
      case Estimate::hardy_pointwise: {
        const auto f = s.field(ops.id);
        // sup of |phi_x2| along each x2 line on a finer lattice
        const int m = std::max(spec.line, 3);
        const double lo = phi.center[2] - phi.width[2];
        const double h = 2.0 * phi.width[2] / (m - 1);
        for (int j = 0; j < n; ++j) {
          double sup = 0.0;
          for (int q = 0; q < m; ++q) sup = std::max(sup, std::abs(phi.partial({0, 0, 1}, xi, s.eta(j), lo + q * h)));
          const double a = std::sqrt((3.0 + xi) * (3.0 + s.eta(j)));
          for (int k = 0; k < n; ++k)
            accumulate(r, std::abs(f[static_cast<std::size_t>(j * n + k)]) / (a - std::abs(s.x2(k))), sup);
        }
        break;
      }
      case Estimate::nullform_xi:
      case Estimate::nullform_eta: {
        const PlaneSampler t(psi, phi, xi, spec.n);
        const auto pxi = s.field(ops.d_xi), peta = s.field(ops.d_eta), px2 = s.field(ops.d_x2);
        const auto qxi = t.field(ops.d_xi), qeta = t.field(ops.d_eta), qx2 = t.field(ops.d_x2);
        const auto gp = gamma_fields(s), gq = gamma_fields(t);
        for (std::size_t p = 0; p < np; ++p) {
          const double eta = s.eta(static_cast<int>(p) / n);
          const double lhs = std::abs(2.0 * (pxi[p] * qeta[p] + peta[p] * qxi[p]) - px2[p] * qx2[p]);
          double rhs = 0.0;
          if (e == Estimate::nullform_xi)
            rhs = (euclid(gp, p) * std::hypot(qeta[p], qx2[p]) + std::hypot(peta[p], px2[p]) * euclid(gq, p)) /
                  (2.0 + xi);
          else
            rhs = (euclid(gp, p) * (std::abs(qxi[p]) + std::abs(qx2[p])) +
                   (std::abs(pxi[p]) + std::abs(px2[p])) * euclid(gq, p)) /
                  (2.0 + eta);
          accumulate(r, lhs, rhs);
        }
        break;
      }
      case Estimate::sobolev:
      case Estimate::derivative_eta:
      case Estimate::derivative_xi:
      case Estimate::corollary: {
        const std::vector<CompiledOp>* set = &ops.sobolev;
        const CompiledOp* lhs_op = &ops.id;
        double p_eta = 0.25, p_xi = 0.25;  // weight exponents multiplying the LHS
        if (e == Estimate::derivative_eta) {
          set = &ops.derivative_x2, lhs_op = &ops.d_eta, p_eta = 0.75, p_xi = -0.25;
        } else if (e == Estimate::derivative_xi) {
          set = &ops.derivative_x2, lhs_op = &ops.d_xi, p_eta = -0.25, p_xi = 0.75;
        } else if (e == Estimate::corollary) {
          set = &ops.corollary, lhs_op = &ops.d_eta, p_eta = 0.5, p_xi = 0.0;
        }
        const double S = norm_sum(s, *set);
        const auto f = s.field(*lhs_op);
        for (std::size_t p = 0; p < np; ++p) {
          const double eta = s.eta(static_cast<int>(p) / n);
          accumulate(r, std::abs(f[p]) * std::pow(2.0 + eta, p_eta) * std::pow(2.0 + xi, p_xi), S);
        }
        break;
      }
    }
  }
  return r;
}

RatioReport family_report(Estimate e, const ConeBumpFamily& family, const SampleSpec& spec) {
  const auto members = family.members();
  const auto partners = family.partners();
  SampleSpec fine = spec;
  fine.n = 2 * spec.n - 1;
  fine.line = 2 * spec.line - 1;
  RatioReport rep;
  rep.name = to_string(e);
  double coarse_max = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const RatioSample c = estimate_ratio(e, members[i], partners[i], spec);
    const RatioSample f = estimate_ratio(e, members[i], partners[i], fine);
    coarse_max = std::max(coarse_max, c.ratio);
    if (f.ratio > rep.max_ratio || rep.argmax < 0) {
      if (f.ratio >= rep.max_ratio) rep.argmax = static_cast<int>(i);
      rep.max_ratio = std::max(rep.max_ratio, f.ratio);
    }
    rep.violations += c.violations + f.violations;
  }
  rep.refinement_drift = rep.max_ratio > 0.0 ? std::abs(rep.max_ratio - coarse_max) / rep.max_ratio : 0.0;
  return rep;
}

TranslationReport translation_study(Estimate e, const std::vector<double>& centers, const SampleSpec& spec) {
  if (centers.empty()) throw std::invalid_argument("translation_study: no centers");
  TranslationReport rep;
  rep.name = to_string(e);
  rep.axis = translation_axis(e);
  rep.centers = centers;
  for (double c : centers) {
    const ConeBump phi = standard_bump().translated(rep.axis, c);
    if (!phi.inside_cone()) throw std::invalid_argument("translation_study: bump leaves the cone");
    rep.ratios.push_back(estimate_ratio(e, phi, standard_partner(phi), spec).ratio);
  }
  const double r0 = rep.ratios.front();
  for (double r : rep.ratios) rep.max_growth = std::max(rep.max_growth, r0 > 0.0 ? r / r0 - 1.0 : (r > 0.0 ? 1e300 : 0.0));
  return rep;
}

// ---------------------------------------------------------------------------
// 1D Hardy

double hardy_ratio(const std::function<Jet(const Jet&)>& f, double a, int cells) {
  if (!(a > 0.0)) throw std::invalid_argument("hardy_ratio: a must be positive");
  if (cells < 2) throw std::invalid_argument("hardy_ratio: need at least 2 cells");
  for (double x : {-2.0 * a, -1.5 * a, -a, a, 1.5 * a, 2.0 * a})
    if (std::abs(f(Jet(1, 0, x)).value()) > 0.0) throw std::invalid_argument("support of f must lie in (-a, a)");
  const double h = 2.0 * a / cells;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x = -a + (i + 0.5) * h;
    const Jet j = f(Jet::variable(1, 1, 0, x));
    const double q = j.value() / (a - std::abs(x));
    num += q * q;
    den += j.d(1) * j.d(1);
  }
  if (num == 0.0 && den == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

RatioReport hardy_family(int count, std::uint64_t seed, int cells) {
  std::mt19937_64 rng(seed);
  RatioReport rep;
  rep.name = "hardy";
  double coarse_max = 0.0;
  for (int i = 0; i < count; ++i) {
    const double a = uniform(rng, {0.5, 3.0});
    const double w = std::min(log_uniform(rng, {0.2, 2.0}), 0.98 * a);
    const double c = uniform(rng, {-(a - w), a - w});
    const double A = log_uniform(rng, {0.5, 2.0});
    auto f = [=](const Jet& x) {
      const double s0 = (x.value() - c) / w;
      if (std::abs(s0) >= 1.0) return Jet(x.dim(), x.order(), 0.0);
      const Jet s = (x - c) / w;
      return A * exp(-1.0 * reciprocal(1.0 - s * s));
    };
    const double rc = hardy_ratio(f, a, cells);
    const double rf = hardy_ratio(f, a, 2 * cells);
    coarse_max = std::max(coarse_max, rc);
    if (rf > rep.max_ratio) {
      rep.max_ratio = rf;
      rep.argmax = i;
    }
  }
  rep.refinement_drift = rep.max_ratio > 0.0 ? std::abs(rep.max_ratio - coarse_max) / rep.max_ratio : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------

double sobolev_rhs_sum(const ConeBump& phi, double xi, int n, bool restricted) {
  const PlaneSampler s(phi, phi, xi, n);
  return norm_sum(s, restricted ? operators().sobolev : operators().sobolev_full);
}

double CorollaryConsistency::implied_bound() const { return std::sqrt(sobolev_eta * derivative_eta); }

CorollaryConsistency corollary_consistency(const ConeBump& phi, const SampleSpec& spec) {
  const auto& ops = operators();
  CorollaryConsistency c;
  RatioSample rc, r11, r21;
  for (double xi : xi_planes(phi, spec.planes)) {
    const PlaneSampler s(phi, phi, xi, spec.n);
    const int n = s.n();
    const double s_eta = norm_sum(s, ops.sobolev_eta);
    const double s_der = norm_sum(s, ops.derivative_x2);
    const auto f = s.field(ops.d_eta);
    for (std::size_t p = 0; p < f.size(); ++p) {
      const double eta = s.eta(static_cast<int>(p) / n);
      const double v = std::abs(f[p]);
      accumulate(rc, v * std::sqrt(2.0 + eta), std::sqrt(s_eta * s_der));
      accumulate(r11, v * std::pow(2.0 + eta, 0.25) * std::pow(2.0 + xi, 0.25), s_eta);
      accumulate(r21, v * std::pow(2.0 + eta, 0.75) * std::pow(2.0 + xi, -0.25), s_der);
    }
  }
  c.corollary = rc.ratio;
  c.sobolev_eta = r11.ratio;
  c.derivative_eta = r21.ratio;
  return c;
}

}  // namespace membrane
