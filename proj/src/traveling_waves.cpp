#include "membrane/traveling_waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace membrane {

std::string to_string(DecayClass d) {
  switch (d) {
    case DecayClass::compact:
      return "compact";
    case DecayClass::exponential:
      return "exponential";
    case DecayClass::inverse_power:
      return "inverse_power";
    case DecayClass::none:
      break;
  }
  return "none";
}

std::string to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::affine_subluminal:
      return "affine_subluminal";
    case SolutionKind::lightspeed_product:
      return "lightspeed_product";
    case SolutionKind::lightspeed_sum:
      return "lightspeed_sum";
    case SolutionKind::superluminal:
      break;
  }
  return "superluminal";
}

std::string to_string(SpeedRegime r) {
  switch (r) {
    case SpeedRegime::subluminal:
      return "subluminal";
    case SpeedRegime::lightspeed:
      return "lightspeed";
    case SpeedRegime::superluminal:
      break;
  }
  return "superluminal";
}

// ---------------------------------------------------------------------------
// WaveProfile

WaveProfile::WaveProfile(std::string name, JetFn fn, DecayClass decay)
    : name_(std::move(name)), fn_(std::move(fn)), decay_(decay) {
  if (!fn_) throw std::invalid_argument("WaveProfile: empty function");
}

double WaveProfile::eval(double xi) const {
  if (!fn_) return 0.0;
  return fn_(Jet(1, 0, xi)).value();
}

double WaveProfile::derivative(double xi, int k) const {
  if (k < 0 || k > 8) throw std::invalid_argument("WaveProfile::derivative: order must be 0..8");
  if (!fn_) return 0.0;
  return fn_(Jet::variable(1, k, 0, xi)).d(k);
}

std::vector<double> WaveProfile::derivatives(double xi, int k) const {
  if (k < 0 || k > 8) throw std::invalid_argument("WaveProfile::derivatives: order must be 0..8");
  std::vector<double> out(static_cast<std::size_t>(k + 1), 0.0);
  if (!fn_) return out;
  const Jet j = fn_(Jet::variable(1, k, 0, xi));
  for (int i = 0; i <= k; ++i) out[static_cast<std::size_t>(i)] = j.d(i);
  return out;
}

WaveProfile WaveProfile::sech(double amplitude) {
  return {"sech", [amplitude](const Jet& x) { return amplitude * membrane::sech(x); }, DecayClass::exponential};
}

WaveProfile WaveProfile::inv_power(double amplitude) {
  return {"inv_power",
          [amplitude](const Jet& x) {
            if (!(x.value() > -2.0)) throw std::domain_error("inv_power profile: xi must exceed -2");
            return amplitude * reciprocal(2.0 + x);
          },
          DecayClass::inverse_power};
}

WaveProfile WaveProfile::bump(double amplitude, double radius, double center) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump profile: radius must be positive");
  return {"bump",
          [=](const Jet& x) {
            const double r = (x.value() - center) / radius;
            if (std::abs(r) >= 1.0) return Jet(x.dim(), x.order(), 0.0);
            const Jet s = (x - center) / radius;
            return amplitude * exp(-1.0 * reciprocal(1.0 - s * s));
          },
          DecayClass::compact};
}

WaveProfile WaveProfile::zero() {
  return {"zero", [](const Jet& x) { return Jet(x.dim(), x.order(), 0.0); }, DecayClass::compact};
}

WaveProfile WaveProfile::cosine(double amplitude, double frequency, double phase) {
  return {"cos", [=](const Jet& x) { return amplitude * cos(frequency * x + phase); }, DecayClass::none};
}

WaveProfile WaveProfile::sine(double amplitude, double frequency, double phase) {
  return {"sin", [=](const Jet& x) { return amplitude * sin(frequency * x + phase); }, DecayClass::none};
}

WaveProfile WaveProfile::linear() {
  return {"linear", [](const Jet& x) { return x; }, DecayClass::none};
}

WaveProfile WaveProfile::quadratic() {
  return {"quadratic", [](const Jet& x) { return 0.5 * (x * x); }, DecayClass::none};
}

WaveProfile WaveProfile::log_slope() {
  return {"log_slope",
          [](const Jet& x) {
            const Jet y = 2.0 + x;
            return y * log(y) - x;
          },
          DecayClass::none};
}

WaveProfile WaveProfile::by_name(const std::string& name, const std::map<std::string, double>& params) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (key != "amplitude" && key != "radius" && key != "center" && key != "frequency" && key != "phase")
      throw std::invalid_argument("unknown profile parameter: " + key);
  }
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const double A = get("amplitude", 1.0);
  if (name == "sech") return sech(A);
  if (name == "inv_power") return inv_power(A);
  if (name == "bump") return bump(A, get("radius", 1.0), get("center", 0.0));
  if (name == "zero") return zero();
  if (name == "cos") return cosine(A, get("frequency", 1.0), get("phase", 0.0));
  if (name == "sin") return sine(A, get("frequency", 1.0), get("phase", 0.0));
  if (name == "linear") return linear();
  if (name == "quadratic") return quadratic();
  if (name == "log_slope") return log_slope();
  throw std::invalid_argument("unknown profile: " + name);
}

// ---------------------------------------------------------------------------
// Solutions

TravelingWaveSolution::TravelingWaveSolution(SolutionKind kind, int n, std::vector<double> parameters,
                                             std::vector<WaveProfile> profiles, Expr expr)
    : kind_(kind), n_(n), params_(std::move(parameters)), profiles_(std::move(profiles)), expr_(std::move(expr)) {
  if (n < 1 || n > 4) throw std::invalid_argument("TravelingWaveSolution: spatial dimension must be 1..4");
  if (!expr_) throw std::invalid_argument("TravelingWaveSolution: empty expression");
}

double TravelingWaveSolution::value(std::span<const double> tx) const {
  if (static_cast<int>(tx.size()) != n_ + 1) throw std::invalid_argument("TravelingWaveSolution::value: wrong arity");
  std::vector<Jet> args;
  args.reserve(tx.size());
  for (double x : tx) args.emplace_back(1, 0, x);
  return expr_(args).value();
}

Jet TravelingWaveSolution::jet(double t, double x1, double x2, int order) const {
  if (n_ == 2) {
    const auto v = Jet::variables<3>(order, {t, x1, x2});
    return expr_(v);
  }
  if (n_ == 1) {
    const auto v = Jet::variables<3>(order, {t, x1, x2});
    return expr_(std::span<const Jet>(v.data(), 2));
  }
  throw std::invalid_argument("TravelingWaveSolution::jet: only n <= 2 has (t, x1, x2) jets");
}

PointJet TravelingWaveSolution::point_jet(double t, double x1, double x2) const {
  return PointJet::from_taylor(jet(t, x1, x2, 2));
}

double TravelingWaveSolution::residual(double t, double x1, double x2) const {
  return membrane_residual(point_jet(t, x1, x2));
}

double TravelingWaveSolution::self_check() const {
  double worst = 0.0;
  const double nodes[3] = {0.0, 0.5, 1.0};
  if (n_ <= 2) {
    for (double t : nodes)
      for (double x1 : nodes)
        for (double x2 : nodes) worst = std::max(worst, std::abs(residual(t, x1, x2)));
    return worst;
  }
  std::vector<double> p(static_cast<std::size_t>(n_ + 1), 0.25);
  for (double t : nodes) {
    p[0] = t;
    for (double x : nodes) {
      p[1] = x;
      worst = std::max(worst, std::abs(fd_residual(*this, p, 1e-2, 4)));
    }
  }
  return worst;
}

namespace {

void verify(const TravelingWaveSolution& s) {
  const double tol = s.spatial_dim() <= 2 ? 1e-8 : 1e-5;
  const double r = s.self_check();
  if (!(r <= tol)) throw std::logic_error("traveling wave self-check failed: residual " + std::to_string(r));
}

}  // namespace

TravelingWaveSolution lightspeed_solution(double a, double b, const WaveProfile& profile, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("lightspeed_solution: sign must be +1 or -1");
  TravelingWaveSolution s(SolutionKind::lightspeed_product, 2, {a, b, static_cast<double>(sign)}, {profile},
                          [=](std::span<const Jet> v) { return (a * v[2] + b) * profile(v[1] + sign * v[0]); });
  verify(s);
  return s;
}

TravelingWaveSolution lightspeed_sum_solution(std::span<const double> coeffs, std::span<const WaveProfile> profiles,
                                              int sign, int n) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("lightspeed_sum_solution: sign must be +1 or -1");
  if (n < 1 || n > 4) throw std::invalid_argument("lightspeed_sum_solution: n must be 1..4");
  if (static_cast<int>(coeffs.size()) != n || static_cast<int>(profiles.size()) != n)
    throw std::invalid_argument("lightspeed_sum_solution: need n coefficients and n profiles");
  std::vector<double> c(coeffs.begin(), coeffs.end());
  std::vector<WaveProfile> p(profiles.begin(), profiles.end());
  auto params = c;
  params.push_back(sign);
  TravelingWaveSolution s(SolutionKind::lightspeed_sum, n, params, p, [=](std::span<const Jet> v) {
    const Jet arg = v[static_cast<std::size_t>(n)] + sign * v[0];
    Jet out = c[static_cast<std::size_t>(n - 1)] * p[static_cast<std::size_t>(n - 1)](arg);
    for (int i = 0; i + 1 < n; ++i)
      out += c[static_cast<std::size_t>(i)] * (v[static_cast<std::size_t>(i + 1)] * p[static_cast<std::size_t>(i)](arg));
    return out;
  });
  verify(s);
  return s;
}

TravelingWaveSolution affine_subluminal_solution(std::span<const double> a, double b, double c) {
  if (!(std::abs(c) < 1.0)) throw std::invalid_argument("not subluminal");
  const int n = static_cast<int>(a.size());
  if (n < 1 || n > 4) throw std::invalid_argument("affine_subluminal_solution: need 1..4 coefficients");
  std::vector<double> coef(a.begin(), a.end());
  const double gamma = 1.0 / std::sqrt(1.0 - c * c);
  auto params = coef;
  params.push_back(b);
  params.push_back(c);
  TravelingWaveSolution s(SolutionKind::affine_subluminal, n, params, {}, [=](std::span<const Jet> v) {
    Jet out = coef[static_cast<std::size_t>(n - 1)] * gamma * (v[static_cast<std::size_t>(n)] - c * v[0]) + b;
    for (int i = 0; i + 1 < n; ++i) out += coef[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i + 1)];
    return out;
  });
  verify(s);
  return s;
}

TravelingWaveSolution superluminal_solution(const WaveProfile& phi, double c) {
  if (!(c > 1.0)) throw std::invalid_argument("superluminal speed must exceed 1");
  const double k = 1.0 / std::sqrt(c * c - 1.0);
  TravelingWaveSolution s(SolutionKind::superluminal, 2, {c}, {phi},
                          [=](std::span<const Jet> v) { return phi(v[1] + k * (v[2] - c * v[0])); });
  verify(s);
  return s;
}

Eigen::Matrix2d superluminal_rotation(double c) {
  if (!(c > 1.0)) throw std::invalid_argument("superluminal speed must exceed 1");
  const double s = std::sqrt(c * c - 1.0) / c;
  Eigen::Matrix2d m;
  m << s, 1.0 / c, 1.0 / c, -s;
  return m;
}

TravelingWaveSolution superluminal_rotated_solution(const WaveProfile& phi, double c) {
  const Eigen::Matrix2d m = superluminal_rotation(c);
  const double scale = c / std::sqrt(c * c - 1.0);
  const double m00 = m(0, 0), m01 = m(0, 1);
  TravelingWaveSolution s(SolutionKind::superluminal, 2, {c}, {phi}, [=](std::span<const Jet> v) {
    const Jet xt1 = m00 * v[1] + m01 * v[2];
    return phi(scale * (xt1 - v[0]));
  });
  verify(s);
  return s;
}

// ---------------------------------------------------------------------------
// Finite-difference residuals

namespace {

std::vector<double> central_weights(int order, int scheme_order) {
  const int half = scheme_order / 2;
  std::vector<double> nodes;
  for (int k = -half; k <= half; ++k) nodes.push_back(k);
  return fd_weights(0.0, nodes, order);
}

void check_scheme(int scheme_order) {
  if (scheme_order != 2 && scheme_order != 4) throw std::invalid_argument("scheme_order must be 2 or 4");
}

}  // namespace

double fd_residual(const TravelingWaveSolution& sol, std::span<const double> tx, double h, int scheme_order) {
  check_scheme(scheme_order);
  const std::size_t N = tx.size();
  if (static_cast<int>(N) != sol.spatial_dim() + 1) throw std::invalid_argument("fd_residual: wrong arity");
  const auto w1 = central_weights(1, scheme_order);
  const auto w2 = central_weights(2, scheme_order);
  const int half = scheme_order / 2;
  std::vector<double> p(tx.begin(), tx.end());
  std::vector<double> grad(N, 0.0), hess(N * N, 0.0);
  auto shifted = [&](std::size_t a, int ka, std::size_t b, int kb) {
    p.assign(tx.begin(), tx.end());
    p[a] += ka * h;
    p[b] += kb * h;
    return sol.value(p);
  };
  for (std::size_t a = 0; a < N; ++a) {
    double g = 0.0, d2 = 0.0;
    for (int k = -half; k <= half; ++k) {
      const double f = shifted(a, k, a, 0);
      g += w1[static_cast<std::size_t>(k + half)] * f;
      d2 += w2[static_cast<std::size_t>(k + half)] * f;
    }
    grad[a] = g / h;
    hess[a * N + a] = d2 / (h * h);
    for (std::size_t b = a + 1; b < N; ++b) {
      double m = 0.0;
      for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
          const double w = w1[static_cast<std::size_t>(i + half)] * w1[static_cast<std::size_t>(j + half)];
          if (w != 0.0) m += w * shifted(a, i, b, j);
        }
      hess[a * N + b] = hess[b * N + a] = m / (h * h);
    }
  }
  std::vector<double> sigma(N, -1.0);
  sigma[0] = 1.0;
  return signature_residual(sigma, grad, hess);
}

ScalarField grid_residual(const TravelingWaveSolution& sol, const Grid2D& grid, double t, int scheme_order) {
  check_scheme(scheme_order);
  if (sol.spatial_dim() != 2) throw std::invalid_argument("grid_residual: needs a solution in two space dimensions");
  const int half = scheme_order / 2;
  const double dt = grid.h_min();
  std::vector<ScalarField> levels;
  for (int k = -half; k <= half; ++k) {
    const double tk = t + k * dt;
    levels.push_back(ScalarField::sample(
        grid,
        [&](double x1, double x2) {
          const double p[3] = {tk, x1, x2};
          return sol.value(p);
        },
        tk));
  }
  const auto w1 = central_weights(1, scheme_order);
  const auto w2 = central_weights(2, scheme_order);
  ScalarField v_t(grid, t), v_tt(grid, t);
  for (int k = 0; k <= 2 * half; ++k) {
    v_t += levels[static_cast<std::size_t>(k)] * (w1[static_cast<std::size_t>(k)] / dt);
    v_tt += levels[static_cast<std::size_t>(k)] * (w2[static_cast<std::size_t>(k)] / (dt * dt));
  }
  const ScalarField& v = levels[static_cast<std::size_t>(half)];
  const ScalarField v1 = derivative(v, Axis::X1, 1, scheme_order);
  const ScalarField v2 = derivative(v, Axis::X2, 1, scheme_order);
  const ScalarField v11 = derivative(v, Axis::X1, 2, scheme_order);
  const ScalarField v22 = derivative(v, Axis::X2, 2, scheme_order);
  const ScalarField v12 = derivative(v1, Axis::X2, 1, scheme_order);
  const ScalarField vt1 = derivative(v_t, Axis::X1, 1, scheme_order);
  const ScalarField vt2 = derivative(v_t, Axis::X2, 1, scheme_order);
  ScalarField out(grid, t);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      PointJet p;
      p.value = v(i, j);
      p.d_t = v_t(i, j);
      p.d_x1 = v1(i, j);
      p.d_x2 = v2(i, j);
      p.d_tt = v_tt(i, j);
      p.d_tx1 = vt1(i, j);
      p.d_tx2 = vt2(i, j);
      p.d_x1x1 = v11(i, j);
      p.d_x1x2 = v12(i, j);
      p.d_x2x2 = v22(i, j);
      out.at(i, j) = membrane_residual(p);
    }
  return out;
}

bool ConvergenceStudy::passes(int scheme_order, double slack) const {
  if (rows.size() < 3) return false;
  if (exact) return true;
  return min_order >= scheme_order - slack;
}

ConvergenceStudy residual_convergence(const TravelingWaveSolution& sol, double half_width, std::span<const int> sizes,
                                      double t, int scheme_order) {
  ConvergenceStudy study;
  study.exact = true;
  study.min_order = std::numeric_limits<double>::infinity();
  for (int n : sizes) {
    const Grid2D g = Grid2D::square(half_width, n);
    ConvergenceRow row;
    row.n = n;
    row.h = g.h_min();
    row.max_residual = grid_residual(sol, g, t, scheme_order).max_abs();
    if (!study.rows.empty()) {
      const auto& prev = study.rows.back();
      row.order = std::log(prev.max_residual / row.max_residual) / std::log(prev.h / row.h);
      study.min_order = std::min(study.min_order, row.order);
    }
    if (row.max_residual > kRoundoffResidual) study.exact = false;
    study.rows.push_back(row);
  }
  if (study.rows.size() < 2) study.min_order = 0.0;
  return study;
}

// ---------------------------------------------------------------------------
// H1

const H1Entry& H1Report::entry(int k1, int k2) const {
  for (const auto& e : entries)
    if (e.k1 == k1 && e.k2 == k2) return e;
  throw std::out_of_range("H1Report: no such (k1, k2)");
}

namespace {

double stirling2(int n, int k) {
  static const double table[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0}, {0, 1, 3, 1}};
  return table[n][k];
}

std::vector<double> h1_sups(const WaveProfile& profile, int k_max, const UniformAxis& axis) {
  std::vector<double> sup(static_cast<std::size_t>((k_max + 1) * (k_max + 1)), 0.0);
  for (int i = 0; i < axis.n; ++i) {
    const double xi = axis.at(i);
    const auto d = profile.derivatives(xi, k_max + 1);  // d[j + 1] = D^j F'
    for (int k1 = 0; k1 <= k_max; ++k1)
      for (int k2 = 0; k1 + k2 <= k_max; ++k2) {
        double s = 0.0;
        double xp = 1.0;
        for (int j = 0; j <= k2; ++j) {
          if (j > 0) xp *= xi;
          s += stirling2(k2, j) * xp * d[static_cast<std::size_t>(k1 + j + 1)];
        }
        auto& slot = sup[static_cast<std::size_t>(k1 * (k_max + 1) + k2)];
        const double v = (2.0 + xi) * std::abs(s);
        slot = std::isfinite(v) && std::isfinite(slot) ? std::max(slot, v) : std::numeric_limits<double>::infinity();
      }
  }
  return sup;
}

}  // namespace

H1Report check_H1(const WaveProfile& profile, int k_max, const UniformAxis& xi_grid) {
  if (k_max < 0 || k_max > 3) throw std::invalid_argument("check_H1: k_max must be in [0, 3]");
  if (xi_grid.n < 2 || !(xi_grid.max > xi_grid.min)) throw std::invalid_argument("check_H1: empty lattice");
  UniformAxis extended{xi_grid.min, xi_grid.min + 2.0 * (xi_grid.max - xi_grid.min), 2 * xi_grid.n - 1};
  const auto base = h1_sups(profile, k_max, xi_grid);
  const auto ext = h1_sups(profile, k_max, extended);
  H1Report r;
  r.passes = true;
  for (int k1 = 0; k1 <= k_max; ++k1)
    for (int k2 = 0; k1 + k2 <= k_max; ++k2) {
      const auto idx = static_cast<std::size_t>(k1 * (k_max + 1) + k2);
      H1Entry e{k1, k2, base[idx], ext[idx]};
      if (!std::isfinite(e.constant) || !std::isfinite(e.extended_constant) ||
          e.extended_constant > 1.05 * e.constant + 1e-14)
        r.passes = false;
      r.worst_constant = std::max(r.worst_constant, e.constant);
      r.entries.push_back(e);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Reductions

namespace {

struct Derivs {
  std::vector<double> grad, hess;
};

Derivs read_derivs(const Jet& j, int dim) {
  Derivs d;
  const auto n = static_cast<std::size_t>(dim);
  d.grad.resize(n);
  d.hess.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    MultiIndex ea{0, 0, 0};
    ea[a] = 1;
    d.grad[a] = j.derivative(ea);
    for (std::size_t b = 0; b < n; ++b) {
      MultiIndex eab = ea;
      eab[b] += 1;
      d.hess[a * n + b] = j.derivative(eab);
    }
  }
  return d;
}

std::vector<Jet> make_vars(std::span<const double> at) {
  std::vector<Jet> v;
  for (std::size_t i = 0; i < at.size(); ++i) v.push_back(Jet::variable(static_cast<int>(at.size()), 2, static_cast<int>(i), at[i]));
  return v;
}

}  // namespace

ReductionReport reduction_residual(SpeedRegime regime, const SpatialExpr& f, int n, double c,
                                   std::span<const std::vector<double>> points, double t) {
  if (n < 1 || n > 2) throw std::invalid_argument("reduction_residual: n must be 1 or 2");
  const double ac = std::abs(c);
  const bool ok = (regime == SpeedRegime::subluminal && ac < 1.0) ||
                  (regime == SpeedRegime::lightspeed && ac == 1.0) ||
                  (regime == SpeedRegime::superluminal && ac > 1.0);
  if (!ok) throw std::invalid_argument("speed " + std::to_string(c) + " does not match regime " + to_string(regime));
  ReductionReport rep;
  rep.sign = regime == SpeedRegime::superluminal ? 1 : -1;
  const auto un = static_cast<std::size_t>(n);
  for (const auto& x : points) {
    if (x.size() != un) throw std::invalid_argument("reduction_residual: point has wrong dimension");
    // full residual in (t, x)
    std::vector<double> tx{t};
    tx.insert(tx.end(), x.begin(), x.end());
    const auto tv = make_vars(tx);
    std::vector<Jet> args(tv.begin() + 1, tv.end());
    args[un - 1] = args[un - 1] - c * tv[0];
    const Derivs full = read_derivs(f(args), n + 1);
    std::vector<double> sig_full(un + 1, -1.0);
    sig_full[0] = 1.0;
    const double R_full = signature_residual(sig_full, full.grad, full.hess);

    double R_red = 0.0;
    const double y = x[un - 1] - c * t;
    if (regime == SpeedRegime::lightspeed) {
      if (n > 1) {
        std::vector<double> at(x.begin(), x.end() - 1);
        auto v = make_vars(at);
        v.emplace_back(static_cast<int>(at.size()), 2, y);
        const Derivs d = read_derivs(f(v), n - 1);
        const std::vector<double> sig(un - 1, -1.0);
        R_red = -signature_residual(sig, d.grad, d.hess);  // div(grad f / sqrt(1 + |grad f|^2))
      }
    } else {
      const double s = std::sqrt(std::abs(1.0 - c * c));
      std::vector<double> at(x.begin(), x.end());
      at[un - 1] = y / s;
      auto v = make_vars(at);
      v[un - 1] = s * v[un - 1];
      const Derivs d = read_derivs(f(v), n);
      std::vector<double> sig(un, -1.0);
      if (regime == SpeedRegime::superluminal) {
        sig[un - 1] = 1.0;
        R_red = signature_residual(sig, d.grad, d.hess);
      } else {
        R_red = -signature_residual(sig, d.grad, d.hess);
      }
    }
    rep.max_full = std::max(rep.max_full, std::abs(R_full));
    rep.max_reduced = std::max(rep.max_reduced, std::abs(R_red));
    rep.max_mismatch = std::max(rep.max_mismatch, std::abs(R_full - rep.sign * R_red));
    ++rep.points;
  }
  return rep;
}

}  // namespace membrane
