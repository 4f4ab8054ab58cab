#include "membrane/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace membrane {

// ---------------------------------------------------------------------------
// Background

BackgroundSpec BackgroundSpec::lightspeed(double a, double b, WaveProfile profile, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("background sign must be +1 or -1");
  BackgroundSpec s;
  s.enabled = true;
  s.a = a;
  s.b = b;
  s.profile = std::move(profile);
  s.sign = sign;
  return s;
}

double BackgroundSpec::value(double t, double x1, double x2) const {
  if (!enabled) return 0.0;
  return (a * x2 + b) * profile.eval(x1 + sign * t);
}

double BackgroundSpec::value_t(double t, double x1, double x2) const {
  if (!enabled) return 0.0;
  return sign * (a * x2 + b) * profile.d1(x1 + sign * t);
}

namespace {

PointJet background_jet(const BackgroundSpec& bg, double x2, double F, double dF, double ddF) {
  PointJet j;
  if (!bg.enabled) return j;
  const double w = bg.a * x2 + bg.b;
  const double s = bg.sign;
  j.value = w * F;
  j.d_t = s * w * dF;
  j.d_x1 = w * dF;
  j.d_x2 = bg.a * F;
  j.d_tt = w * ddF;
  j.d_tx1 = s * w * ddF;
  j.d_tx2 = s * bg.a * dF;
  j.d_x1x1 = w * ddF;
  j.d_x1x2 = bg.a * dF;
  j.d_x2x2 = 0.0;
  return j;
}

}  // namespace

PointJet BackgroundSpec::jet(double t, double x1, double x2) const {
  if (!enabled) return {};
  const auto d = profile.derivatives(x1 + sign * t, 2);
  return background_jet(*this, x2, d[0], d[1], d[2]);
}

std::string to_string(EvolutionMode m) { return m == EvolutionMode::direct ? "direct" : "substituted"; }

EvolutionMode evolution_mode_from_string(const std::string& s) {
  if (s == "substituted") return EvolutionMode::substituted;
  if (s == "direct") return EvolutionMode::direct;
  throw std::invalid_argument("unknown evolution mode: " + s);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void validate_numerics(const SimConfig& c) {
  if (c.grid.n1 < 9 || c.grid.n2 < 9) throw std::invalid_argument("grid needs at least 9 points per axis");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (c.scheme_order != 2 && c.scheme_order != 4) throw std::invalid_argument("scheme_order must be 2 or 4");
  if (!(c.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(c.output_every > 0.0)) throw std::invalid_argument("output_every must be positive");
  if (c.energy_s < 0 || c.energy_s > 1) throw std::invalid_argument("energy_s must be 0 or 1");
  if (c.sobolev_s < 0 || c.sobolev_s > 3) throw std::invalid_argument("sobolev_s must lie in [0, 3]");
  if (!(c.support_rel_threshold > 0.0 && c.support_rel_threshold < 1.0))
    throw std::invalid_argument("support_rel_threshold must lie in (0, 1)");
}

void validate_bump(const BumpSpec& b, const char* name) {
  if (!(b.radius > 0.0)) throw std::invalid_argument(std::string(name) + ": radius must be positive");
  if (b.smoothness < 1) throw std::invalid_argument(std::string(name) + ": smoothness must be >= 1");
  if (std::hypot(b.center[0], b.center[1]) + b.radius > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(name) + ": initial data must be supported in |x| <= 1");
}

}  // namespace

double SimConfig::required_half_width() const { return t_end + 1.0 + std::max(0.5, 6.0 * grid.h_min()); }

void SimConfig::validate() const {
  validate_numerics(*this);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be >= 0");
  validate_bump(f_bump, "f_bump");
  validate_bump(g_bump, "g_bump");
  if (grid.half_width() < required_half_width())
    throw std::invalid_argument("domain half-width " + std::to_string(grid.half_width()) + " below required " +
                                std::to_string(required_half_width()));
}

// ---------------------------------------------------------------------------
// Initial data

namespace {

ScalarField unit_bump_field(const Grid2D& g, const BumpSpec& b, double scale) {
  const double peak = unit_bump(0.0, b.smoothness);
  return make_bump(g, b.center, b.radius, scale * b.amplitude / peak, b.smoothness);
}

}  // namespace

SimState init_cauchy(const SimConfig& config) {
  config.validate();
  ScalarField u = unit_bump_field(config.grid, config.f_bump, config.epsilon);
  ScalarField ut = unit_bump_field(config.grid, config.g_bump, config.epsilon);
  return init_fields(config, std::move(u), std::move(ut));
}

SimState init_fields(const SimConfig& config, ScalarField u0, ScalarField u_t0) {
  validate_numerics(config);
  if (!(u0.grid() == config.grid) || !(u_t0.grid() == config.grid))
    throw std::invalid_argument("initial fields must live on the configured grid");
  SimState s;
  s.t = 0.0;
  u0.set_time_label(0.0);
  u_t0.set_time_label(0.0);
  const std::pair<ScalarField, ScalarField> pair{u0, u_t0};
  s.data_norm = sobolev_norm(std::span(&pair, 1), config.sobolev_s, config.scheme_order);
  s.u = std::move(u0);
  s.u_t = std::move(u_t0);
  s.min_delta_seen = 1.0;
  return s;
}

// ---------------------------------------------------------------------------
// Right-hand side

namespace {

struct Derivs {
  ScalarField x1, x2, x1x1, x2x2, x1x2, t_x1, t_x2;
};

Derivs derivs(const ScalarField& u, const ScalarField& ut, int p) {
  Derivs d;
  d.x1 = derivative(u, Axis::X1, 1, p);
  d.x2 = derivative(u, Axis::X2, 1, p);
  d.x1x1 = derivative(u, Axis::X1, 2, p);
  d.x2x2 = derivative(u, Axis::X2, 2, p);
  d.x1x2 = derivative(d.x1, Axis::X2, 1, p);
  d.t_x1 = derivative(ut, Axis::X1, 1, p);
  d.t_x2 = derivative(ut, Axis::X2, 1, p);
  return d;
}

struct LineBackground {
  std::vector<double> F, dF, ddF;
};

LineBackground line_background(const SimConfig& c, double t) {
  const Grid2D& g = c.grid;
  LineBackground lb;
  if (!c.background.enabled) return lb;
  lb.F.resize(static_cast<std::size_t>(g.n1));
  lb.dF.resize(lb.F.size());
  lb.ddF.resize(lb.F.size());
  for (int i = 0; i < g.n1; ++i) {
    const auto d = c.background.profile.derivatives(g.x1(i) + c.background.sign * t, 2);
    lb.F[static_cast<std::size_t>(i)] = d[0];
    lb.dF[static_cast<std::size_t>(i)] = d[1];
    lb.ddF[static_cast<std::size_t>(i)] = d[2];
  }
  return lb;
}

/// Calls visit(i, j, full jet, background jet) for every interior node.
template <class Visit>
void for_each_jet(const SimConfig& c, double t, const ScalarField& u, const ScalarField& ut, Visit&& visit) {
  const Grid2D& g = c.grid;
  const int ring = c.scheme_order / 2;
  const LineBackground lb = line_background(c, t);
  const bool bg = c.background.enabled;
  const bool direct = c.mode == EvolutionMode::direct && bg;

  ScalarField v, vt;
  if (direct) {
    v = u;
    vt = ut;
    for (int i = 0; i < g.n1; ++i) {
      const auto si = static_cast<std::size_t>(i);
      for (int j = 0; j < g.n2; ++j) {
        const double w = c.background.a * g.x2(j) + c.background.b;
        v.at(i, j) += w * lb.F[si];
        vt.at(i, j) += c.background.sign * w * lb.dF[si];
      }
    }
  }
  const ScalarField& U = direct ? v : u;
  const ScalarField& Ut = direct ? vt : ut;
  const Derivs d = derivs(U, Ut, c.scheme_order);

  for (int i = ring; i < g.n1 - ring; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (int j = ring; j < g.n2 - ring; ++j) {
      PointJet b;
      if (bg) b = background_jet(c.background, g.x2(j), lb.F[si], lb.dF[si], lb.ddF[si]);
      PointJet jet;
      jet.value = U(i, j);
      jet.d_t = Ut(i, j);
      jet.d_x1 = d.x1(i, j);
      jet.d_x2 = d.x2(i, j);
      jet.d_tx1 = d.t_x1(i, j);
      jet.d_tx2 = d.t_x2(i, j);
      jet.d_x1x1 = d.x1x1(i, j);
      jet.d_x1x2 = d.x1x2(i, j);
      jet.d_x2x2 = d.x2x2(i, j);
      if (bg && !direct) jet = jet + b;
      visit(i, j, jet, b);
    }
  }
}

ScalarField accel_at(const SimConfig& c, double t, const ScalarField& u, const ScalarField& ut, long step_index,
                     double* min_delta) {
  ScalarField acc(c.grid, t);
  double md = std::numeric_limits<double>::infinity();
  for_each_jet(c, t, u, ut, [&](int i, int j, const PointJet& jet, const PointJet& b) {
    const double delta = delta_factor(jet);
    if (!std::isfinite(delta)) throw std::runtime_error("non-finite state at step " + std::to_string(step_index));
    md = std::min(md, delta);
    const double f = c.forcing ? c.forcing(t, c.grid.x1(i), c.grid.x2(j)) : 0.0;
    acc.at(i, j) = solve_vtt(jet, f) - b.d_tt;
  });
  if (min_delta) *min_delta = std::min(*min_delta, md);
  return acc;
}

}  // namespace

ScalarField acceleration(const SimState& s, const SimConfig& config, double* min_delta) {
  return accel_at(config, s.t, s.u, s.u_t, s.step_count, min_delta);
}

double max_speed(const SimState& s, const SimConfig& config) {
  double cmax = 1.0;
  for_each_jet(config, s.t, s.u, s.u_t, [&](int, int, const PointJet& jet, const PointJet&) {
    const MetricCoeffs m = quasilinear_coeffs(jet);
    if (!(m.m_tt > 0.0) || !std::isfinite(m.m_tt)) return;
    const double mt = std::hypot(m.m_tx1, m.m_tx2);
    // spectral radius of the symmetric spatial block
    const double tr = 0.5 * (m.m_x1x1 + m.m_x2x2);
    const double disc = std::sqrt(0.25 * (m.m_x1x1 - m.m_x2x2) * (m.m_x1x1 - m.m_x2x2) + m.m_x1x2 * m.m_x1x2);
    const double rho = std::abs(tr) + disc;
    cmax = std::max(cmax, (mt + std::sqrt(mt * mt + m.m_tt * rho)) / m.m_tt);
  });
  return cmax;
}

double stable_dt(const SimState& s, const SimConfig& config, double max_dt) {
  const double dt = config.cfl * config.grid.h_min() / max_speed(s, config);
  return std::min(dt, max_dt);
}

SimState step(const SimState& s, const SimConfig& c, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  double md = s.min_delta_seen;
  const long n = s.step_count;
  const double t = s.t;

  const ScalarField& u0 = s.u;
  const ScalarField& v0 = s.u_t;
  const ScalarField a1 = accel_at(c, t, u0, v0, n, &md);

  const ScalarField u2 = u0 + (0.5 * dt) * v0;
  const ScalarField v2 = v0 + (0.5 * dt) * a1;
  const ScalarField a2 = accel_at(c, t + 0.5 * dt, u2, v2, n, &md);

  const ScalarField u3 = u0 + (0.5 * dt) * v2;
  const ScalarField v3 = v0 + (0.5 * dt) * a2;
  const ScalarField a3 = accel_at(c, t + 0.5 * dt, u3, v3, n, &md);

  const ScalarField u4 = u0 + dt * v3;
  const ScalarField v4 = v0 + dt * a3;
  const ScalarField a4 = accel_at(c, t + dt, u4, v4, n, &md);

  SimState out;
  out.t = t + dt;
  out.u = u0 + (dt / 6.0) * (v0 + 2.0 * v2 + 2.0 * v3 + v4);
  out.u_t = v0 + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  out.u.set_time_label(out.t);
  out.u_t.set_time_label(out.t);
  out.step_count = n + 1;
  out.min_delta_seen = md;
  out.data_norm = s.data_norm;
  if (!out.u.all_finite() || !out.u_t.all_finite())
    throw std::runtime_error("non-finite state at step " + std::to_string(out.step_count));
  return out;
}

SimState step(const SimState& s, const SimConfig& config) {
  return step(s, config, stable_dt(s, config, std::numeric_limits<double>::infinity()));
}

// ---------------------------------------------------------------------------
// Runs

GoursatLattice decay_lattice(const SimConfig& c, const DecayOptions& opt) {
  if (opt.stations < 2 || !(opt.xi_max > opt.xi_min) || !(opt.xi_min > -1.0))
    throw std::invalid_argument("decay: need at least 2 increasing stations above -1");
  const double eta_max = 2.0 * c.t_end - opt.xi_max;
  const double h = c.grid.h_min();
  if (eta_max < opt.eta_min + 4.0 * h)
    throw std::invalid_argument("decay: horizon too short for the last station (need t_end >= (xi_max + eta_min)/2 + 2h)");
  GoursatLattice l;
  const double lo = std::log(2.0 + opt.xi_min), hi = std::log(2.0 + opt.xi_max);
  for (int i = 0; i < opt.stations; ++i) l.xi.push_back(std::exp(lo + (hi - lo) * i / (opt.stations - 1)) - 2.0);
  const int neta = std::max(9, static_cast<int>(std::ceil((eta_max - opt.eta_min) / h)) + 1);
  l.eta = UniformAxis{opt.eta_min, eta_max, neta};
  const double cone = std::sqrt((2.0 + opt.xi_max) * (2.0 + eta_max)) + 1.0;
  const double x2max = std::min(cone, c.grid.half_width() - 2.0 * h);
  const int nx2 = std::max(9, static_cast<int>(std::ceil(2.0 * x2max / h)) + 1);
  l.x2 = UniformAxis{-x2max, x2max, nx2};
  return l;
}

namespace {

Emission make_emission(const SimState& s, const SimConfig& c, double threshold) {
  Emission e;
  e.t = s.t;
  e.report.time = s.t;
  e.report.sup_u = s.u.max_abs();
  e.support_radius = s.u.support_radius(threshold);
  e.support_bound = s.t + 1.0 + 2.0 * c.grid.h_min();
  e.min_delta = s.min_delta_seen;
  e.data_norm = s.data_norm;
  double x2r = 0.0;
  const Grid2D& g = c.grid;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      if (std::abs(s.u(i, j)) > threshold) x2r = std::max(x2r, std::abs(g.x2(j)));
  e.report.support_radius_x2 = x2r;
  if (c.track_energy) {
    const ScalarField acc = acceleration(s, c);
    e.report.Es_proxy = energy_slice(s.u, s.u_t, acc, c.energy_s, c.scheme_order);
  }
  if (c.track_hamiltonian) {
    ScalarField v = s.u, vt = s.u_t;
    if (c.background.enabled)
      for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
          v.at(i, j) += c.background.value(s.t, g.x1(i), g.x2(j));
          vt.at(i, j) += c.background.value_t(s.t, g.x1(i), g.x2(j));
        }
    e.hamiltonian = hamiltonian_excess(v, vt, c.scheme_order);
  }
  return e;
}

}  // namespace

RunResult run(const SimConfig& config, const RunHooks& hooks) {
  RunResult r;
  SimState s = init_cauchy(config);
  r.support_threshold = std::max(config.support_rel_threshold * s.u.max_abs(), 1e-13);

  std::optional<GoursatSlabBuilder> builder;
  if (hooks.decay) {
    builder.emplace(decay_lattice(config, *hooks.decay), config.scheme_order);
  }
  auto feed = [&](const SimState& st) {
    if (builder && !builder->complete()) builder->add_slice(st.u, st.u_t);
  };

  auto emit = [&](const SimState& st) {
    Emission e = make_emission(st, config, r.support_threshold);
    r.max_sup_u = std::max(r.max_sup_u, e.report.sup_u);
    if (e.support_radius > e.support_bound) r.support_ok = false;
    if (hooks.on_emit) hooks.on_emit(st, e);
    r.emissions.push_back(std::move(e));
  };

  feed(s);
  emit(s);
  long k = 1;
  const double eps_t = 1e-12 * std::max(1.0, config.t_end);
  while (s.t < config.t_end - eps_t) {
    const double target = std::min(config.t_end, k * config.output_every);
    while (s.t < target - eps_t) {
      const double remaining = target - s.t;
      double dt = stable_dt(s, config, remaining);
      // avoid a sliver step just before the emission time
      if (remaining - dt < 0.25 * dt) dt = remaining;
      s = step(s, config, dt);
      r.max_sup_u = std::max(r.max_sup_u, s.u.max_abs());
      feed(s);
    }
    s.t = target;
    s.u.set_time_label(target);
    s.u_t.set_time_label(target);
    emit(s);
    ++k;
  }
  r.min_delta = s.min_delta_seen;

  if (builder) {
    DecayStudy d;
    const GoursatSlab slab = builder->finish();
    d.xi = slab.u.lattice.xi;
    d.stations = station_reports(slab.u, 0, 0.1, config.scheme_order);
    const auto& l = slab.u.lattice;
    for (std::size_t i = 0; i < d.stations.size(); ++i) {
      auto& st = d.stations[i];
      st.sup_u_xi = st.sup_u_eta = st.sup_u_x2 = 0.0;
      for (int j = 0; j < l.eta.n; ++j)
        for (int q = 0; q < l.x2.n; ++q) {
          st.sup_u_xi = std::max(st.sup_u_xi, std::abs(slab.u_xi(i, j, q)));
          st.sup_u_eta = std::max(st.sup_u_eta, std::abs(slab.u_eta(i, j, q)));
          st.sup_u_x2 = std::max(st.sup_u_x2, std::abs(slab.u_x2(i, j, q)));
        }
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& st : d.stations) pts.emplace_back(st.xi_station, st.sup_u);
    try {
      d.fit = fit_decay(pts);
    } catch (const std::invalid_argument&) {
      d.fit.reset();
    }
    d.cone_excess = cone_excess(slab.u, r.support_threshold);
    d.cone_slack = std::max({l.eta.h(), l.x2.h(), config.grid.h_min()});
    r.decay = std::move(d);
  }
  r.final_state = std::move(s);
  return r;
}

StabilityScan stability_scan(SimConfig config, std::vector<double> epsilons) {
  std::sort(epsilons.begin(), epsilons.end());
  StabilityScan scan;
  config.track_energy = false;
  config.track_hamiltonian = false;
  bool failed = false;
  for (double eps : epsilons) {
    config.epsilon = eps;
    bool ok = false;
    std::string outcome;
    try {
      const RunResult r = run(config);
      ok = r.min_delta >= 0.5 && r.max_sup_u <= 10.0 * eps;
      outcome = ok ? "stable" : (r.min_delta < 0.5 ? "delta below 0.5" : "sup |u| above 10 epsilon");
    } catch (const DegenerateSurfaceError& e) {
      outcome = e.what();
    } catch (const std::runtime_error& e) {
      outcome = e.what();
    }
    scan.epsilons.push_back(eps);
    scan.stable.push_back(ok);
    scan.outcome.push_back(outcome);
    if (ok && !failed) scan.largest_stable = eps;
    if (!ok) failed = true;
  }
  return scan;
}

}  // namespace membrane
