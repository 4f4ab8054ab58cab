#include "membrane/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "membrane/inequality_lab.hpp"
#include "membrane/traveling_waves.hpp"
#include "membrane/vector_fields.hpp"

#ifndef MEMBRANE_VERSION
#define MEMBRANE_VERSION "0.0.0"
#endif

namespace membrane {

using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw UsageError(where + ": unknown key '" + k + "'");
}

BumpSpec bump_from_json(const json& j, BumpSpec b) {
  reject_unknown(j, {"center", "radius", "amplitude", "smoothness"}, "bump");
  if (j.contains("center")) b.center = j.at("center").get<std::array<double, 2>>();
  b.radius = j.value("radius", b.radius);
  b.amplitude = j.value("amplitude", b.amplitude);
  b.smoothness = j.value("smoothness", b.smoothness);
  return b;
}

json bump_to_json(const BumpSpec& b) {
  return {{"center", b.center}, {"radius", b.radius}, {"amplitude", b.amplitude}, {"smoothness", b.smoothness}};
}

const std::set<std::string> kSimKeys = {"grid",   "t_end",        "cfl",          "scheme_order", "background",
                                        "epsilon", "f_bump",      "g_bump",       "output_every", "mode",
                                        "energy_s", "sobolev_s",  "track_energy", "track_hamiltonian",
                                        "support_rel_threshold"};

}  // namespace

SimConfig sim_config_from_json(const json& j) {
  std::set<std::string> allowed = kSimKeys;
  reject_unknown(j, allowed, "config");
  SimConfig c;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"half_width", "n"}, "grid");
    c.grid = Grid2D::square(g.value("half_width", c.grid.half_width()), g.value("n", c.grid.n1));
  }
  c.t_end = j.value("t_end", c.t_end);
  c.cfl = j.value("cfl", c.cfl);
  c.scheme_order = j.value("scheme_order", c.scheme_order);
  if (j.contains("background")) {
    const json& b = j.at("background");
    reject_unknown(b, {"type", "a", "b", "profile", "profile_params", "sign"}, "background");
    const std::string type = b.value("type", std::string("lightspeed"));
    if (type == "none") {
      c.background = BackgroundSpec::none();
    } else if (type == "lightspeed") {
      std::map<std::string, double> params{{"amplitude", 0.5}};
      if (b.contains("profile_params"))
        for (const auto& [k, v] : b.at("profile_params").items()) params[k] = v.get<double>();
      const std::string profile = b.value("profile", std::string("sech"));
      c.background = BackgroundSpec::lightspeed(b.value("a", 0.0), b.value("b", 1.0),
                                                WaveProfile::by_name(profile, params), b.value("sign", 1));
    } else {
      throw UsageError("background.type must be 'none' or 'lightspeed'");
    }
  }
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("f_bump")) c.f_bump = bump_from_json(j.at("f_bump"), c.f_bump);
  if (j.contains("g_bump")) c.g_bump = bump_from_json(j.at("g_bump"), c.g_bump);
  c.output_every = j.value("output_every", c.output_every);
  if (j.contains("mode")) c.mode = evolution_mode_from_string(j.at("mode").get<std::string>());
  c.energy_s = j.value("energy_s", c.energy_s);
  c.sobolev_s = j.value("sobolev_s", c.sobolev_s);
  c.track_energy = j.value("track_energy", c.track_energy);
  c.track_hamiltonian = j.value("track_hamiltonian", c.track_hamiltonian);
  c.support_rel_threshold = j.value("support_rel_threshold", c.support_rel_threshold);
  return c;
}

json to_json(const SimConfig& c) {
  json bg = {{"type", c.background.enabled ? "lightspeed" : "none"}};
  if (c.background.enabled) {
    bg["a"] = c.background.a;
    bg["b"] = c.background.b;
    bg["profile"] = c.background.profile.name();
    bg["sign"] = c.background.sign;
  }
  return {{"grid", {{"half_width", c.grid.half_width()}, {"n", c.grid.n1}}},
          {"t_end", c.t_end},
          {"cfl", c.cfl},
          {"scheme_order", c.scheme_order},
          {"background", bg},
          {"epsilon", c.epsilon},
          {"f_bump", bump_to_json(c.f_bump)},
          {"g_bump", bump_to_json(c.g_bump)},
          {"output_every", c.output_every},
          {"mode", to_string(c.mode)},
          {"energy_s", c.energy_s},
          {"sobolev_s", c.sobolev_s},
          {"track_energy", c.track_energy},
          {"track_hamiltonian", c.track_hamiltonian},
          {"support_rel_threshold", c.support_rel_threshold}};
}

json to_json(const EnergyReport& r) {
  json j = {{"xi_station", r.xi_station}, {"Es_proxy", r.Es_proxy},   {"es_proxy", r.es_proxy},
            {"etildes_proxy", r.etildes_proxy}, {"sup_u", r.sup_u}, {"sup_u_eta", r.sup_u_eta},
            {"sup_u_x2", r.sup_u_x2},   {"sup_u_xi", r.sup_u_xi},   {"support_radius_x2", r.support_radius_x2}};
  if (r.time) j["time"] = *r.time;
  return j;
}

json to_json(const Emission& e) {
  return {{"t", e.t},
          {"report", to_json(e.report)},
          {"support_radius", e.support_radius},
          {"support_bound", e.support_bound},
          {"min_delta", e.min_delta},
          {"hamiltonian", e.hamiltonian},
          {"data_norm", e.data_norm}};
}

// ---------------------------------------------------------------------------

namespace {

/// Settings for one invocation: defaults, then the config file, then flags.
struct Invocation {
  std::string name;
  json settings;
  std::string config_path;
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  long steps = 0;
};

void merge(json& into, const json& from) {
  for (const auto& [k, v] : from.items()) {
    if (v.is_object() && into.contains(k) && into[k].is_object())
      merge(into[k], v);
    else
      into[k] = v;
  }
}

/// Splits settings into simulation keys and the subcommand's own keys.
SimConfig sim_part(const json& s) {
  json sim = json::object();
  for (const auto& [k, v] : s.items())
    if (kSimKeys.count(k)) sim[k] = v;
  return sim_config_from_json(sim);
}

void check_keys(const json& s, const std::set<std::string>& own, bool with_sim) {
  for (const auto& [k, v] : s.items()) {
    if (k == "seed" || k == "out_dir" || own.count(k)) continue;
    if (with_sim && kSimKeys.count(k)) continue;
    throw UsageError("unknown config key '" + k + "'");
  }
}

std::ofstream open_out(const Invocation& inv, const std::string& file) {
  std::ofstream os(inv.out_dir / file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + (inv.out_dir / file).string());
  return os;
}

void write_summary(const Invocation& inv, json summary) {
  summary["subcommand"] = inv.name;
  summary["seed"] = inv.seed;
  summary["version"] = MEMBRANE_VERSION;
  auto os = open_out(inv, inv.name + "_summary.json");
  os << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// verify-exact

std::vector<TravelingWaveSolution> exact_family(const std::string& family, const WaveProfile& profile) {
  std::vector<TravelingWaveSolution> out;
  const bool all = family == "all";
  if (all || family == "affine") {
    const double a[2] = {0.4, -0.3};
    out.push_back(affine_subluminal_solution(a, 0.2, 0.5));
  }
  if (all || family == "lightspeed") out.push_back(lightspeed_solution(0.3, 1.0, profile));
  if (all || family == "superluminal") out.push_back(superluminal_solution(profile, 2.0));
  if (out.empty()) throw UsageError("family must be affine, lightspeed, superluminal or all");
  return out;
}

int cmd_verify_exact(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"family", "profile", "profile_params", "sizes", "half_width", "t", "scheme_order"}, false);
  std::map<std::string, double> params;
  if (s.contains("profile_params"))
    for (const auto& [k, v] : s.at("profile_params").items()) params[k] = v.get<double>();
  const WaveProfile profile = WaveProfile::by_name(s.value("profile", std::string("sech")), params);
  const auto sizes = s.value("sizes", std::vector<int>{65, 129, 257});
  const double hw = s.value("half_width", 4.0);
  const double t = s.value("t", 0.25);
  const int p = s.value("scheme_order", 4);
  if (sizes.size() < 3) throw UsageError("sizes: need at least 3 grids");

  auto csv = open_out(inv, "verify_exact.csv");
  csv << "family,profile,n,h,max_residual,order\n";
  json results = json::array();
  bool pass = true;
  for (const auto& sol : exact_family(s.value("family", std::string("all")), profile)) {
    const ConvergenceStudy st = residual_convergence(sol, hw, sizes, t, p);
    const bool ok = st.passes(p);
    pass = pass && ok;
    for (const auto& r : st.rows)
      csv << to_string(sol.kind()) << ',' << profile.name() << ',' << r.n << ',' << num(r.h) << ','
          << num(r.max_residual) << ',' << num(r.order) << '\n';
    results.push_back({{"family", to_string(sol.kind())}, {"min_order", st.min_order}, {"exact", st.exact}, {"pass", ok}});
    out << to_string(sol.kind()) << ": min order " << st.min_order << (st.exact ? " (exact)" : "")
        << (ok ? " PASS" : " FAIL") << '\n';
  }
  write_summary(inv, {{"pass", pass}, {"results", results}});
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// inequalities

int cmd_inequalities(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"which", "count", "n", "planes", "line", "cells", "centers"}, false);
  const std::string which = s.value("which", std::string("all"));
  const int count = s.value("count", 100);
  SampleSpec spec;
  spec.n = s.value("n", spec.n);
  spec.planes = s.value("planes", spec.planes);
  spec.line = s.value("line", spec.line);
  const int cells = s.value("cells", 2000);
  const auto centers = s.value("centers", std::vector<double>{5.0, 10.0, 20.0});
  if (count < 1) throw UsageError("count must be positive");

  auto nd = open_out(inv, "inequalities.ndjson");
  bool pass = true;
  json results = json::array();
  if (which == "all" || which == "hardy") {
    const RatioReport r = hardy_family(count, inv.seed, cells);
    const bool ok = r.finite() && r.max_ratio <= 2.1 && r.refinement_drift < 0.1;
    pass = pass && ok;
    const json rec = {{"estimate", "hardy"}, {"max_ratio", r.max_ratio}, {"argmax", r.argmax},
                      {"refinement_drift", r.refinement_drift}, {"pass", ok}};
    nd << rec.dump() << '\n';
    results.push_back(rec);
    out << "hardy: max ratio " << r.max_ratio << " drift " << r.refinement_drift << (ok ? " PASS" : " FAIL") << '\n';
  }
  for (auto e : {Estimate::hardy_cone, Estimate::hardy_pointwise, Estimate::nullform_xi, Estimate::nullform_eta,
                 Estimate::sobolev, Estimate::derivative_eta, Estimate::derivative_xi, Estimate::corollary}) {
    if (which != "all" && which != to_string(e)) continue;
    ConeBumpFamily fam;
    fam.count = count;
    fam.seed = inv.seed;
    const RatioReport r = family_report(e, fam, spec);
    const TranslationReport tr = translation_study(e, centers, spec);
    bool ok = r.accepted(0.1) && tr.non_growing(0.2);
    if (e == Estimate::hardy_pointwise) ok = ok && r.max_ratio <= 1.0;
    pass = pass && ok;
    const json rec = {{"estimate", r.name},
                      {"max_ratio", r.max_ratio},
                      {"argmax", r.argmax},
                      {"refinement_drift", r.refinement_drift},
                      {"violations", r.violations},
                      {"translation_axis", tr.axis == 0 ? "xi" : "eta"},
                      {"translation_centers", tr.centers},
                      {"translation_ratios", tr.ratios},
                      {"max_growth", tr.max_growth},
                      {"pass", ok}};
    nd << rec.dump() << '\n';
    results.push_back(rec);
    out << r.name << ": max ratio " << r.max_ratio << " drift " << r.refinement_drift << " growth " << tr.max_growth
        << (ok ? " PASS" : " FAIL") << '\n';
  }
  if (results.empty()) throw UsageError("unknown estimate '" + which + "'");
  write_summary(inv, {{"pass", pass}, {"results", results}});
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// commutators

int cmd_commutators(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"suite", "degree"}, false);
  const int suite_size = s.value("suite", 12);
  const int degree = s.value("degree", 4);
  std::mt19937_64 rng(inv.seed);
  std::vector<Polynomial> suite;
  for (int i = 0; i < suite_size; ++i) suite.push_back(Polynomial::random(rng, degree));
  const auto lattice = cube_lattice(-2.0, 2.0, 5);

  auto csv = open_out(inv, "commutators.csv");
  csv << "field,lambda,expected,max_residual,operator_residual\n";
  bool pass = true;
  json results = json::array();
  for (auto g : kGammaFields) {
    const CommutatorFit f = commutator_box(g, suite, lattice);
    const double expected = (g == VectorFieldId::Gamma4 || g == VectorFieldId::Gamma5) ? 2.0 : 0.0;
    const bool ok = std::abs(f.lambda - expected) <= 1e-8 && f.operator_residual <= 1e-8;
    pass = pass && ok;
    csv << to_string(g) << ',' << num(f.lambda) << ',' << num(expected) << ',' << num(f.max_residual) << ','
        << num(f.operator_residual) << '\n';
    results.push_back({{"field", to_string(g)}, {"lambda", f.lambda}, {"expected", expected}, {"pass", ok}});
    out << to_string(g) << ": lambda " << f.lambda << (ok ? " PASS" : " FAIL") << '\n';
  }
  using V = VectorFieldId;
  const std::array<std::pair<std::string, double>, 3> ids = {
      std::pair{std::string("Gamma4 = L0 - L1"), operator_distance(cartesian_op(V::Gamma4), cartesian_op(V::L0) - cartesian_op(V::L1))},
      std::pair{std::string("Gamma5 = L0 + L1"), operator_distance(cartesian_op(V::Gamma5), cartesian_op(V::L0) + cartesian_op(V::L1))},
      std::pair{std::string("Gamma6 = L2 + Omega"),
                operator_distance(cartesian_op(V::Gamma6), cartesian_op(V::L2) + cartesian_op(V::Omega))}};
  for (const auto& [name, d] : ids) {
    const bool ok = d <= 1e-12;
    pass = pass && ok;
    results.push_back({{"identity", name}, {"distance", d}, {"pass", ok}});
    out << name << ": distance " << d << (ok ? " PASS" : " FAIL") << '\n';
  }
  write_summary(inv, {{"pass", pass}, {"results", results}});
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// evolve, decay, energy, dump

json run_summary(const SimConfig& c, const RunResult& r) {
  const double es0 = r.emissions.empty() ? 0.0 : r.emissions.front().report.Es_proxy;
  double es_max = 0.0;
  for (const auto& e : r.emissions) es_max = std::max(es_max, e.report.Es_proxy);
  return {{"max_sup_u", r.max_sup_u},
          {"min_delta", r.min_delta},
          {"support_ok", r.support_ok},
          {"Es_proxy_initial", es0},
          {"Es_proxy_max", es_max},
          {"final_time", r.final_state.t},
          {"steps", r.final_state.step_count},
          {"epsilon", c.epsilon}};
}

int cmd_evolve(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"scan_epsilons"}, true);
  const SimConfig c = sim_part(s);
  auto nd = open_out(inv, "evolve.ndjson");
  RunHooks hooks;
  hooks.on_emit = [&](const SimState&, const Emission& e) { nd << to_json(e).dump() << '\n'; };
  const RunResult r = run(c, hooks);
  inv.steps = r.final_state.step_count;

  json sum = run_summary(c, r);
  const double es0 = sum["Es_proxy_initial"].get<double>();
  const bool sup_ok = r.max_sup_u <= 10.0 * c.epsilon + 1e-300;
  const bool es_ok = sum["Es_proxy_max"].get<double>() <= 2.0 * es0 || !c.track_energy;
  const bool delta_ok = r.min_delta >= 0.5;
  sum["checks"] = {{"sup_u_le_10eps", sup_ok}, {"Es_bounded", es_ok}, {"min_delta_ge_half", delta_ok},
                   {"support", r.support_ok}};
  bool pass = sup_ok && es_ok && delta_ok && r.support_ok;
  if (s.contains("scan_epsilons")) {
    const StabilityScan scan = stability_scan(c, s.at("scan_epsilons").get<std::vector<double>>());
    json rows = json::array();
    for (std::size_t i = 0; i < scan.epsilons.size(); ++i)
      rows.push_back({{"epsilon", scan.epsilons[i]}, {"stable", static_cast<bool>(scan.stable[i])}, {"outcome", scan.outcome[i]}});
    sum["stability_scan"] = {{"rows", rows}, {"largest_stable", scan.largest_stable}};
    out << "largest stable epsilon: " << scan.largest_stable << '\n';
  }
  sum["pass"] = pass;
  write_summary(inv, sum);
  out << "evolve: sup|u| " << r.max_sup_u << ", min delta " << r.min_delta << ", support "
      << (r.support_ok ? "ok" : "violated") << (pass ? " PASS" : " FAIL") << '\n';
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_decay(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"decay"}, true);
  const SimConfig c = sim_part(s);
  DecayOptions opt;
  if (s.contains("decay")) {
    const json& d = s.at("decay");
    reject_unknown(d, {"xi_min", "xi_max", "stations", "eta_min", "threshold"}, "decay");
    opt.xi_min = d.value("xi_min", opt.xi_min);
    opt.xi_max = d.value("xi_max", opt.xi_max);
    opt.stations = d.value("stations", opt.stations);
    opt.eta_min = d.value("eta_min", opt.eta_min);
  }
  const double threshold = s.contains("decay") ? s.at("decay").value("threshold", -0.10) : -0.10;
  RunHooks hooks;
  hooks.decay = opt;
  const RunResult r = run(c, hooks);
  inv.steps = r.final_state.step_count;
  auto nd = open_out(inv, "decay.ndjson");
  for (const auto& st : r.decay->stations) nd << to_json(st).dump() << '\n';
  json sum = run_summary(c, r);
  const bool fitted = r.decay->fit.has_value();
  const double slope = fitted ? r.decay->fit->slope : std::nan("");
  const bool slope_ok = fitted && slope <= threshold;
  const bool cone_ok = r.decay->cone_excess <= r.decay->cone_slack;
  sum["decay"] = {{"slope", fitted ? json(slope) : json(nullptr)},
                  {"r2", fitted ? json(r.decay->fit->r2) : json(nullptr)},
                  {"threshold", threshold},
                  {"reference_exponent", -0.25},
                  {"cone_excess", r.decay->cone_excess},
                  {"cone_slack", r.decay->cone_slack}};
  const bool pass = slope_ok && cone_ok && r.support_ok;
  sum["pass"] = pass;
  write_summary(inv, sum);
  out << "decay: slope " << slope << " (threshold " << threshold << ")" << (pass ? " PASS" : " FAIL") << '\n';
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_energy(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"drift_tolerance"}, true);
  SimConfig c = sim_part(s);
  c.track_energy = true;
  c.track_hamiltonian = !c.background.enabled;
  auto nd = open_out(inv, "energy.ndjson");
  RunHooks hooks;
  hooks.on_emit = [&](const SimState&, const Emission& e) { nd << to_json(e).dump() << '\n'; };
  const RunResult r = run(c, hooks);
  inv.steps = r.final_state.step_count;
  json sum = run_summary(c, r);
  bool pass = sum["Es_proxy_max"].get<double>() <= 2.0 * sum["Es_proxy_initial"].get<double>();
  if (c.track_hamiltonian) {
    const double h0 = r.emissions.front().hamiltonian;
    double drift = 0.0;
    for (const auto& e : r.emissions) drift = std::max(drift, std::abs(e.hamiltonian - h0) / std::abs(h0));
    const double tol = s.value("drift_tolerance", 1e-4);
    sum["hamiltonian"] = {{"initial", h0}, {"relative_drift", drift}, {"tolerance", tol}};
    pass = pass && drift <= tol;
    out << "energy: hamiltonian drift " << drift << " (tolerance " << tol << ")\n";
  }
  sum["pass"] = pass;
  write_summary(inv, sum);
  out << "energy: Es proxy max/initial " << sum["Es_proxy_max"].get<double>() << " / "
      << sum["Es_proxy_initial"].get<double>() << '\n';
  out << "energy: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_dump(Invocation& inv, std::ostream& out) {
  const json& s = inv.settings;
  check_keys(s, {"times", "format"}, true);
  SimConfig c = sim_part(s);
  c.track_energy = false;
  const auto times = s.value("times", std::vector<double>{0.0, c.t_end});
  const std::string format = s.value("format", std::string("csv"));
  if (format != "csv" && format != "binary") throw UsageError("format must be csv or binary");
  for (double t : times) {
    const double k = t / c.output_every;
    if (t < 0.0 || t > c.t_end + 1e-12 || (std::abs(k - std::round(k)) > 1e-9 && std::abs(t - c.t_end) > 1e-12))
      throw UsageError("dump time " + num(t) + " is not an emission time");
  }
  std::vector<std::string> written;
  RunHooks hooks;
  hooks.on_emit = [&](const SimState& st, const Emission&) {
    for (double t : times) {
      if (std::abs(st.t - t) > 1e-9) continue;
      char name[64];
      std::snprintf(name, sizeof name, "u_t%08.3f.%s", t, format == "csv" ? "csv" : "mlf");
      auto os = open_out(inv, name);
      if (format == "csv")
        write_csv(os, st.u);
      else
        write_binary(os, st.u);
      written.emplace_back(name);
    }
  };
  const RunResult r = run(c, hooks);
  inv.steps = r.final_state.step_count;
  json sum = run_summary(c, r);
  sum["files"] = written;
  sum["pass"] = true;
  write_summary(inv, sum);
  out << "dump: wrote " << written.size() << " field(s)\n";
  return kExitPass;
}

}  // namespace

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for timelike extremal surfaces near light-speed traveling waves", "membrane-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MEMBRANE_VERSION);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  json flags = json::object();

  struct Sub {
    CLI::App* app;
    int (*fn)(Invocation&, std::ostream&);
  };
  std::vector<Sub> subs;
  auto add = [&](const char* name, const char* desc, int (*fn)(Invocation&, std::ostream&)) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->add_option("-c,--config", config_path, "JSON config file");
    sc->add_option("-o,--out", out_dir, "output directory (overrides MEMBRANE_OUT_DIR)");
    sc->add_option("--seed", seed, "random seed (default 42)");
    subs.push_back({sc, fn});
    return sc;
  };

  // flag storage; only options given on the command line are merged into the settings
  std::optional<std::string> family, profile, which, mode, background, format;
  std::optional<double> amplitude, half_width, t_end, cfl, epsilon, t_eval, output_every, drift_tol, threshold;
  std::optional<int> n, scheme, count, samples, planes;
  std::optional<std::vector<int>> sizes;
  std::optional<std::vector<double>> times, scan_eps, centers;

  auto sim_flags = [&](CLI::App* sc) {
    sc->add_option("--n", n, "grid points per axis");
    sc->add_option("--half-width", half_width, "domain half-width");
    sc->add_option("--t-end", t_end, "final time");
    sc->add_option("--cfl", cfl, "CFL number in (0, 1]");
    sc->add_option("--scheme", scheme, "finite-difference order (2 or 4)");
    sc->add_option("--epsilon", epsilon, "perturbation size");
    sc->add_option("--background", background, "none or lightspeed");
    sc->add_option("--profile", profile, "background profile name");
    sc->add_option("--amplitude", amplitude, "background profile amplitude");
    sc->add_option("--mode", mode, "substituted or direct");
    sc->add_option("--output-every", output_every, "emission cadence");
  };

  CLI::App* ve = add("verify-exact", "residual convergence of the exact solution families", cmd_verify_exact);
  ve->add_option("--family", family, "affine, lightspeed, superluminal or all");
  ve->add_option("--profile", profile, "profile name");
  ve->add_option("--amplitude", amplitude, "profile amplitude");
  ve->add_option("--sizes", sizes, "grid sizes")->delimiter(',');
  ve->add_option("--half-width", half_width, "domain half-width");
  ve->add_option("--t", t_eval, "evaluation time");
  ve->add_option("--scheme", scheme, "finite-difference order (2 or 4)");

  CLI::App* iq = add("inequalities", "ratio statistics for the Hardy and weighted Sobolev estimates", cmd_inequalities);
  iq->add_option("--which", which, "hardy, an estimate name, or all");
  iq->add_option("--count", count, "family size");
  iq->add_option("--n", samples, "lattice points per axis");
  iq->add_option("--planes", planes, "xi planes per bump");
  iq->add_option("--centers", centers, "translation centers")->delimiter(',');

  add("commutators", "commutator and identity checks for the Gamma fields", cmd_commutators);

  CLI::App* ev = add("evolve", "evolve a perturbed traveling wave", cmd_evolve);
  sim_flags(ev);
  ev->add_option("--scan-epsilons", scan_eps, "epsilons for a stability scan")->delimiter(',');

  CLI::App* de = add("decay", "decay slope along null stations", cmd_decay);
  sim_flags(de);
  de->add_option("--threshold", threshold, "largest accepted slope");

  CLI::App* en = add("energy", "energy proxies and the membrane Hamiltonian", cmd_energy);
  sim_flags(en);
  en->add_option("--drift-tolerance", drift_tol, "relative Hamiltonian drift tolerance");

  CLI::App* du = add("dump", "write field snapshots", cmd_dump);
  sim_flags(du);
  du->add_option("--times", times, "emission times to dump")->delimiter(',');
  du->add_option("--format", format, "csv or binary");

  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << MEMBRANE_VERSION << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) chosen = &s;
  if (!chosen) {
    err << app.help();
    return kExitUsage;
  }

  Invocation inv;
  inv.name = chosen->app->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    json settings = json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw UsageError("cannot read config " + config_path);
      try {
        settings = json::parse(is);
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!settings.is_object()) throw UsageError("config must be a JSON object");
    }
    const bool sim = inv.name == "evolve" || inv.name == "decay" || inv.name == "energy" || inv.name == "dump";
    if (sim) {
      if (inv.name == "energy" && !settings.contains("background") && !background) {
        // flat membrane with moderate data unless configured otherwise
        flags["background"] = {{"type", "none"}};
        if (!settings.contains("epsilon")) flags["epsilon"] = 0.1;
        if (!settings.contains("t_end")) flags["t_end"] = 10.0;
        if (!settings.contains("grid")) flags["grid"] = {{"half_width", 12.0}, {"n", 513}};
        if (!settings.contains("cfl")) flags["cfl"] = 0.1;
      }
      if (n) flags["grid"]["n"] = *n;
      if (half_width) flags["grid"]["half_width"] = *half_width;
      if (t_end) flags["t_end"] = *t_end;
      if (cfl) flags["cfl"] = *cfl;
      if (scheme) flags["scheme_order"] = *scheme;
      if (epsilon) flags["epsilon"] = *epsilon;
      if (mode) flags["mode"] = *mode;
      if (output_every) flags["output_every"] = *output_every;
      if (background) flags["background"]["type"] = *background;
      if (profile) flags["background"]["profile"] = *profile;
      if (amplitude) flags["background"]["profile_params"]["amplitude"] = *amplitude;
      if (scan_eps) flags["scan_epsilons"] = *scan_eps;
      if (threshold) flags["decay"]["threshold"] = *threshold;
      if (drift_tol) flags["drift_tolerance"] = *drift_tol;
      if (times) flags["times"] = *times;
      if (format) flags["format"] = *format;
    } else {
      if (family) flags["family"] = *family;
      if (profile) flags["profile"] = *profile;
      if (amplitude) flags["profile_params"]["amplitude"] = *amplitude;
      if (sizes) flags["sizes"] = *sizes;
      if (half_width) flags["half_width"] = *half_width;
      if (t_eval) flags["t"] = *t_eval;
      if (scheme) flags["scheme_order"] = *scheme;
      if (which) flags["which"] = *which;
      if (count) flags["count"] = *count;
      if (samples) flags["n"] = *samples;
      if (planes) flags["planes"] = *planes;
      if (centers) flags["centers"] = *centers;
    }
    merge(settings, flags);
    if (seed) settings["seed"] = *seed;
    inv.seed = settings.value("seed", std::uint64_t{42});

    std::string dir = settings.value("out_dir", std::string("membrane_out"));
    if (const char* env = std::getenv(kOutDirEnv); env && *env) dir = env;
    if (!out_dir.empty()) dir = out_dir;
    inv.out_dir = dir;
    std::filesystem::create_directories(inv.out_dir);
    settings.erase("out_dir");
    settings.erase("seed");
    inv.settings = settings;
    inv.config_path = config_path;

    const int code = chosen->fn(inv, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream man(inv.out_dir / "manifest.json");
    man << json{{"subcommand", inv.name}, {"config", config_path}, {"seed", inv.seed},
                {"out_dir", inv.out_dir.string()}, {"version", MEMBRANE_VERSION}, {"wall_clock_s", wall},
                {"steps", inv.steps}}
               .dump(2)
        << '\n';
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << chosen->app->help();
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "usage error: bad config value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateSurfaceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace membrane
