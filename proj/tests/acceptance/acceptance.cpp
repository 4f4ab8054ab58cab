// Acceptance suite: one line per criterion, run in order. Heavy criteria share runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "membrane/cli.hpp"
#include "membrane/energy.hpp"
#include "membrane/evolver.hpp"
#include "membrane/extremal_ops.hpp"
#include "membrane/inequality_lab.hpp"
#include "membrane/traveling_waves.hpp"
#include "membrane/vector_fields.hpp"

using namespace membrane;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Criteria whose failure is understood and recorded in the project notes. The
// line still prints FAIL; the exit code ignores it, and flips if it ever passes.
const std::set<int> kKnownFailures = {5};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome exact_residuals() {
  const int sizes[] = {65, 129, 257, 513};
  const double a[] = {0.4, -0.3};
  const auto profile = WaveProfile::sech(0.5);
  const std::vector<std::pair<std::string, TravelingWaveSolution>> fams = {
      {"affine", affine_subluminal_solution(a, 0.2, 0.5)},
      {"lightspeed", lightspeed_solution(0.3, 1.0, profile)},
      {"superluminal", superluminal_solution(profile, 2.0)}};
  Outcome o{true, ""};
  for (const auto& [name, sol] : fams) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceStudy st = residual_convergence(sol, 4.0, sizes, 0.25, 4);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = st.passes(4) && secs < 60.0;
    o.pass = o.pass && ok;
    o.detail += name + (st.exact ? " exact(max " + fmt(st.rows.back().max_residual) + ")"
                                 : " order " + fmt(st.min_order)) +
                " " + fmt(secs) + "s; ";
  }
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome operator_algebra() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto random_jet = [&] {
    PointJet j;
    j.value = d(rng);
    j.d_t = d(rng), j.d_x1 = d(rng), j.d_x2 = d(rng);
    j.d_tt = d(rng), j.d_tx1 = d(rng), j.d_tx2 = d(rng);
    j.d_x1x1 = d(rng), j.d_x1x2 = d(rng), j.d_x2x2 = d(rng);
    return j;
  };
  double q_err = 0.0, m_err = 0.0;
  int jets = 0;
  while (jets < 1000) {
    const PointJet a = random_jet(), b = random_jet();
    q_err = std::max(q_err, std::abs(null_form_cartesian(a, b) -
                                     null_form_goursat(GoursatJet::from_cartesian(a), GoursatJet::from_cartesian(b))));
    if (delta_factor(a) <= 0.05) continue;  // the m-form identity needs a timelike jet
    const double D = delta_factor(a);
    const double r = D * std::sqrt(D) * membrane_residual(a);
    const double m = apply_metric(quasilinear_coeffs(a), a);
    m_err = std::max(m_err, std::abs(m - r) / std::max(1.0, std::abs(r)));
    ++jets;
  }
  return {q_err <= 1e-11 && m_err <= 1e-10, "Q0 max diff " + fmt(q_err) + ", m-form rel " + fmt(m_err)};
}

// --- 3 ---------------------------------------------------------------------

Outcome commutators() {
  std::mt19937_64 rng(42);
  std::vector<Polynomial> suite;
  for (int i = 0; i < 12; ++i) suite.push_back(Polynomial::random(rng, 4));
  const auto lattice = cube_lattice(-2.0, 2.0, 5);
  const double expect[] = {0, 0, 0, 2, 2, 0};
  double lam_err = 0.0;
  for (int i = 0; i < 6; ++i) {
    const auto fit = commutator_box(kGammaFields[static_cast<std::size_t>(i)], suite, lattice);
    lam_err = std::max(lam_err, std::abs(fit.lambda - expect[i]));
  }
  using enum VectorFieldId;
  const double id_err =
      std::max({operator_distance(cartesian_op(Gamma4), cartesian_op(L0) - cartesian_op(L1)),
                operator_distance(cartesian_op(Gamma5), cartesian_op(L0) + cartesian_op(L1)),
                operator_distance(cartesian_op(Gamma6), cartesian_op(L2) + cartesian_op(Omega))});
  return {lam_err <= 1e-8 && id_err <= 1e-12, "lambda err " + fmt(lam_err) + ", identity dist " + fmt(id_err)};
}

// --- 4 ---------------------------------------------------------------------

Outcome hardy() {
  const RatioReport r = hardy_family(100, 42, 2000);
  return {r.finite() && r.max_ratio <= 2.1 && r.refinement_drift < 0.1,
          "max ratio " + fmt(r.max_ratio) + ", drift " + fmt(r.refinement_drift)};
}

// --- 5 ---------------------------------------------------------------------

Outcome sobolev_suite() {
  const SampleSpec spec;
  ConeBumpFamily fam;
  fam.count = 100;
  Outcome o{true, ""};
  for (auto e : {Estimate::hardy_cone, Estimate::hardy_pointwise, Estimate::nullform_xi, Estimate::nullform_eta,
                 Estimate::sobolev, Estimate::derivative_eta, Estimate::derivative_xi, Estimate::corollary}) {
    const RatioReport r = family_report(e, fam, spec);
    // doubling of the support center along the estimate's decay axis
    const TranslationReport tr = translation_study(e, {5.0, 10.0, 20.0}, spec);
    const bool ok = r.accepted(0.1) && tr.non_growing(0.2);
    o.pass = o.pass && ok;
    if (!ok)
      o.detail += r.name + " FAIL (max " + fmt(r.max_ratio) + ", drift " + fmt(r.refinement_drift) + ", growth " +
                  fmt(tr.max_growth) + "); ";
  }
  if (o.pass) o.detail = "8 estimates finite, stable and non-growing";
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome background_exactness() {
  SimConfig c;
  c.grid = Grid2D::square(22.0, 257);
  c.t_end = 10.0;  // 100 CFL steps reach t ~ 7; keeps the domain margin valid at this resolution
  c.epsilon = 0.0;
  SimState s = init_cauchy(c);
  double sup = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 100; ++k) {
    s = step(s, c);
    sup = std::max(sup, s.u.max_abs());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {sup <= 1e-10 && secs < 60.0, "sup|u| " + fmt(sup) + " after 100 steps, " + fmt(secs) + "s"};
}

// --- 7, 8, 10 --------------------------------------------------------------

struct StabilityRun {
  RunResult result;
  double seconds = 0.0;
};

StabilityRun stability_run() {
  SimConfig c;  // 513^2, t_end 20, eps 1e-3, F = 0.5 sech
  RunHooks hooks;
  hooks.decay = DecayOptions{};
  const auto t0 = std::chrono::steady_clock::now();
  StabilityRun r{run(c, hooks), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Outcome small_data(const StabilityRun& r) {
  const double eps = SimConfig{}.epsilon;
  const double es0 = r.result.emissions.front().report.Es_proxy;
  double es_max = 0.0;
  for (const auto& e : r.result.emissions) es_max = std::max(es_max, e.report.Es_proxy);
  const bool ok = r.result.max_sup_u <= 10 * eps && es_max <= 2 * es0 && r.result.min_delta >= 0.5 && r.seconds < 600;
  return {ok, "sup|u| " + fmt(r.result.max_sup_u) + ", Es max/initial " + fmt(es_max / es0) + ", min delta " +
                  fmt(r.result.min_delta) + ", " + fmt(r.seconds) + "s"};
}

Outcome decay_trend(const StabilityRun& r) {
  const auto& d = r.result.decay;
  if (!d || !d->fit) return {false, "no decay fit"};
  return {d->fit->slope <= -0.10, "slope " + fmt(d->fit->slope) + " (r2 " + fmt(d->fit->r2) + ", reference -0.25)"};
}

// --- 9 ---------------------------------------------------------------------

Outcome hamiltonian(bool& support_ok) {
  SimConfig c;
  c.background = BackgroundSpec::none();
  c.epsilon = 0.1;
  c.t_end = 10.0;
  c.grid = Grid2D::square(12.0, 513);
  c.cfl = 0.1;
  c.track_energy = false;
  c.track_hamiltonian = true;
  const RunResult r = run(c);
  support_ok = support_ok && r.support_ok;
  const double h0 = r.emissions.front().hamiltonian;
  double drift = 0.0;
  for (const auto& e : r.emissions) drift = std::max(drift, std::abs(e.hamiltonian - h0) / std::abs(h0));
  return {drift <= 1e-4, "relative drift " + fmt(drift) + " over t in [0, 10]"};
}

// --- 11 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

// Every output file byte for byte; the manifest without its run-specific fields.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names.insert(e.path().filename().string());
  for (const auto& n : names) {
    if (!fs::exists(a / n) || !fs::exists(b / n)) {
      why = n + " missing";
      return false;
    }
    if (n == "manifest.json") {
      auto ma = nlohmann::json::parse(slurp(a / n)), mb = nlohmann::json::parse(slurp(b / n));
      for (const char* k : {"wall_clock_s", "out_dir"}) ma.erase(k), mb.erase(k);
      if (ma != mb) {
        why = "manifest differs";
        return false;
      }
    } else if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "membrane_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"inequalities", "--which", "all", "--count", "6", "--seed", "7"},
      {"evolve", "--n", "129", "--half-width", "6", "--t-end", "4", "--output-every", "0.5", "--seed", "7"},
      {"dump", "--n", "65", "--half-width", "4", "--t-end", "2", "--times", "0,1,2", "--format", "binary"}};
  int files = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    fs::path dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      dirs[rep] = root / (std::to_string(k) + (rep ? "b" : "a"));
      std::vector<std::string> args = {"membrane-lab"};
      args.insert(args.end(), commands[k].begin(), commands[k].end());
      args.push_back("--out");
      args.push_back(dirs[rep].string());
      std::ostringstream out, err;
      const int code = dispatch(args, out, err);
      if (code == kExitUsage) return {false, commands[k][0] + " rejected: " + err.str()};
    }
    std::string why;
    if (!same_outputs(dirs[0], dirs[1], why)) return {false, commands[k][0] + ": " + why};
    files += static_cast<int>(std::distance(fs::directory_iterator(dirs[0]), fs::directory_iterator{}));
  }
  fs::remove_all(root);
  return {true, std::to_string(files) + " files identical across repeated runs"};
}

}  // namespace

int main() {
  int unexpected = 0;
  std::vector<int> failed;
  auto report = [&](int id, const std::string& title, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << " [" << title << "]: " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail
              << std::endl;
    if (!o.pass) failed.push_back(id);
    if (o.pass == kKnownFailures.contains(id)) ++unexpected;
  };

  bool support_ok = true;
  report(1, "exact-solution residuals", exact_residuals);
  report(2, "operator algebra", operator_algebra);
  report(3, "commutators", commutators);
  report(4, "Hardy bound", hardy);
  report(5, "weighted Sobolev suite", sobolev_suite);
  report(6, "background exactness", background_exactness);

  StabilityRun stab;
  std::string stab_error;
  try {
    stab = stability_run();
  } catch (const std::exception& e) {
    stab_error = e.what();
  }
  auto with_run = [&](const std::function<Outcome(const StabilityRun&)>& fn) {
    return [&, fn] { return stab_error.empty() ? fn(stab) : Outcome{false, "run failed: " + stab_error}; };
  };
  report(7, "small-data stability", with_run(small_data));
  report(8, "decay trend", with_run(decay_trend));
  report(9, "flat-membrane Hamiltonian", [&] { return hamiltonian(support_ok); });
  report(10, "finite propagation", with_run([&](const StabilityRun& r) {
           const auto& d = r.result.decay;
           const bool cone_ok = d && d->cone_excess <= d->cone_slack;
           const bool ok = support_ok && r.result.support_ok && cone_ok;
           return Outcome{ok, std::string("support radius within t + 1 + 2h: ") +
                                  (support_ok && r.result.support_ok ? "yes" : "no") + ", cone excess " +
                                  (d ? fmt(d->cone_excess) : "n/a") + " (slack " + (d ? fmt(d->cone_slack) : "n/a") +
                                  ")"};
         }));
  report(11, "determinism", determinism);

  std::cout << "summary: " << 11 - failed.size() << "/11 pass";
  if (!failed.empty()) {
    std::cout << "; failing:";
    for (int id : failed) std::cout << ' ' << id << (kKnownFailures.contains(id) ? " (known)" : "");
  }
  std::cout << std::endl;
  return unexpected == 0 ? 0 : 1;
}
