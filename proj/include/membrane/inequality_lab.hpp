#pragma once

/// \file inequality_lab.hpp
/// Randomized ratio statistics for the weighted Hardy, null-form, and
/// cone-Sobolev estimates over families of smooth bumps supported inside the
/// cone |x2| < sqrt((2 + xi)(2 + eta)) in null coordinates.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "membrane/polynomial.hpp"
#include "membrane/taylor.hpp"

namespace membrane {

/// amplitude * b((xi - c0)/w0) b((eta - c1)/w1) b((x2 - c2)/w2), b(s) = exp(-1/(1 - s^2)).
struct ConeBump {
  double amplitude = 1.0;
  std::array<double, 3> center{5.0, 5.0, 0.0};
  std::array<double, 3> width{1.0, 1.0, 1.0};

  /// Partial derivative d^e at (xi, eta, x2).
  [[nodiscard]] double partial(const MultiIndex& e, double xi, double eta, double x2) const;
  /// Support box lies in xi, eta >= -1 and strictly inside the cone.
  [[nodiscard]] bool inside_cone() const;
  [[nodiscard]] ConeBump scaled(double s) const;
  [[nodiscard]] ConeBump translated(int axis, double new_center) const;
};

/// The bump with unit widths and amplitude centered at (xi, eta, 0).
ConeBump standard_bump(double xi_center = 5.0, double eta_center = 5.0);

struct Interval {
  double lo = 0.0, hi = 1.0;
};

struct ConeBumpFamily {
  int count = 100;
  std::uint64_t seed = 42;
  Interval xi_range{1.0, 9.0};   // centers
  Interval eta_range{1.0, 9.0};  // centers
  Interval width_range{0.2, 2.0};     // log-uniform
  Interval amplitude_range{0.5, 2.0};  // log-uniform

  /// Members drawn by rejection sampling until they fit inside the cone.
  [[nodiscard]] std::vector<ConeBump> members() const;
  /// Companion bumps with the members' centers and smaller widths (for two-argument estimates).
  [[nodiscard]] std::vector<ConeBump> partners() const;
};

enum class Estimate {
  hardy_cone,       // weighted Hardy, L2 over the (eta, x2) plane
  hardy_pointwise,  // pointwise Hardy against sup |phi_x2|
  nullform_xi,      // |Q0| against (2+xi)^-1 (|G phi||D psi| + |D phi||G psi|), D = {d_eta, d_x2}
  nullform_eta,     // |Q0| against (2+eta)^-1 with the {d_xi, d_x2} derivative set
  sobolev,          // |phi| against (2+eta)^-1/4 (2+xi)^-1/4 sum_{|k1|,|k2| <= 1}
  derivative_eta,   // |phi_eta| against (2+eta)^-3/4 (2+xi)^1/4 sum_{|k1|+|k2| <= 2} of phi_x2
  derivative_xi,    // |phi_xi| against (2+eta)^1/4 (2+xi)^-3/4 sum_{|k1|+|k2| <= 2} of phi_x2
  corollary,        // |phi_eta| against (2+eta)^-1/2 sum_{|k1|+|k2| <= 1} of D phi
};

std::string to_string(Estimate e);
Estimate estimate_from_string(const std::string& name);
/// Axis (0 = xi, 1 = eta) along which translating the support realizes the estimate's decay weight.
int translation_axis(Estimate e);

struct SampleSpec {
  int n = 25;       // lattice points per axis across the (eta, x2) support box
  int planes = 3;   // xi planes across the xi support
  int line = 801;   // points along x2 for the sup in the pointwise Hardy estimate
};

struct RatioReport {
  std::string name;
  double max_ratio = 0.0;
  int argmax = -1;
  double refinement_drift = 0.0;
  int violations = 0;  // points with RHS < 1e-14 and LHS > 1e-10
  [[nodiscard]] bool finite() const;
  [[nodiscard]] bool accepted(double drift_tol = 0.1) const;
};

struct RatioSample {
  double ratio = 0.0;
  int violations = 0;
};

/// One ratio statistic for one bump (psi is used only by the null-form estimates).
RatioSample estimate_ratio(Estimate e, const ConeBump& phi, const ConeBump& psi, const SampleSpec& spec);

/// Max over the family; drift compares spec.n with 2 spec.n - 1.
RatioReport family_report(Estimate e, const ConeBumpFamily& family, const SampleSpec& spec);

struct TranslationReport {
  std::string name;
  int axis = 0;
  std::vector<double> centers;
  std::vector<double> ratios;
  double max_growth = 0.0;  // max ratio / first ratio - 1
  [[nodiscard]] bool non_growing(double tol = 0.2) const { return max_growth <= tol; }
};

/// Standard bump (and partner) translated to each center along the estimate's axis.
TranslationReport translation_study(Estimate e, const std::vector<double>& centers, const SampleSpec& spec);

// ---------------------------------------------------------------------------
// 1D Hardy inequality

/// ||f/(a - |x|)||_L2 / ||f'||_L2 by the midpoint rule on `cells` cells of (-a, a).
/// Returns 0 when f vanishes identically. Throws when f does not vanish at |x| >= a.
double hardy_ratio(const std::function<Jet(const Jet&)>& f, double a, int cells = 4000);

/// Max Hardy ratio over `count` seeded random 1D bumps; drift compares cells and 2 cells.
RatioReport hardy_family(int count, std::uint64_t seed, int cells = 2000);

// ---------------------------------------------------------------------------
// Right-hand side ingredients

/// sum of ||P phi(xi, .)||_L2(D) over the operator set used by the Sobolev estimate;
/// `restricted` selects |k1|, |k2| <= 1, otherwise all |k1| + |k2| <= 2.
double sobolev_rhs_sum(const ConeBump& phi, double xi, int n, bool restricted);

struct CorollaryConsistency {
  double corollary = 0.0;  // max |phi_eta| (2+eta)^1/2 / sqrt(S_sob(phi_eta) S_der(phi_x2))
  double sobolev_eta = 0.0;  // Sobolev ratio applied to phi_eta
  double derivative_eta = 0.0;
  [[nodiscard]] double implied_bound() const;
};

/// Pointwise combination of the Sobolev estimate for phi_eta with the eta-derivative estimate.
CorollaryConsistency corollary_consistency(const ConeBump& phi, const SampleSpec& spec);

}  // namespace membrane
