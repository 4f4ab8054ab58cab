#pragma once

/// \file evolver.hpp
/// Method-of-lines RK4 integration of the membrane equation for a perturbation
/// u of a light-speed traveling wave, with degeneracy guard, CFL control,
/// support tracking and null-coordinate slab extraction for diagnostics.

#include <functional>
#include <optional>
#include <vector>

#include "membrane/energy.hpp"
#include "membrane/extremal_ops.hpp"
#include "membrane/grid.hpp"
#include "membrane/traveling_waves.hpp"
#include "membrane/vector_fields.hpp"

namespace membrane {

/// (a x2 + b) F(x1 + sign t), or nothing when disabled.
struct BackgroundSpec {
  bool enabled = false;
  double a = 0.0, b = 1.0;
  WaveProfile profile = WaveProfile::zero();
  int sign = 1;

  static BackgroundSpec none() { return {}; }
  static BackgroundSpec lightspeed(double a, double b, WaveProfile profile, int sign = 1);

  [[nodiscard]] double value(double t, double x1, double x2) const;
  [[nodiscard]] double value_t(double t, double x1, double x2) const;
  [[nodiscard]] PointJet jet(double t, double x1, double x2) const;
};

struct BumpSpec {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  double amplitude = 1.0;
  int smoothness = 1;
};

enum class EvolutionMode {
  substituted,  // background derivatives analytic, stencils act on u only
  direct,       // stencils act on the full surface v = background + u
};

std::string to_string(EvolutionMode m);
EvolutionMode evolution_mode_from_string(const std::string& s);

struct SimConfig {
  Grid2D grid = Grid2D::square(22.0, 513);
  double t_end = 20.0;
  double cfl = 0.4;
  int scheme_order = 4;
  BackgroundSpec background = BackgroundSpec::lightspeed(0.0, 1.0, WaveProfile::sech(0.5));
  double epsilon = 1e-3;
  BumpSpec f_bump{};                          // u(0) = epsilon * f
  BumpSpec g_bump{{0.25, -0.2}, 0.6, 0.5, 1};  // u_t(0) = epsilon * g
  double output_every = 1.0;
  EvolutionMode mode = EvolutionMode::substituted;
  int sobolev_s = 2;   // order of the reported data norm
  int energy_s = 1;    // Gamma-order of the slice energy proxy (0 or 1)
  bool track_energy = true;
  bool track_hamiltonian = false;
  /// Nodes with |u| above this fraction of sup |u(0)| count toward the support radius.
  double support_rel_threshold = 1e-3;
  /// Membrane residual imposed at (t, x1, x2); empty means the homogeneous equation.
  std::function<double(double, double, double)> forcing;

  /// Checks grid, CFL, scheme, epsilon, bump placement and the domain margin.
  void validate() const;
  /// t_end + 1 + max(0.5, 6 h): the smallest admissible half-width.
  [[nodiscard]] double required_half_width() const;
};

struct SimState {
  double t = 0.0;
  ScalarField u, u_t;
  long step_count = 0;
  double min_delta_seen = 1.0;
  double data_norm = 0.0;  // ||f||_{H^{s+1}} + ||g||_{H^s} of the initial data
};

SimState init_cauchy(const SimConfig& config);
/// Initial state from explicit fields (for manufactured solutions).
SimState init_fields(const SimConfig& config, ScalarField u0, ScalarField u_t0);

/// u_tt for the state at its own time; also updates `min_delta` if given.
ScalarField acceleration(const SimState& s, const SimConfig& config, double* min_delta = nullptr);

/// Largest characteristic speed bound over the grid (>= 1).
double max_speed(const SimState& s, const SimConfig& config);

/// dt from the CFL rule, not exceeding max_dt.
double stable_dt(const SimState& s, const SimConfig& config, double max_dt);

/// One RK4 step of size dt. Throws DegenerateSurfaceError when delta reaches the margin and
/// std::runtime_error on non-finite values.
SimState step(const SimState& s, const SimConfig& config, double dt);

/// One CFL-limited step.
SimState step(const SimState& s, const SimConfig& config);

struct Emission {
  double t = 0.0;
  EnergyReport report;  // time, Es_proxy (slice density), sup_u
  double support_radius = 0.0;
  double support_bound = 0.0;  // t + 1 + 2h
  double min_delta = 1.0;
  double hamiltonian = 0.0;  // excess membrane energy (when tracked)
  double data_norm = 0.0;
};

struct DecayStudy {
  std::vector<double> xi;
  std::vector<EnergyReport> stations;
  std::optional<DecayFit> fit;
  double cone_excess = 0.0;
  double cone_slack = 0.0;  // one lattice cell
};

struct DecayOptions {
  double xi_min = 5.0, xi_max = 40.0;
  int stations = 5;
  double eta_min = -1.0;
};

struct RunResult {
  SimState final_state;
  std::vector<Emission> emissions;
  double max_sup_u = 0.0;
  double min_delta = 1.0;
  bool support_ok = true;
  double support_threshold = 0.0;
  std::optional<DecayStudy> decay;
};

struct RunHooks {
  std::function<void(const SimState&, const Emission&)> on_emit;
  std::optional<DecayOptions> decay;
};

/// Integrates to t_end with emissions every output_every (and at t = 0 and t_end).
RunResult run(const SimConfig& config, const RunHooks& hooks = {});

/// Null-coordinate lattice for the decay study of a run with horizon t_end.
GoursatLattice decay_lattice(const SimConfig& config, const DecayOptions& opt);

struct StabilityScan {
  std::vector<double> epsilons;
  std::vector<bool> stable;
  std::vector<std::string> outcome;
  double largest_stable = 0.0;
};

/// Runs each epsilon in increasing order; stable means the run completes with min delta >= 0.5
/// and sup |u| <= 10 epsilon.
StabilityScan stability_scan(SimConfig config, std::vector<double> epsilons);

}  // namespace membrane
