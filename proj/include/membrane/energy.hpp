#pragma once

/// \file energy.hpp
/// Weighted Gamma-energies on null-coordinate slabs and on time slices, the
/// exponential weight built from the background profile, decay-slope fits
/// and the membrane Hamiltonian.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "membrane/grid.hpp"
#include "membrane/polynomial.hpp"
#include "membrane/traveling_waves.hpp"
#include "membrane/vector_fields.hpp"

namespace membrane {

struct EnergyReport {
  std::optional<double> time;
  double xi_station = 0.0;
  double Es_proxy = 0.0;
  double es_proxy = 0.0;
  double etildes_proxy = 0.0;
  double sup_u = 0.0;
  double sup_u_eta = 0.0;
  double sup_u_x2 = 0.0;
  double sup_u_xi = 0.0;
  double support_radius_x2 = 0.0;
};

/// B with B' = F'^2 and B(-1) = 0, tabulated on a xi lattice (clamped to xi >= -1).
class WeightB {
public:
  WeightB(const WaveProfile& profile, const UniformAxis& xi, int substeps = 16);

  /// Linear interpolation of the table; clamped at both ends.
  [[nodiscard]] double operator()(double xi) const;
  [[nodiscard]] const UniformAxis& axis() const { return axis_; }
  [[nodiscard]] const std::vector<double>& table() const { return b_; }
  /// exp(-B(+inf)) and 1, the bounds of exp(-B) for xi >= -1 when the total integral of F'^2 is finite.
  [[nodiscard]] std::pair<double, double> bounds() const { return {std::exp(-b_.back()), 1.0}; }
  /// Every tabulated exp(-B) lies in bounds().
  [[nodiscard]] bool respects_bounds() const;

private:
  UniformAxis axis_;
  std::vector<double> b_;
};

/// Weights (2+xi)^-1.1 (2+eta)^-0.1 and the mirror (2+xi)^-0.1 (2+eta)^-1.1.
double weight_a(double xi, double eta);
double weight_b(double xi, double eta);

/// Every Gamma-word of length <= s_num (the empty word first), outermost field first.
std::vector<std::vector<VectorFieldId>> gamma_words(int s_num);

/// A first- or zero-order null-coordinate operator applied to a slab field.
SlabField apply_goursat(const DiffOp& op, const SlabField& f, int scheme_order = 4);

/// sum_{|k| <= s_num} of weight_a (u_k,eta^2 + u_k,x2^2) + weight_b (u_k,xi^2 + u_k,x2^2),
/// integrated over the slab; u_k = Gamma^k u. Throws for s_num outside [0, 2].
double energy_Es(const SlabField& u, int s_num, int scheme_order = 4);

/// Max over xi stations of sum_{|l| <= s_num} of the plane integral of u_l,eta^2 + u_l,x2^2.
double energy_es(const SlabField& u, int s_num, int scheme_order = 4);

/// Sup over the slab of (2+xi)^-delta sum_{|k| <= s_num} |Gamma^k u|; needs 0 < delta < 3/20.
double energy_etilde(const SlabField& u, double delta, int s_num, int scheme_order = 4);

/// Per-station report from a slab (Es over the single station plane).
std::vector<EnergyReport> station_reports(const SlabField& u, int s_num, double delta = 0.1, int scheme_order = 4);

/// Energy density of a time slice in the weighted form above, with u_t and u_tt supplied
/// so Gamma-derivatives up to s_num <= 1 are exact in time. Only nodes with xi, eta >= -1 count.
double energy_slice(const ScalarField& u, const ScalarField& u_t, const ScalarField& u_tt, int s_num,
                    int scheme_order = 4);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
};

/// Least-squares slope of log(value) against log(2 + xi); non-positive values are dropped
/// and fewer than 5 remaining stations is an error.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& stations);

/// Integral of (1 + |grad v|^2)/sqrt(delta) - 1 over the grid. The quadratic part
/// (v_t^2 + |grad v|^2)/2 is evaluated as (v_t^2 - v lap_h v)/2 with the scheme's
/// second-difference Laplacian, which the linearized semi-discrete flow conserves;
/// v must vanish near the grid edge.
double hamiltonian_excess(const ScalarField& v, const ScalarField& v_t, int scheme_order = 4);

}  // namespace membrane
