#pragma once

/// \file vector_fields.hpp
/// Klainerman-type vector fields (Z and Gamma families) as exact polynomial
/// differential operators, their null-coordinate forms, commutator and
/// Leibniz-defect fits, and resampling of time slices onto null-coordinate slabs.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "membrane/grid.hpp"
#include "membrane/polynomial.hpp"
#include "membrane/taylor.hpp"

namespace membrane {

enum class VectorFieldId { Gamma1, Gamma2, Gamma3, Gamma4, Gamma5, Gamma6, L0, L1, L2, Omega, Dt, Dx1, Dx2 };

inline constexpr std::array<VectorFieldId, 6> kGammaFields = {VectorFieldId::Gamma1, VectorFieldId::Gamma2,
                                                              VectorFieldId::Gamma3, VectorFieldId::Gamma4,
                                                              VectorFieldId::Gamma5, VectorFieldId::Gamma6};

std::string to_string(VectorFieldId id);
VectorFieldId vector_field_from_string(const std::string& name);

/// Operator in Cartesian variables (t, x1, x2).
DiffOp cartesian_op(VectorFieldId id);
/// The same operator in null variables (xi, eta, x2), xi = t + x1, eta = t - x1.
DiffOp goursat_op(VectorFieldId id);
/// Box = d_tt - d_x1x1 - d_x2x2 in Cartesian variables.
DiffOp box_op();

struct GoursatPoint {
  double xi = 0.0, eta = 0.0, x2 = 0.0;
  static GoursatPoint from_cartesian(double t, double x1, double x2);
  [[nodiscard]] std::array<double, 3> to_cartesian() const;
};

/// Function of (t, x1, x2) (or of (xi, eta, x2) for the null-coordinate overload) over jets.
using SpacetimeExpr = std::function<Jet(std::span<const Jet>)>;

/// Apply a vector field to an analytic function at a Cartesian point.
double apply_vf(VectorFieldId id, const SpacetimeExpr& f, const std::array<double, 3>& txx);
/// Apply a vector field to a function of (xi, eta, x2) at a null-coordinate point.
double apply_vf_goursat(VectorFieldId id, const SpacetimeExpr& f_goursat, const GoursatPoint& p);
/// Apply a vector field to first-derivative data at a point.
double apply_vf(VectorFieldId id, const PointJet& jet, const std::array<double, 3>& txx);
/// Apply a vector field to a sampled slice given u and u_t at the slice's time label.
ScalarField apply_vf(VectorFieldId id, const ScalarField& u, const ScalarField& u_t, int scheme_order = 4);

/// Polynomial variant of a Cartesian expression, for exact checks.
Polynomial apply_vf(VectorFieldId id, const Polynomial& f);

struct CommutatorFit {
  VectorFieldId id{};
  double lambda = 0.0;         // least-squares fit of [Box, Gamma] f = lambda Box f
  double max_residual = 0.0;   // max |[Box, Gamma] f - lambda Box f| over the lattice
  double max_defect = 0.0;     // max |[Box, Gamma] f|
  double operator_residual = 0.0;  // largest coefficient of [Box, Gamma] - lambda Box as an operator
};

/// Fits [Box, Gamma] f against Box f on the lattice, for polynomial f.
CommutatorFit commutator_box(VectorFieldId id, std::span<const Polynomial> suite,
                             std::span<const std::array<double, 3>> lattice);

/// Same for an analytic function through order-3 jets.
CommutatorFit commutator_box(VectorFieldId id, const SpacetimeExpr& f, std::span<const std::array<double, 3>> lattice);

struct LeibnizFit {
  std::vector<VectorFieldId> k;       // the applied fields, outermost first
  std::vector<std::string> basis;     // names of the fitted lower-order terms
  std::vector<double> coefficients;   // least-squares coefficients for each basis term
  double max_residual = 0.0;
  double max_defect = 0.0;
};

/// Null form of polynomials: phi_t psi_t - phi_x1 psi_x1 - phi_x2 psi_x2.
Polynomial null_form(const Polynomial& phi, const Polynomial& psi);

/// For |k| = 1, fits Gamma Q0(phi, psi) - Q0(Gamma phi, psi) - Q0(phi, Gamma psi) = c Q0(phi, psi).
/// For |k| = 2, fits the defect of the full Leibniz expansion of Gamma_a Gamma_b Q0(phi, psi) against
/// the lower-order terms Q0(Gamma_a phi, psi), Q0(Gamma_b phi, psi), Q0(phi, Gamma_a psi),
/// Q0(phi, Gamma_b psi), Q0(phi, psi).
LeibnizFit gamma_nullform_leibniz(std::span<const VectorFieldId> k, const Polynomial& phi, const Polynomial& psi,
                                  std::span<const std::array<double, 3>> lattice);

/// Deterministic lattice of points in [lo, hi]^3 with n points per axis.
std::vector<std::array<double, 3>> cube_lattice(double lo, double hi, int n);

/// Largest coefficient magnitude of a Cartesian operator difference A - B.
double operator_distance(const DiffOp& a, const DiffOp& b);

// ---------------------------------------------------------------------------
// Resampling onto null-coordinate slabs

struct GoursatSlab {
  SlabField u, u_xi, u_eta, u_x2;
};

/// Streams time slices (in increasing time) and fills every lattice node
/// (xi, eta, x2) by linear interpolation in t between consecutive slices and
/// bilinear interpolation in (x1, x2) within a slice.
class GoursatSlabBuilder {
public:
  explicit GoursatSlabBuilder(GoursatLattice lattice, int scheme_order = 4);

  /// Adds a slice with its time derivative; spatial derivatives come from grid stencils.
  void add_slice(const ScalarField& u, const ScalarField& u_t);

  [[nodiscard]] bool complete() const { return filled_ == node_t_.size(); }
  [[nodiscard]] const GoursatLattice& lattice() const { return lattice_; }
  [[nodiscard]] double t_min() const { return t_lo_; }
  [[nodiscard]] double t_max() const { return t_hi_; }

  /// Throws "xi station outside covered wedge" if any node was not covered.
  [[nodiscard]] GoursatSlab finish() const;

private:
  struct Slice {
    double t = 0.0;
    ScalarField u, u_t, u_x1, u_x2;
  };
  void fill_between(const Slice& a, const Slice& b);

  GoursatLattice lattice_;
  int scheme_order_;
  GoursatSlab slab_;
  std::vector<double> node_t_;
  std::vector<std::size_t> order_;  // node indices sorted by time
  std::vector<char> covered_;
  std::size_t cursor_ = 0;
  std::size_t filled_ = 0;
  bool has_prev_ = false;
  Slice prev_;
  double t_lo_ = 0.0, t_hi_ = 0.0;
};

/// One-shot resampling of a time stack (sorted by time label).
GoursatSlab to_goursat(std::span<const ScalarField> u, std::span<const ScalarField> u_t, const GoursatLattice& lattice,
                       int scheme_order = 4);

/// Largest excess |x2| - sqrt((2 + xi)(2 + eta)) over nodes where |u| > threshold (0 if none).
double cone_excess(const SlabField& u, double threshold);

}  // namespace membrane
