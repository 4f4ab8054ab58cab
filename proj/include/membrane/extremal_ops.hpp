#pragma once

/// \file extremal_ops.hpp
/// Pointwise Minkowski operators on 2-jets: the delta factor, the null form
/// in Cartesian and null coordinates, the membrane residual, its quasilinear
/// coefficients, and the right-hand sides of the perturbed system around a
/// light-speed traveling wave.

#include <span>
#include <stdexcept>
#include <string>

#include "membrane/grid.hpp"

namespace membrane {

/// Thrown when a jet leaves the timelike regime (delta <= 0 or at the margin).
class DegenerateSurfaceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Second-order quasilinear form m_tt v_tt + 2 sum m_txi v_txi + sum m_xixj v_xixj.
struct MetricCoeffs {
  double m_tt = 1.0, m_tx1 = 0.0, m_tx2 = 0.0;
  double m_x1x1 = -1.0, m_x1x2 = 0.0, m_x2x2 = -1.0;
  double delta = 1.0;
};

/// Background (a x2 + b) F(x1 + t) sampled at one point.
struct BackgroundJet {
  double a = 0.0, b = 1.0;
  double x2 = 0.0;
  double F = 0.0, dF = 0.0, ddF = 0.0;

  /// 2-jet of the background itself at the point.
  [[nodiscard]] PointJet jet() const;
};

/// 2-jet in null coordinates xi = t + x1, eta = t - x1.
struct GoursatJet {
  double value = 0.0;
  double d_xi = 0.0, d_eta = 0.0, d_x2 = 0.0;
  double d_xixi = 0.0, d_xieta = 0.0, d_xix2 = 0.0;
  double d_etaeta = 0.0, d_etax2 = 0.0, d_x2x2 = 0.0;

  static GoursatJet from_cartesian(const PointJet& j);
  [[nodiscard]] PointJet to_cartesian() const;
};

inline constexpr double kDegeneracyMargin = 1e-6;

double delta_factor(const PointJet& jet);

/// phi_t psi_t - phi_x1 psi_x1 - phi_x2 psi_x2 (first derivatives only).
double null_form_cartesian(const PointJet& phi, const PointJet& psi);

/// 2 (phi_xi psi_eta + phi_eta psi_xi) - phi_x2 psi_x2.
double null_form_goursat(const GoursatJet& phi, const GoursatJet& psi);

/// sum_a sigma_a d_a(f_a / sqrt(D)), D = 1 - sum_a sigma_a f_a^2, for a graph
/// over n variables with diagonal signature sigma. `hess` is row-major n x n.
/// The membrane operator is sigma = (+1, -1, -1) over (t, x1, x2).
double signature_residual(std::span<const double> sigma, std::span<const double> grad, std::span<const double> hess);

/// d_t(v_t/sqrt(delta)) - sum_i d_xi(v_xi/sqrt(delta)). Throws if delta <= 0.
double membrane_residual(const PointJet& jet);

MetricCoeffs quasilinear_coeffs(const PointJet& jet);

/// m_tt v_tt + 2 sum m_txi v_txi + sum m_xixj v_xixj for the jet's own second derivatives.
double apply_metric(const MetricCoeffs& m, const PointJet& jet);

/// v_tt such that the membrane residual equals `forcing`; the jet's own d_tt is ignored.
double solve_vtt(const PointJet& jet, double forcing = 0.0);

/// Box v for an exact surface written in null-form language:
/// -Q0(v, Q0(v, v)) / (2 (1 - Q0(v, v))).
double box_rhs(const PointJet& v);

/// Right-hand side of Box u for u = v - (a x2 + b) F(x1 + t), written with
/// varsigma = Q0(u,u) + 2[(a x2 + b) F'(u_t - u_x1) - a u_x2 F] in place of Q0(v, v).
/// Throws DegenerateSurfaceError("degenerate induced metric") when varsigma >= 1 - margin.
double perturbed_rhs_cartesian(const PointJet& u, const BackgroundJet& bg);

/// Null-coordinate form for a = 0, b = 1: returns R with
/// Box u - 4 F'^2 u_etaeta = R, where
/// R = (1 - H)/2 [Q0(u, Q0(u,u)) + 8 F' Q0(u, u_eta) + 8 F'' u_eta^2] - 4 F'^2 u_etaeta H,
/// H = 1 + 1/(1 - varsigma), varsigma = Q0(u,u) + 4 F' u_eta.
double perturbed_rhs_goursat(const GoursatJet& u, double dF, double ddF);

/// varsigma in null coordinates (a = 0, b = 1).
double varsigma_goursat(const GoursatJet& u, double dF);

}  // namespace membrane
