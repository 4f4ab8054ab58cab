#include "membrane/extremal_ops.hpp"

#include <cmath>
#include <vector>

namespace membrane {

PointJet BackgroundJet::jet() const {
  const double w = a * x2 + b;
  PointJet j;
  j.value = w * F;
  j.d_t = j.d_x1 = w * dF;
  j.d_x2 = a * F;
  j.d_tt = j.d_tx1 = j.d_x1x1 = w * ddF;
  j.d_tx2 = j.d_x1x2 = a * dF;
  j.d_x2x2 = 0.0;
  return j;
}

GoursatJet GoursatJet::from_cartesian(const PointJet& j) {
  GoursatJet g;
  g.value = j.value;
  g.d_xi = 0.5 * (j.d_t + j.d_x1);
  g.d_eta = 0.5 * (j.d_t - j.d_x1);
  g.d_x2 = j.d_x2;
  g.d_xixi = 0.25 * (j.d_tt + 2.0 * j.d_tx1 + j.d_x1x1);
  g.d_etaeta = 0.25 * (j.d_tt - 2.0 * j.d_tx1 + j.d_x1x1);
  g.d_xieta = 0.25 * (j.d_tt - j.d_x1x1);
  g.d_xix2 = 0.5 * (j.d_tx2 + j.d_x1x2);
  g.d_etax2 = 0.5 * (j.d_tx2 - j.d_x1x2);
  g.d_x2x2 = j.d_x2x2;
  return g;
}

PointJet GoursatJet::to_cartesian() const {
  PointJet j;
  j.value = value;
  j.d_t = d_xi + d_eta;
  j.d_x1 = d_xi - d_eta;
  j.d_x2 = d_x2;
  j.d_tt = d_xixi + 2.0 * d_xieta + d_etaeta;
  j.d_tx1 = d_xixi - d_etaeta;
  j.d_x1x1 = d_xixi - 2.0 * d_xieta + d_etaeta;
  j.d_tx2 = d_xix2 + d_etax2;
  j.d_x1x2 = d_xix2 - d_etax2;
  j.d_x2x2 = d_x2x2;
  return j;
}

double delta_factor(const PointJet& j) { return 1.0 + j.d_x1 * j.d_x1 + j.d_x2 * j.d_x2 - j.d_t * j.d_t; }

double null_form_cartesian(const PointJet& phi, const PointJet& psi) {
  return phi.d_t * psi.d_t - phi.d_x1 * psi.d_x1 - phi.d_x2 * psi.d_x2;
}

double null_form_goursat(const GoursatJet& phi, const GoursatJet& psi) {
  return 2.0 * (phi.d_xi * psi.d_eta + phi.d_eta * psi.d_xi) - phi.d_x2 * psi.d_x2;
}

double signature_residual(std::span<const double> sigma, std::span<const double> grad, std::span<const double> hess) {
  const std::size_t n = sigma.size();
  if (grad.size() != n || hess.size() != n * n) throw std::invalid_argument("signature_residual: size mismatch");
  double D = 1.0;
  for (std::size_t a = 0; a < n; ++a) D -= sigma[a] * grad[a] * grad[a];
  if (!(D > 0.0)) throw DegenerateSurfaceError("surface not timelike at point");
  // d_a D = -2 sum_b sigma_b f_b f_ab
  double out = 0.0;
  const double rs = 1.0 / std::sqrt(D);
  for (std::size_t a = 0; a < n; ++a) {
    double dD = 0.0;
    for (std::size_t b = 0; b < n; ++b) dD -= 2.0 * sigma[b] * grad[b] * hess[a * n + b];
    // d_a(f_a D^{-1/2}) = f_aa D^{-1/2} - f_a dD / (2 D^{3/2})
    out += sigma[a] * (hess[a * n + a] * rs - 0.5 * grad[a] * dD * rs / D);
  }
  return out;
}

double membrane_residual(const PointJet& j) {
  const double sigma[3] = {1.0, -1.0, -1.0};
  const double grad[3] = {j.d_t, j.d_x1, j.d_x2};
  const double hess[9] = {j.d_tt,  j.d_tx1,  j.d_tx2,  //
                          j.d_tx1, j.d_x1x1, j.d_x1x2,  //
                          j.d_tx2, j.d_x1x2, j.d_x2x2};
  return signature_residual(sigma, grad, hess);
}

MetricCoeffs quasilinear_coeffs(const PointJet& j) {
  MetricCoeffs m;
  m.delta = delta_factor(j);
  m.m_tt = 1.0 + j.d_x1 * j.d_x1 + j.d_x2 * j.d_x2;
  m.m_tx1 = -j.d_t * j.d_x1;
  m.m_tx2 = -j.d_t * j.d_x2;
  m.m_x1x1 = -m.delta + j.d_x1 * j.d_x1;
  m.m_x1x2 = j.d_x1 * j.d_x2;
  m.m_x2x2 = -m.delta + j.d_x2 * j.d_x2;
  return m;
}

double apply_metric(const MetricCoeffs& m, const PointJet& j) {
  return m.m_tt * j.d_tt + 2.0 * (m.m_tx1 * j.d_tx1 + m.m_tx2 * j.d_tx2) + m.m_x1x1 * j.d_x1x1 +
         2.0 * m.m_x1x2 * j.d_x1x2 + m.m_x2x2 * j.d_x2x2;
}

double solve_vtt(const PointJet& j, double forcing) {
  const MetricCoeffs m = quasilinear_coeffs(j);
  if (!(m.delta > kDegeneracyMargin)) throw DegenerateSurfaceError("degenerate (null) surface — run aborted");
  const double rest = 2.0 * (m.m_tx1 * j.d_tx1 + m.m_tx2 * j.d_tx2) + m.m_x1x1 * j.d_x1x1 +
                      2.0 * m.m_x1x2 * j.d_x1x2 + m.m_x2x2 * j.d_x2x2;
  const double rhs = forcing == 0.0 ? 0.0 : forcing * m.delta * std::sqrt(m.delta);
  return (rhs - rest) / m.m_tt;
}

namespace {

/// First-derivative jet of d_c v for c in {t, x1, x2}.
PointJet partial_jet(const PointJet& v, int c) {
  PointJet d;
  switch (c) {
    case 0:
      d.d_t = v.d_tt, d.d_x1 = v.d_tx1, d.d_x2 = v.d_tx2;
      break;
    case 1:
      d.d_t = v.d_tx1, d.d_x1 = v.d_x1x1, d.d_x2 = v.d_x1x2;
      break;
    default:
      d.d_t = v.d_tx2, d.d_x1 = v.d_x1x2, d.d_x2 = v.d_x2x2;
  }
  return d;
}

GoursatJet partial_jet(const GoursatJet& u, int c) {
  GoursatJet d;
  switch (c) {
    case 0:
      d.d_xi = u.d_xixi, d.d_eta = u.d_xieta, d.d_x2 = u.d_xix2;
      break;
    case 1:
      d.d_xi = u.d_xieta, d.d_eta = u.d_etaeta, d.d_x2 = u.d_etax2;
      break;
    default:
      d.d_xi = u.d_xix2, d.d_eta = u.d_etax2, d.d_x2 = u.d_x2x2;
  }
  return d;
}

void check_varsigma(double s) {
  if (!(s < 1.0 - kDegeneracyMargin)) throw DegenerateSurfaceError("degenerate induced metric");
}

}  // namespace

double box_rhs(const PointJet& v) {
  const double q = null_form_cartesian(v, v);
  if (!(q < 1.0)) throw DegenerateSurfaceError("surface not timelike at point");
  PointJet grad_q;
  grad_q.d_t = 2.0 * null_form_cartesian(v, partial_jet(v, 0));
  grad_q.d_x1 = 2.0 * null_form_cartesian(v, partial_jet(v, 1));
  grad_q.d_x2 = 2.0 * null_form_cartesian(v, partial_jet(v, 2));
  return -0.5 * null_form_cartesian(v, grad_q) / (1.0 - q);
}

double perturbed_rhs_cartesian(const PointJet& u, const BackgroundJet& bg) {
  const double w = bg.a * bg.x2 + bg.b;
  const double a = bg.a;
  const double F = bg.F, F1 = bg.dF, F2 = bg.ddF;
  const double um = u.d_t - u.d_x1;

  // varsigma = Q0(u,u) + 2P, P = w F' (u_t - u_x1) - a u_x2 F
  const double P = w * F1 * um - a * u.d_x2 * F;
  const double s = null_form_cartesian(u, u) + 2.0 * P;
  check_varsigma(s);

  const double P_t = w * (F2 * um + F1 * (u.d_tt - u.d_tx1)) - a * (u.d_tx2 * F + u.d_x2 * F1);
  const double P_1 = w * (F2 * um + F1 * (u.d_tx1 - u.d_x1x1)) - a * (u.d_x1x2 * F + u.d_x2 * F1);
  const double P_2 = a * F1 * um + w * F1 * (u.d_tx2 - u.d_x1x2) - a * u.d_x2x2 * F;

  PointJet grad_s;
  grad_s.d_t = 2.0 * null_form_cartesian(u, partial_jet(u, 0)) + 2.0 * P_t;
  grad_s.d_x1 = 2.0 * null_form_cartesian(u, partial_jet(u, 1)) + 2.0 * P_1;
  grad_s.d_x2 = 2.0 * null_form_cartesian(u, partial_jet(u, 2)) + 2.0 * P_2;

  const PointJet v = u + bg.jet();
  const double H = 1.0 + 1.0 / (1.0 - s);
  return 0.5 * (1.0 - H) * null_form_cartesian(v, grad_s);
}

double varsigma_goursat(const GoursatJet& u, double dF) { return null_form_goursat(u, u) + 4.0 * dF * u.d_eta; }

double perturbed_rhs_goursat(const GoursatJet& u, double dF, double ddF) {
  const double s = varsigma_goursat(u, dF);
  check_varsigma(s);
  const double H = 1.0 + 1.0 / (1.0 - s);

  GoursatJet grad_q;  // gradient of Q0(u, u)
  grad_q.d_xi = 2.0 * null_form_goursat(u, partial_jet(u, 0));
  grad_q.d_eta = 2.0 * null_form_goursat(u, partial_jet(u, 1));
  grad_q.d_x2 = 2.0 * null_form_goursat(u, partial_jet(u, 2));

  const double bracket = null_form_goursat(u, grad_q) + 8.0 * dF * null_form_goursat(u, partial_jet(u, 1)) +
                         8.0 * ddF * u.d_eta * u.d_eta;
  return 0.5 * (1.0 - H) * bracket - 4.0 * dF * dF * u.d_etaeta * H;
}

}  // namespace membrane
