#include "membrane/vector_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace membrane {

namespace {

const std::array<std::pair<VectorFieldId, const char*>, 13> kNames = {{
    {VectorFieldId::Gamma1, "Gamma1"},
    {VectorFieldId::Gamma2, "Gamma2"},
    {VectorFieldId::Gamma3, "Gamma3"},
    {VectorFieldId::Gamma4, "Gamma4"},
    {VectorFieldId::Gamma5, "Gamma5"},
    {VectorFieldId::Gamma6, "Gamma6"},
    {VectorFieldId::L0, "L0"},
    {VectorFieldId::L1, "L1"},
    {VectorFieldId::L2, "L2"},
    {VectorFieldId::Omega, "Omega"},
    {VectorFieldId::Dt, "Dt"},
    {VectorFieldId::Dx1, "Dx1"},
    {VectorFieldId::Dx2, "Dx2"},
}};

Polynomial var(int a) { return Polynomial::variable(a); }
Polynomial cst(double c) { return Polynomial(c); }

}  // namespace

std::string to_string(VectorFieldId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "?";
}

VectorFieldId vector_field_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  throw std::invalid_argument("unknown vector field: " + name);
}

DiffOp cartesian_op(VectorFieldId id) {
  const Polynomial t = var(0), x1 = var(1), x2 = var(2);
  switch (id) {
    case VectorFieldId::Gamma1:
      return DiffOp::first_order({cst(1), cst(1), Polynomial()});
    case VectorFieldId::Gamma2:
      return DiffOp::first_order({cst(1), cst(-1), Polynomial()});
    case VectorFieldId::Gamma3:
      return DiffOp::partial(2);
    case VectorFieldId::Gamma4:
      return DiffOp::first_order({t - x1, x1 - t, x2});
    case VectorFieldId::Gamma5:
      return DiffOp::first_order({t + x1, t + x1, x2});
    case VectorFieldId::Gamma6:
      return DiffOp::first_order({x2, -1.0 * x2, t + x1});
    case VectorFieldId::L0:
      return DiffOp::first_order({t, x1, x2});
    case VectorFieldId::L1:
      return DiffOp::first_order({x1, t, Polynomial()});
    case VectorFieldId::L2:
      return DiffOp::first_order({x2, Polynomial(), t});
    case VectorFieldId::Omega:
      return DiffOp::first_order({Polynomial(), -1.0 * x2, x1});
    case VectorFieldId::Dt:
      return DiffOp::partial(0);
    case VectorFieldId::Dx1:
      return DiffOp::partial(1);
    case VectorFieldId::Dx2:
      return DiffOp::partial(2);
  }
  throw std::invalid_argument("cartesian_op: bad id");
}

DiffOp goursat_op(VectorFieldId id) {
  const Polynomial xi = var(0), eta = var(1), x2 = var(2);
  switch (id) {
    case VectorFieldId::Gamma1:
      return DiffOp::first_order({cst(2), Polynomial(), Polynomial()});
    case VectorFieldId::Gamma2:
      return DiffOp::first_order({Polynomial(), cst(2), Polynomial()});
    case VectorFieldId::Gamma3:
      return DiffOp::partial(2);
    case VectorFieldId::Gamma4:
      return DiffOp::first_order({Polynomial(), 2.0 * eta, x2});
    case VectorFieldId::Gamma5:
      return DiffOp::first_order({2.0 * xi, Polynomial(), x2});
    case VectorFieldId::Gamma6:
      return DiffOp::first_order({Polynomial(), 2.0 * x2, xi});
    case VectorFieldId::L0:
      return DiffOp::first_order({xi, eta, x2});
    case VectorFieldId::L1:
      return DiffOp::first_order({xi, -1.0 * eta, Polynomial()});
    case VectorFieldId::L2:
      return DiffOp::first_order({x2, x2, 0.5 * (xi + eta)});
    case VectorFieldId::Omega:
      return DiffOp::first_order({-1.0 * x2, x2, 0.5 * (xi - eta)});
    case VectorFieldId::Dt:
      return DiffOp::first_order({cst(1), cst(1), Polynomial()});
    case VectorFieldId::Dx1:
      return DiffOp::first_order({cst(1), cst(-1), Polynomial()});
    case VectorFieldId::Dx2:
      return DiffOp::partial(2);
  }
  throw std::invalid_argument("goursat_op: bad id");
}

DiffOp box_op() {
  DiffOp b = DiffOp::partial(0).compose(DiffOp::partial(0));
  b = b - DiffOp::partial(1).compose(DiffOp::partial(1));
  b = b - DiffOp::partial(2).compose(DiffOp::partial(2));
  return b;
}

GoursatPoint GoursatPoint::from_cartesian(double t, double x1, double x2) { return {t + x1, t - x1, x2}; }

std::array<double, 3> GoursatPoint::to_cartesian() const { return {0.5 * (xi + eta), 0.5 * (xi - eta), x2}; }

namespace {

Jet eval_jet(const SpacetimeExpr& f, const std::array<double, 3>& y, int order) {
  const auto v = Jet::variables<3>(order, y);
  return f(v);
}

}  // namespace

double apply_vf(VectorFieldId id, const SpacetimeExpr& f, const std::array<double, 3>& txx) {
  const Jet j = eval_jet(f, txx, 1);
  return cartesian_op(id).apply(txx, [&](const MultiIndex& e) { return j.derivative(e); });
}

double apply_vf_goursat(VectorFieldId id, const SpacetimeExpr& f_goursat, const GoursatPoint& p) {
  const std::array<double, 3> y{p.xi, p.eta, p.x2};
  const Jet j = eval_jet(f_goursat, y, 1);
  return goursat_op(id).apply(y, [&](const MultiIndex& e) { return j.derivative(e); });
}

double apply_vf(VectorFieldId id, const PointJet& jet, const std::array<double, 3>& txx) {
  return cartesian_op(id).apply(txx, [&](const MultiIndex& e) -> double {
    const int order = e[0] + e[1] + e[2];
    if (order == 0) return jet.value;
    if (order > 1) throw std::invalid_argument("apply_vf: point jet carries only first derivatives here");
    return e[0] == 1 ? jet.d_t : (e[1] == 1 ? jet.d_x1 : jet.d_x2);
  });
}

ScalarField apply_vf(VectorFieldId id, const ScalarField& u, const ScalarField& u_t, int scheme_order) {
  if (!(u.grid() == u_t.grid())) throw std::invalid_argument("apply_vf: grid mismatch");
  const ScalarField u1 = derivative(u, Axis::X1, 1, scheme_order);
  const ScalarField u2 = derivative(u, Axis::X2, 1, scheme_order);
  const DiffOp op = cartesian_op(id);
  const Grid2D& g = u.grid();
  const double t = u.time_label();
  ScalarField out(g, t);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      PointJet p;
      p.value = u(i, j);
      p.d_t = u_t(i, j);
      p.d_x1 = u1(i, j);
      p.d_x2 = u2(i, j);
      const std::array<double, 3> y{t, g.x1(i), g.x2(j)};
      out.at(i, j) = op.apply(y, [&](const MultiIndex& e) {
        return e[0] + e[1] + e[2] == 0 ? p.value : (e[0] == 1 ? p.d_t : (e[1] == 1 ? p.d_x1 : p.d_x2));
      });
    }
  return out;
}

Polynomial apply_vf(VectorFieldId id, const Polynomial& f) { return cartesian_op(id).apply(f); }

double operator_distance(const DiffOp& a, const DiffOp& b) {
  const DiffOp d = a - b;
  double m = 0.0;
  for (const auto& [e, p] : d.terms())
    for (const auto& [ee, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

namespace {

/// Box o A for any operator A.
DiffOp box_after(const DiffOp& a) {
  DiffOp out = DiffOp::partial(0).compose(DiffOp::partial(0).compose(a));
  out = out - DiffOp::partial(1).compose(DiffOp::partial(1).compose(a));
  out = out - DiffOp::partial(2).compose(DiffOp::partial(2).compose(a));
  return out;
}

DiffOp commutator(VectorFieldId id) {
  const DiffOp g = cartesian_op(id);
  return box_after(g) - g.compose(box_op());
}

CommutatorFit fit_commutator(VectorFieldId id, const DiffOp& c, std::span<const double> defect,
                             std::span<const double> box) {
  double db = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < defect.size(); ++i) {
    db += defect[i] * box[i];
    bb += box[i] * box[i];
  }
  CommutatorFit fit;
  fit.id = id;
  fit.lambda = bb > 0.0 ? db / bb : 0.0;
  for (std::size_t i = 0; i < defect.size(); ++i) {
    fit.max_defect = std::max(fit.max_defect, std::abs(defect[i]));
    fit.max_residual = std::max(fit.max_residual, std::abs(defect[i] - fit.lambda * box[i]));
  }
  fit.operator_residual = operator_distance(c, fit.lambda * box_op());
  return fit;
}

}  // namespace

CommutatorFit commutator_box(VectorFieldId id, std::span<const Polynomial> suite,
                             std::span<const std::array<double, 3>> lattice) {
  const DiffOp c = commutator(id);
  const DiffOp b = box_op();
  std::vector<double> defect, box;
  for (const auto& f : suite) {
    const Polynomial cf = c.apply(f);
    const Polynomial bf = b.apply(f);
    for (const auto& y : lattice) {
      defect.push_back(cf(y));
      box.push_back(bf(y));
    }
  }
  return fit_commutator(id, c, defect, box);
}

CommutatorFit commutator_box(VectorFieldId id, const SpacetimeExpr& f, std::span<const std::array<double, 3>> lattice) {
  const DiffOp c = commutator(id);
  const DiffOp b = box_op();
  std::vector<double> defect, box;
  for (const auto& y : lattice) {
    const Jet j = eval_jet(f, y, 3);
    auto partials = [&](const MultiIndex& e) { return j.derivative(e); };
    defect.push_back(c.apply(y, partials));
    box.push_back(b.apply(y, partials));
  }
  return fit_commutator(id, c, defect, box);
}

Polynomial null_form(const Polynomial& phi, const Polynomial& psi) {
  return phi.derivative(0) * psi.derivative(0) - phi.derivative(1) * psi.derivative(1) -
         phi.derivative(2) * psi.derivative(2);
}

LeibnizFit gamma_nullform_leibniz(std::span<const VectorFieldId> k, const Polynomial& phi, const Polynomial& psi,
                                  std::span<const std::array<double, 3>> lattice) {
  if (k.empty() || k.size() > 2) throw std::invalid_argument("gamma_nullform_leibniz: |k| must be 1 or 2");
  LeibnizFit fit;
  fit.k.assign(k.begin(), k.end());
  const Polynomial q = null_form(phi, psi);
  Polynomial defect;
  std::vector<Polynomial> basis;
  if (k.size() == 1) {
    const DiffOp g = cartesian_op(k[0]);
    defect = g.apply(q) - null_form(g.apply(phi), psi) - null_form(phi, g.apply(psi));
    basis.push_back(q);
    fit.basis.push_back("Q0(phi,psi)");
  } else {
    const DiffOp ga = cartesian_op(k[0]);
    const DiffOp gb = cartesian_op(k[1]);
    const Polynomial a_phi = ga.apply(phi), b_phi = gb.apply(phi);
    const Polynomial a_psi = ga.apply(psi), b_psi = gb.apply(psi);
    defect = ga.apply(gb.apply(q)) - null_form(ga.apply(b_phi), psi) - null_form(b_phi, a_psi) -
             null_form(a_phi, b_psi) - null_form(phi, ga.apply(b_psi));
    const std::string na = to_string(k[0]), nb = to_string(k[1]);
    basis.push_back(null_form(a_phi, psi));
    fit.basis.push_back("Q0(" + na + " phi,psi)");
    basis.push_back(null_form(phi, a_psi));
    fit.basis.push_back("Q0(phi," + na + " psi)");
    if (k[0] != k[1]) {
      basis.push_back(null_form(b_phi, psi));
      fit.basis.push_back("Q0(" + nb + " phi,psi)");
      basis.push_back(null_form(phi, b_psi));
      fit.basis.push_back("Q0(phi," + nb + " psi)");
    }
    basis.push_back(q);
    fit.basis.push_back("Q0(phi,psi)");
  }
  const auto rows = static_cast<Eigen::Index>(lattice.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd d(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& y = lattice[static_cast<std::size_t>(r)];
    d(r) = defect(y);
    for (Eigen::Index c = 0; c < cols; ++c) A(r, c) = basis[static_cast<std::size_t>(c)](y);
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(d);
  fit.coefficients.assign(x.data(), x.data() + x.size());
  const Eigen::VectorXd res = d - A * x;
  fit.max_residual = res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
  fit.max_defect = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  return fit;
}

std::vector<std::array<double, 3>> cube_lattice(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("cube_lattice: n must be positive");
  std::vector<std::array<double, 3>> out;
  const double h = n > 1 ? (hi - lo) / (n - 1) : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.push_back({lo + i * h, lo + j * h, lo + k * h});
  return out;
}

// ---------------------------------------------------------------------------
// Slab builder

GoursatSlabBuilder::GoursatSlabBuilder(GoursatLattice lattice, int scheme_order)
    : lattice_(std::move(lattice)), scheme_order_(scheme_order) {
  if (lattice_.xi.empty() || lattice_.eta.n < 1 || lattice_.x2.n < 1)
    throw std::invalid_argument("GoursatSlabBuilder: empty lattice");
  for (std::size_t i = 1; i < lattice_.xi.size(); ++i)
    if (!(lattice_.xi[i] > lattice_.xi[i - 1])) throw std::invalid_argument("GoursatSlabBuilder: xi must increase");
  slab_ = {SlabField(lattice_), SlabField(lattice_), SlabField(lattice_), SlabField(lattice_)};
  const std::size_t pairs = lattice_.xi.size() * static_cast<std::size_t>(lattice_.eta.n);
  node_t_.resize(pairs);
  for (std::size_t i = 0; i < lattice_.xi.size(); ++i)
    for (int j = 0; j < lattice_.eta.n; ++j)
      node_t_[i * static_cast<std::size_t>(lattice_.eta.n) + static_cast<std::size_t>(j)] =
          0.5 * (lattice_.xi[i] + lattice_.eta.at(j));
  order_.resize(pairs);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return node_t_[a] < node_t_[b]; });
  covered_.assign(pairs, 0);
}

void GoursatSlabBuilder::add_slice(const ScalarField& u, const ScalarField& u_t) {
  if (!(u.grid() == u_t.grid())) throw std::invalid_argument("GoursatSlabBuilder: grid mismatch");
  Slice s;
  s.t = u.time_label();
  if (has_prev_ && !(s.t > prev_.t)) throw std::invalid_argument("GoursatSlabBuilder: slices must advance in time");
  // Nothing left to fill: skip the derivative work.
  if (has_prev_ && cursor_ >= order_.size()) {
    t_hi_ = s.t;
    return;
  }
  s.u = u;
  s.u_t = u_t;
  s.u_x1 = derivative(u, Axis::X1, 1, scheme_order_);
  s.u_x2 = derivative(u, Axis::X2, 1, scheme_order_);
  if (has_prev_) {
    fill_between(prev_, s);
  } else {
    t_lo_ = s.t;
    // nodes strictly before the first slice stay uncovered
    while (cursor_ < order_.size() && node_t_[order_[cursor_]] < s.t - 1e-12) ++cursor_;
  }
  t_hi_ = s.t;
  prev_ = std::move(s);
  has_prev_ = true;
}

void GoursatSlabBuilder::fill_between(const Slice& a, const Slice& b) {
  const Grid2D& g = a.u.grid();
  const auto nx2 = lattice_.x2.n;
  const auto neta = static_cast<std::size_t>(lattice_.eta.n);
  while (cursor_ < order_.size()) {
    const std::size_t p = order_[cursor_];
    const double tn = node_t_[p];
    if (tn > b.t + 1e-12) break;
    ++cursor_;
    const std::size_t i = p / neta;
    const int j = static_cast<int>(p % neta);
    const double xi = lattice_.xi[i];
    const double eta = lattice_.eta.at(j);
    const double x1 = 0.5 * (xi - eta);
    const double w = std::clamp((tn - a.t) / (b.t - a.t), 0.0, 1.0);
    if (x1 < g.x1_min || x1 > g.x1_max) continue;
    bool inside = true;
    for (int k = 0; k < nx2; ++k) {
      const double x2 = lattice_.x2.at(k);
      if (x2 < g.x2_min || x2 > g.x2_max) {
        inside = false;
        break;
      }
      auto lerp = [&](const ScalarField& fa, const ScalarField& fb) {
        return (1.0 - w) * fa.interpolate(x1, x2) + w * fb.interpolate(x1, x2);
      };
      const double uu = lerp(a.u, b.u);
      const double ut = lerp(a.u_t, b.u_t);
      const double u1 = lerp(a.u_x1, b.u_x1);
      const double u2 = lerp(a.u_x2, b.u_x2);
      slab_.u.at(i, j, k) = uu;
      slab_.u_xi.at(i, j, k) = 0.5 * (ut + u1);
      slab_.u_eta.at(i, j, k) = 0.5 * (ut - u1);
      slab_.u_x2.at(i, j, k) = u2;
    }
    if (inside) {
      covered_[p] = 1;
      ++filled_;
    }
  }
}

GoursatSlab GoursatSlabBuilder::finish() const {
  if (!complete()) throw std::out_of_range("xi station outside covered wedge");
  return slab_;
}

GoursatSlab to_goursat(std::span<const ScalarField> u, std::span<const ScalarField> u_t, const GoursatLattice& lattice,
                       int scheme_order) {
  if (u.size() != u_t.size()) throw std::invalid_argument("to_goursat: stacks differ in length");
  GoursatSlabBuilder b(lattice, scheme_order);
  for (std::size_t k = 0; k < u.size(); ++k) b.add_slice(u[k], u_t[k]);
  return b.finish();
}

double cone_excess(const SlabField& u, double threshold) {
  const auto& l = u.lattice;
  double worst = 0.0;
  for (std::size_t i = 0; i < l.xi.size(); ++i)
    for (int j = 0; j < l.eta.n; ++j) {
      const double r = std::sqrt(std::max(0.0, (2.0 + l.xi[i]) * (2.0 + l.eta.at(j))));
      for (int k = 0; k < l.x2.n; ++k)
        if (std::abs(u(i, j, k)) > threshold) worst = std::max(worst, std::abs(l.x2.at(k)) - r);
    }
  return worst;
}

}  // namespace membrane
