#include "trisk/swe.hpp"

#include <cmath>
#include <sstream>

#include "trisk/error.hpp"

namespace trisk {

double stable_sum(const Eigen::VectorXd& v) {
  double s = 0, c = 0;
  for (int i = 0; i < v.size(); ++i) {
    double x = v[i], t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

PhysicsParams make_physics(const DecOperators& ops, double g, Cochain f2, Cochain hs2) {
  if (!(g > 0)) throw Error(ErrorKind::InvalidParameter, "gravity must be positive");
  if (!(f2.type == straight(2)) || !(hs2.type == twisted(2)))
    throw Error(ErrorKind::TypeMismatch, "f must be a straight 2-form and topography a twisted 2-form");
  PhysicsParams p;
  p.g = g;
  p.ft0 = ops.hodge.H2.apply(f2);
  p.hs0 = ops.hodge.Ht2.apply(hs2);
  p.f2 = std::move(f2);
  p.hs2 = std::move(hs2);
  return p;
}

PhysicsParams make_physics(const MeshPair& m, const DecOperators& ops, double g, double f0) {
  Eigen::VectorXd area = Eigen::Map<const Eigen::VectorXd>(m.geom.cell_area.data(), m.topo.nc);
  return make_physics(ops, g, Cochain(straight(2), f0 * area), Cochain::zeros(m, twisted(2)));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"al81", "trsk2010-te", "trsk2010-pe", "eldred-dbl", "accur"};
  return names;
}

SchemeConfig scheme_preset(const std::string& name) {
  SchemeConfig s;
  s.preset = name;
  if (name == "al81") {
    s.r = RKind::Combinatorial;
    s.q = QVariant::DBL;
    s.t = TKind::Combinatorial;
  } else if (name == "trsk2010-te") {
    s.q = QVariant::TE;
  } else if (name == "trsk2010-pe") {
    s.q = QVariant::PE;
  } else if (name == "eldred-dbl") {
    s.q = QVariant::DBL;
  } else if (name == "accur") {
    s.q = QVariant::ACCUR;
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown scheme preset '" + name + "'");
  }
  return s;
}

std::string describe(const SchemeConfig& s) {
  std::ostringstream os;
  os << "(" << s.hodge << ", " << to_string(s.r) << " R, " << to_string(s.q) << ", " << to_string(s.t) << " T)";
  return os.str();
}

namespace {

Model assemble(const MeshPair& m, const SchemeConfig& s) {
  if (s.hodge != "voronoi") throw Error(ErrorKind::UnsupportedHodge, "only the voronoi Hodge star is available");
  DecOperators ops = build_dec_operators(m);
  RWedge R = build_R(m, s.r);
  SpMat W = build_W_from_R(m, R, ops);
  QOperator Q(s.q, m, R, W);
  TWedge T = build_T(m, s.t);
  return Model{m, s, std::move(ops), std::move(R), std::move(W), std::move(Q), std::move(T)};
}

}  // namespace

Model build_model(const MeshPair& m, const SchemeConfig& s) { return assemble(m, s); }

namespace {

void check_state(const Model& md, const ModelState& s) {
  if (!(s.u.type == straight(1, Flavor::Circulation)) || !(s.h.type == twisted(2)))
    throw Error(ErrorKind::TypeMismatch, "state needs a straight circulation u and a twisted 2-form h");
  if (s.u.values.size() != md.mesh.topo.ne || s.h.values.size() != md.mesh.topo.nv)
    throw Error(ErrorKind::TypeMismatch, "state is not sized to the mesh");
}

Cochain kinetic(const Model& md, const ModelState& s) {
  Cochain ut = md.ops.hodge.H1.apply(s.u);
  return ke_wedge(md.T, s.u, ut);
}

}  // namespace

double hamiltonian(const Model& md, const ModelState& s, const PhysicsParams& p) {
  check_state(md, s);
  const auto& ops = md.ops;
  Cochain K = kinetic(md, s);
  K.values *= 0.5;
  return 0.5 * p.g * inner_product(ops, s.h, s.h) + p.g * inner_product(ops, s.h, p.hs2) + inner_product(ops, s.h, K);
}

FunctionalDerivatives functional_derivatives(const Model& md, const ModelState& s, const PhysicsParams& p) {
  check_state(md, s);
  const auto& ops = md.ops;
  Cochain h0 = ops.hodge.Ht2.apply(s.h);
  Cochain ut = ops.hodge.H1.apply(s.u);
  Cochain Ft = massflux_adjoint_twisted(md.T, h0, ut);
  Cochain Fs = ops.hodge.H1.apply(massflux_adjoint_straight(md.T, h0, s.u));
  Cochain F(twisted(1, Flavor::Flux), 0.5 * (Ft.values + Fs.values));
  Cochain K = ops.hodge.Ht2.apply(ke_wedge(md.T, s.u, ut));
  Cochain B(straight(0), 0.5 * K.values + p.g * (h0.values + p.hs0.values));
  return {std::move(F), std::move(B)};
}

Cochain diagnose_pv(const Model& md, const ModelState& s, const PhysicsParams& p) {
  check_state(md, s);
  Eigen::VectorXd eta = md.ops.D2.mat * s.u.values + p.f2.values;
  Eigen::VectorXd rh = md.R.mat * s.h.values;
  std::vector<int> bad;
  for (int c = 0; c < rh.size(); ++c)
    if (!(rh[c] > 0)) bad.push_back(c);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "non-positive thickness R h at " << bad.size() << " cell(s):";
    for (size_t i = 0; i < bad.size() && i < 20; ++i) os << " " << bad[i];
    if (bad.size() > 20) os << " ...";
    throw Error(ErrorKind::PvSingularity, os.str());
  }
  return {twisted(0), eta.cwiseQuotient(rh)};
}

Tendencies tendencies(const Model& md, const ModelState& s, const PhysicsParams& p) {
  FunctionalDerivatives fd = functional_derivatives(md, s, p);
  Cochain q = diagnose_pv(md, s, p);
  const auto& ops = md.ops;
  Cochain dh = ops.Dt2.apply(fd.F);
  dh.values = -dh.values;
  Eigen::VectorXd du = -md.Q.apply(q.values, fd.F.values) - ops.D1.mat * fd.B.values;
  return {std::move(dh), Cochain(straight(1, Flavor::Circulation), std::move(du))};
}

Tendencies linearized_tendencies(const Model& md, const ModelState& s, const PhysicsParams& p, double H0) {
  if (!(H0 > 0)) throw Error(ErrorKind::InvalidParameter, "reference depth must be positive");
  check_state(md, s);
  const auto& ops = md.ops;
  Eigen::VectorXd F = H0 * (ops.hodge.H1.mat * s.u.values);
  Eigen::VectorXd h0 = ops.hodge.Ht2.mat * s.h.values;
  Eigen::VectorXd B = p.g * (h0 + p.hs0.values);
  Eigen::VectorXd q = p.ft0.values / H0;
  Eigen::VectorXd du = -md.Q.apply(q, F) - ops.D1.mat * B;
  Eigen::VectorXd dh = -(ops.Dt2.mat * F);
  return {Cochain(twisted(2), std::move(dh)), Cochain(straight(1, Flavor::Circulation), std::move(du))};
}

InvariantRates invariant_rates(const Model& md, const ModelState& s, const PhysicsParams& p, const Tendencies& t) {
  FunctionalDerivatives fd = functional_derivatives(md, s, p);
  Cochain q = diagnose_pv(md, s, p);
  const auto& ops = md.ops;
  InvariantRates r;
  r.dM = stable_sum(t.dh.values);
  Eigen::VectorXd deta = ops.D2.mat * t.du.values;
  r.dC = stable_sum(deta);
  r.mass_scale = 2.0 * fd.F.values.cwiseAbs().sum();
  r.circ_scale = 2.0 * t.du.values.cwiseAbs().sum();
  // chain rule: dH = <δH/δu, du> + <δH/δh, dh>
  r.dH = stable_sum(fd.F.values.cwiseProduct(t.du.values)) + stable_sum(fd.B.values.cwiseProduct(t.dh.values));
  Eigen::VectorXd dpe_du = ops.Dt1.mat * q.values;
  Eigen::VectorXd dpe_dh = 0.5 * (md.R.mat.transpose() * q.values.cwiseAbs2());
  r.dPE = stable_sum(dpe_du.cwiseProduct(t.du.values)) - stable_sum(dpe_dh.cwiseProduct(t.dh.values));
  return r;
}

Diagnostics diagnostics(const Model& md, const ModelState& s, const PhysicsParams& p) {
  check_state(md, s);
  const auto& ops = md.ops;
  Diagnostics d;
  d.mass = stable_sum(s.h.values);
  d.circulation = stable_sum(ops.D2.mat * s.u.values + p.f2.values);
  d.energy = hamiltonian(md, s, p);
  Cochain q = diagnose_pv(md, s, p);
  Eigen::VectorXd rh = md.R.mat * s.h.values;
  d.potential_enstrophy = 0.5 * stable_sum(q.values.cwiseAbs2().cwiseProduct(rh));
  Eigen::VectorXd h0 = ops.hodge.Ht2.mat * s.h.values;
  d.min_h = h0.minCoeff();
  d.max_h = h0.maxCoeff();
  Eigen::VectorXd len = Eigen::Map<const Eigen::VectorXd>(md.mesh.geom.edge_len.data(), md.mesh.topo.ne);
  d.max_u = s.u.values.cwiseQuotient(len).cwiseAbs().maxCoeff();
  return d;
}

}  // namespace trisk
