#include "trisk/dec_ops.hpp"

#include <cmath>

#include "trisk/error.hpp"

namespace trisk {

namespace {

SpMat diagonal(const Eigen::VectorXd& d) {
  SpMat m(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> tr;
  for (int i = 0; i < d.size(); ++i) tr.emplace_back(i, i, d[i]);
  m.setFromTriplets(tr.begin(), tr.end());
  return m;
}

SparseLinearOp inverse_diag(const SparseLinearOp& h, double sign) {
  Eigen::VectorXd d = Eigen::VectorXd(h.mat.diagonal());
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0 || !std::isfinite(d[i]))
      throw Error(ErrorKind::SingularHodge, "zero diagonal entry at index " + std::to_string(i));
    d[i] = sign / d[i];
  }
  return {diagonal(d), h.codomain, h.domain};
}

}  // namespace

Cochain SparseLinearOp::apply(const Cochain& x) const {
  if (!(x.type == domain))
    throw Error(ErrorKind::TypeMismatch, "operator expects " + domain.str() + ", got " + x.type.str());
  if (x.values.size() != mat.cols()) throw Error(ErrorKind::TypeMismatch, "cochain length does not match operator");
  return {codomain, mat * x.values};
}

SparseLinearOp transpose_op(const SparseLinearOp& X) { return {SpMat(X.mat.transpose()), X.codomain, X.domain}; }

double max_abs(const SpMat& a) {
  double m = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

SparseLinearOp build_d(const MeshPair& m, int k, Grid grid) {
  const auto& t = m.topo;
  std::vector<Eigen::Triplet<double>> tr;
  SparseLinearOp op;
  if (k == 1) {
    // (D1 x)_e = sum_v t_ve x_v
    const auto& ev = grid == Grid::Straight ? t.edge_verts : t.tedge_verts;
    const auto& tv = grid == Grid::Straight ? t.t_ve : t.tt_ve;
    int nvert = grid == Grid::Straight ? t.nv : t.ntv();
    for (int e = 0; e < t.ne; ++e)
      for (int s = 0; s < 2; ++s) tr.emplace_back(e, ev[e][s], tv[e][s]);
    op.mat.resize(t.ne, nvert);
    op.domain = {grid, 0, Flavor::None};
    op.codomain = {grid, 1, Flavor::Circulation};
  } else if (k == 2) {
    // (D2 x)_c = sum_e n_ec x_e
    const auto& ce = grid == Grid::Straight ? t.cell_edges : t.tcell_edges;
    const auto& cn = grid == Grid::Straight ? t.n_ec : t.tn_ec;
    for (size_t c = 0; c < ce.size(); ++c)
      for (size_t j = 0; j < ce[c].size(); ++j) tr.emplace_back(static_cast<int>(c), ce[c][j], cn[c][j]);
    op.mat.resize(static_cast<int>(ce.size()), t.ne);
    op.domain = {grid, 1, grid == Grid::Straight ? Flavor::Circulation : Flavor::Flux};
    op.codomain = {grid, 2, Flavor::None};
  } else {
    throw Error(ErrorKind::WrongDegree, "build_d takes k = 1 or 2");
  }
  op.mat.setFromTriplets(tr.begin(), tr.end());
  return op;
}

HodgeSet build_hodge_voronoi(const MeshPair& m) {
  if (!m.orthogonal) throw Error(ErrorKind::UnsupportedHodge, "Voronoi Hodge star needs an orthogonal mesh");
  const auto& g = m.geom;
  const auto& t = m.topo;
  Eigen::VectorXd h1(t.ne), ht2(t.nv), h2(t.nc);
  for (int e = 0; e < t.ne; ++e) h1[e] = g.tedge_len[e] / g.edge_len[e];
  for (int v = 0; v < t.nv; ++v) ht2[v] = 1.0 / g.tcell_area[v];
  for (int c = 0; c < t.nc; ++c) h2[c] = 1.0 / g.cell_area[c];
  HodgeSet h;
  h.H1 = {diagonal(h1), straight(1, Flavor::Circulation), twisted(1, Flavor::Flux)};
  h.Ht2 = {diagonal(ht2), twisted(2), straight(0)};
  h.H2 = {diagonal(h2), straight(2), twisted(0)};
  return h;
}

InverseHodges derive_inverse_hodges(const HodgeSet& h) {
  return {inverse_diag(h.H1, -1.0), inverse_diag(h.Ht2, 1.0), inverse_diag(h.H2, 1.0)};
}

DecOperators build_dec_operators(const MeshPair& m) {
  DecOperators ops;
  ops.D1 = build_d(m, 1, Grid::Straight);
  ops.D2 = build_d(m, 2, Grid::Straight);
  ops.Dt1 = build_d(m, 1, Grid::Twisted);
  ops.Dt2 = build_d(m, 2, Grid::Twisted);
  ops.hodge = build_hodge_voronoi(m);
  ops.inv = derive_inverse_hodges(ops.hodge);
  return ops;
}

double inner_product(const DecOperators& ops, const Cochain& a, const Cochain& b) {
  if (!(a.type == b.type))
    throw Error(ErrorKind::TypeMismatch, "inner product of " + a.type.str() + " with " + b.type.str());
  const auto& t = a.type;
  const SparseLinearOp* h = nullptr;
  double sign = 1.0;
  if (t.grid == Grid::Straight) {
    if (t.degree == 0) h = &ops.inv.H0;
    if (t.degree == 1 && t.flavor == Flavor::Circulation) h = &ops.hodge.H1;
    if (t.degree == 2) h = &ops.hodge.H2;
  } else {
    if (t.degree == 0) h = &ops.inv.Ht0;
    if (t.degree == 1 && t.flavor == Flavor::Flux) {
      h = &ops.inv.Ht1;
      sign = -1.0;
    }
    if (t.degree == 2) h = &ops.hodge.Ht2;
  }
  if (!h) throw Error(ErrorKind::TypeMismatch, "no Hodge star defined on " + t.str());
  return sign * a.values.dot(h->mat * b.values);
}

TransposeReport check_transpose_duality(const DecOperators& ops) {
  TransposeReport r;
  SpMat d1t = ops.D1.mat.transpose();
  SpMat dt1t = ops.Dt1.mat.transpose();
  r.dt2_vs_d1 = max_abs(SpMat(ops.Dt2.mat + d1t));
  r.d2_vs_dt1 = max_abs(SpMat(ops.D2.mat - dt1t));
  return r;
}

}  // namespace trisk
