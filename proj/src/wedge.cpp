#include "trisk/wedge.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "trisk/error.hpp"

namespace trisk {

const char* to_string(RKind k) { return k == RKind::Metric ? "metric" : "combinatorial"; }
const char* to_string(TKind k) { return k == TKind::Metric ? "metric" : "combinatorial"; }
const char* to_string(QVariant v) {
  switch (v) {
    case QVariant::TE: return "TE";
    case QVariant::PE: return "PE";
    case QVariant::DBL: return "DBL";
    case QVariant::ACCUR: return "ACCUR";
  }
  return "?";
}

Cochain WedgeTensor::apply(const Cochain& a, const Cochain& b) const {
  if (!(a.type == a_type) || !(b.type == b_type))
    throw Error(ErrorKind::TypeMismatch, "wedge expects " + a_type.str() + " and " + b_type.str());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(out_size);
  for (const auto& en : entries) out[en.t] += en.w * a.values[en.a] * b.values[en.b];
  return {out_type, out};
}

Eigen::VectorXd WedgeTensor::adjoint_a(const Eigen::VectorXd& z, const Eigen::VectorXd& y, int a_size) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a_size);
  for (const auto& en : entries) out[en.a] += en.w * z[en.t] * y[en.b];
  return out;
}

Eigen::VectorXd WedgeTensor::adjoint_b(const Eigen::VectorXd& z, const Eigen::VectorXd& x, int b_size) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(b_size);
  for (const auto& en : entries) out[en.b] += en.w * z[en.t] * x[en.a];
  return out;
}

namespace {

RWedge finish_R(const MeshPair& m, RKind kind, std::vector<std::vector<double>> corner) {
  const auto& t = m.topo;
  RWedge R;
  R.kind = kind;
  R.corner = std::move(corner);
  std::vector<Eigen::Triplet<double>> tr;
  for (int v = 0; v < t.nv; ++v)
    for (size_t k = 0; k < t.vert_cells[v].size(); ++k) tr.emplace_back(t.vert_cells[v][k], v, R.corner[v][k]);
  R.mat.resize(t.nc, t.nv);
  R.mat.setFromTriplets(tr.begin(), tr.end());
  R.tensor.a_type = twisted(0);
  R.tensor.b_type = twisted(2);
  R.tensor.out_type = straight(2);
  R.tensor.out_size = t.nc;
  for (int c = 0; c < R.mat.outerSize(); ++c)
    for (SpMat::InnerIterator it(R.mat, c); it; ++it)
      R.tensor.entries.push_back({static_cast<int>(it.row()), static_cast<int>(it.row()), static_cast<int>(it.col()),
                                  it.value()});
  return R;
}

}  // namespace

RWedge build_R_metric(const MeshPair& m) {
  const auto& g = m.geom;
  if ((int)g.overlap.size() != m.topo.nv) throw Error(ErrorKind::MissingGeometry, "overlap areas are missing");
  std::vector<std::vector<double>> corner(m.topo.nv);
  for (int v = 0; v < m.topo.nv; ++v)
    for (double a : g.overlap[v]) corner[v].push_back(a / g.tcell_area[v]);
  return finish_R(m, RKind::Metric, std::move(corner));
}

RWedge build_R_combinatorial(const MeshPair& m) {
  std::vector<std::vector<double>> corner(m.topo.nv);
  for (int v = 0; v < m.topo.nv; ++v) {
    double k = static_cast<double>(m.topo.vert_cells[v].size());
    corner[v].assign(m.topo.vert_cells[v].size(), 1.0 / k);
  }
  return finish_R(m, RKind::Combinatorial, std::move(corner));
}

RWedge build_R(const MeshPair& m, RKind kind) {
  return kind == RKind::Metric ? build_R_metric(m) : build_R_combinatorial(m);
}

SpMat build_W_from_R(const MeshPair& m, const RWedge& R, const DecOperators& ops) {
  const auto& t = m.topo;
  std::vector<Eigen::Triplet<double>> tr;
  // Around each straight vertex (= twisted cell) walk the edge loop; in
  // outward-oriented variables the coefficient between edges k and l is the
  // sum of R over the cells passed going counterclockwise from k to l, minus 1/2.
  for (int v = 0; v < t.nv; ++v) {
    const auto& edges = t.vert_edges[v];
    int K = static_cast<int>(edges.size());
    std::vector<double> sigma(K);
    for (int k = 0; k < K; ++k) {
      int e = edges[k];
      int s = t.edge_verts[e][0] == v ? 0 : 1;
      sigma[k] = -t.t_ve[e][s];
    }
    for (int k = 0; k < K; ++k) {
      double S = 0;
      for (int d = 1; d < K; ++d) {
        S += R.corner[v][(k + d - 1) % K];
        int l = (k + d) % K;
        tr.emplace_back(edges[k], edges[l], sigma[k] * sigma[l] * (S - 0.5));
      }
    }
  }
  SpMat W(t.ne, t.ne);
  W.setFromTriplets(tr.begin(), tr.end());
  W.prune(0.0);

  double anti = max_abs(SpMat(W + SpMat(W.transpose())));
  double compat = max_abs(SpMat(R.mat * ops.Dt2.mat - ops.D2.mat * W));
  if (anti > 1e-13 || compat > 1e-13)
    throw Error(ErrorKind::ConstructionFailure, "W violates antisymmetry (" + std::to_string(anti) +
                                                    ") or R D2~ = D2 W (" + std::to_string(compat) + ")");
  return W;
}

Cochain apply_R_weighted(const RWedge& R, const Cochain& q, const Cochain& h) { return R.tensor.apply(q, h); }

// ---------------------------------------------------------------------------
// DBL tensor on the uniform quad lattice

namespace {

struct QuadLattice {
  int n;
  int edge(int i, int j, int tau) const { return 2 * (wrap(i) + n * wrap(j)) + tau; }
  int cell(int i, int j) const { return wrap(i) + n * wrap(j); }
  int wrap(int a) const { return ((a % n) + n) % n; }
  std::array<int, 3> edge_ij(int e) const { return {(e / 2) % n, (e / 2) / n, e % 2}; }
  std::array<int, 2> cell_ij(int c) const { return {c % n, c / n}; }
  int rel(int a) const {
    int d = wrap(a);
    return d > n / 2 ? d - n : d;
  }
};

// offsets of e' and c relative to e, plus both edge types
using DblKey = std::tuple<int, int, int, int, int, int>;

bool same_quad_topology(const MeshPair& m) {
  if (m.gen.kind != "quad" || m.gen.n < 2) return false;
  MeshPair ref = build_periodic_quad(m.gen.n, m.gen.spacing > 0 ? m.gen.spacing : 1.0);
  return ref.topo.edge_verts == m.topo.edge_verts && ref.topo.cell_edges == m.topo.cell_edges &&
         ref.topo.n_ec == m.topo.n_ec && ref.topo.t_ve == m.topo.t_ve;
}

}  // namespace

bool dbl_supported(const MeshPair& m, const RWedge& R, std::string* why) {
  auto say = [&](const char* s) {
    if (why) *why = s;
    return false;
  };
  if (!same_quad_topology(m)) return say("DBL needs the uniform periodic quad topology");
  for (const auto& cv : R.corner)
    for (double r : cv)
      if (std::abs(r - 0.25) > 1e-14) return say("DBL needs R equal to the combinatorial 1/4 weights");
  return true;
}

std::vector<WedgeTensor::Entry> build_dbl_tensor(const MeshPair& m, const RWedge& R) {
  std::string why;
  if (!dbl_supported(m, R, &why)) throw Error(ErrorKind::UnsupportedVariant, why);

  // Solve once on a reference lattice large enough that stencils do not wrap.
  const int N = 9;
  MeshPair ref = build_periodic_quad(N, 1.0);
  QuadLattice L{N};
  DecOperators ops = build_dec_operators(ref);
  RWedge Rr = build_R_combinatorial(ref);
  SpMat W = build_W_from_R(ref, Rr, ops);
  using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  RowMat Dt1 = ops.Dt1.mat;
  RowMat M = ops.D1.mat * SpMat(Rr.mat.transpose());  // D1 Rᵀ, ne x nc
  const auto& t = ref.topo;

  auto key_of = [&](int e, int ep, int c) {
    auto a = L.edge_ij(e), b = L.edge_ij(ep);
    auto cc = L.cell_ij(c);
    return DblKey{a[2], b[2], L.rel(b[0] - a[0]), L.rel(b[1] - a[1]), L.rel(cc[0] - a[0]), L.rel(cc[1] - a[1])};
  };

  // unknowns: for representative edges, partners sharing a vertex, cells
  // touching either edge
  std::map<DblKey, int> unk;
  std::vector<std::tuple<int, int, int>> unk_ids;
  const int ci = N / 2;
  std::vector<int> reps = {L.edge(ci, ci, 0), L.edge(ci, ci, 1)};
  std::map<int, std::vector<std::pair<int, std::vector<int>>>> stencil;
  auto cells_touching = [&](int e, std::set<int>& s) {
    for (int v : t.edge_verts[e])
      for (int c : t.vert_cells[v]) s.insert(c);
  };
  for (int e : reps) {
    std::set<int> partners;
    for (int v : t.edge_verts[e])
      for (int x : t.vert_edges[v])
        if (x != e) partners.insert(x);
    for (int ep : partners) {
      std::set<int> cs;
      cells_touching(e, cs);
      cells_touching(ep, cs);
      stencil[e].push_back({ep, std::vector<int>(cs.begin(), cs.end())});
      for (int c : cs) {
        DblKey k = key_of(e, ep, c);
        if (!unk.count(k)) {
          unk[k] = static_cast<int>(unk_ids.size());
          unk_ids.push_back({e, ep, c});
        }
      }
    }
  }
  const int nu = static_cast<int>(unk_ids.size());

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;

  // antisymmetry: Q[e,e',c] + Q[e',e,c] = 0 (partner translated to a representative)
  for (int u = 0; u < nu; ++u) {
    auto [e, ep, c] = unk_ids[u];
    auto pe = L.edge_ij(ep);
    auto ee = L.edge_ij(e);
    auto cc = L.cell_ij(c);
    int di = ci - pe[0], dj = ci - pe[1];
    int e2 = L.edge(ee[0] + di, ee[1] + dj, ee[2]);
    int ep2 = L.edge(ci, ci, pe[2]);
    int c2 = L.cell(cc[0] + di, cc[1] + dj);
    auto it = unk.find(key_of(ep2, e2, c2));
    if (it == unk.end()) throw Error(ErrorKind::ConstructionFailure, "DBL stencil is not symmetric");
    rows.push_back({{u, 1.0}, {it->second, 1.0}});
    rhs.push_back(0.0);
  }

  for (int e : reps) {
    // Q(1, ·) = W
    for (auto& [ep, cs] : stencil[e]) {
      std::vector<std::pair<int, double>> row;
      for (int c : cs) row.push_back({unk.at(key_of(e, ep, c)), 1.0});
      rows.push_back(row);
      rhs.push_back(W.coeff(e, ep));
    }
    // Q(q, D̄1 q) = ½ D1 Rᵀ q² as a quadratic form in q
    std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> quad;
    for (auto& [ep, cs] : stencil[e])
      for (int c : cs)
        for (RowMat::InnerIterator it(Dt1, ep); it; ++it) {
          int cp = static_cast<int>(it.col());
          auto key = std::minmax(c, cp);
          quad[{key.first, key.second}].push_back({unk.at(key_of(e, ep, c)), it.value()});
        }
    for (RowMat::InnerIterator it(M, e); it; ++it) {
      int c = static_cast<int>(it.col());
      quad[{c, c}];
    }
    for (auto& [pr, terms] : quad) {
      double target = pr.first == pr.second ? 0.5 * M.coeff(e, pr.first) : 0.0;
      rows.push_back(terms);
      rhs.push_back(target);
    }
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), nu);
  Eigen::VectorXd b(static_cast<int>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (auto [u, w] : rows[r]) A(r, u) += w;
    b[r] = rhs[r];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd x = cod.solve(b);
  double res = (A * x - b).lpNorm<Eigen::Infinity>();
  if (res > 1e-13)
    throw Error(ErrorKind::ConstructionFailure, "DBL constraint system has no solution (residual " +
                                                    std::to_string(res) + ")");

  // transplant onto the target mesh
  QuadLattice T{m.gen.n};
  std::map<std::tuple<int, int, int>, double> acc;
  for (int u = 0; u < nu; ++u) {
    if (std::abs(x[u]) < 1e-15) continue;
    auto [e, ep, c] = unk_ids[u];
    DblKey k = key_of(e, ep, c);
    auto [te, tep, di, dj, dci, dcj] = k;
    for (int j = 0; j < T.n; ++j)
      for (int i = 0; i < T.n; ++i) {
        int E = T.edge(i, j, te), EP = T.edge(i + di, j + dj, tep), C = T.cell(i + dci, j + dcj);
        acc[{E, EP, C}] += x[u];
      }
  }
  std::vector<WedgeTensor::Entry> out;
  for (auto& [k, w] : acc)
    if (w != 0.0) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), w});
  return out;
}

// ---------------------------------------------------------------------------

QOperator::QOperator(QVariant v, const MeshPair& m, const RWedge& R, SpMat W)
    : variant_(v), W_(std::move(W)), edge_cells_(m.topo.edge_cells) {
  if (v == QVariant::DBL) dbl_ = build_dbl_tensor(m, R);
}

Eigen::VectorXd QOperator::edge_average(const Eigen::VectorXd& q) const {
  Eigen::VectorXd qe(static_cast<int>(edge_cells_.size()));
  for (size_t e = 0; e < edge_cells_.size(); ++e) qe[e] = 0.5 * (q[edge_cells_[e][0]] + q[edge_cells_[e][1]]);
  return qe;
}

Eigen::VectorXd QOperator::apply(const Eigen::VectorXd& q, const Eigen::VectorXd& x) const {
  switch (variant_) {
    case QVariant::TE: {
      Eigen::VectorXd qe = edge_average(q);
      return 0.5 * (qe.cwiseProduct(W_ * x) + W_ * qe.cwiseProduct(x));
    }
    case QVariant::PE: {
      Eigen::VectorXd qe = edge_average(q);
      return qe.cwiseProduct(W_ * x);
    }
    case QVariant::ACCUR: {
      Eigen::VectorXd qe = edge_average(q);
      return W_ * qe.cwiseProduct(x);
    }
    case QVariant::DBL: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
      for (const auto& en : dbl_) out[en.t] += en.w * q[en.b] * x[en.a];
      return out;
    }
  }
  return {};
}

Cochain QOperator::apply(const Cochain& q, const Cochain& x) const {
  if (!(q.type == twisted(0)) || !(x.type == twisted(1, Flavor::Flux)))
    throw Error(ErrorKind::TypeMismatch, "Q expects a twisted 0-form and a twisted flux, got " + q.type.str() +
                                             " and " + x.type.str());
  return {straight(1, Flavor::Circulation), apply(q.values, x.values)};
}

SpMat QOperator::matrix(const Eigen::VectorXd& q) const {
  if (variant_ == QVariant::DBL) {
    std::vector<Eigen::Triplet<double>> tr;
    for (const auto& en : dbl_) tr.emplace_back(en.t, en.a, en.w * q[en.b]);
    SpMat Q(W_.rows(), W_.cols());
    Q.setFromTriplets(tr.begin(), tr.end());
    return Q;
  }
  Eigen::VectorXd qe = edge_average(q);
  SpMat D(qe.size(), qe.size());
  D.setIdentity();
  D.diagonal() = qe;
  switch (variant_) {
    case QVariant::TE: return 0.5 * (D * W_ + W_ * D);
    case QVariant::PE: return D * W_;
    default: return W_ * D;
  }
}

// ---------------------------------------------------------------------------

TWedge build_T(const MeshPair& m, TKind kind) {
  TWedge T;
  T.kind = kind;
  T.edge_verts = m.topo.edge_verts;
  T.nv = m.topo.nv;
  T.coef.resize(m.topo.ne);
  for (int e = 0; e < m.topo.ne; ++e) {
    if (kind == TKind::Combinatorial) {
      T.coef[e] = {0.5, 0.5};
    } else {
      const auto& g = m.geom;
      if ((int)g.ext_area.size() != m.topo.ne) throw Error(ErrorKind::MissingGeometry, "extended edge areas missing");
      T.coef[e] = {g.ext_overlap[e][0] / g.ext_area[e], g.ext_overlap[e][1] / g.ext_area[e]};
    }
  }
  return T;
}

Cochain ke_wedge(const TWedge& T, const Cochain& u, const Cochain& ut) {
  if (!(u.type == straight(1, Flavor::Circulation)) || !(ut.type == twisted(1, Flavor::Flux)))
    throw Error(ErrorKind::TypeMismatch, "ke_wedge expects straight circulation and twisted flux");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(T.nv);
  for (size_t e = 0; e < T.coef.size(); ++e) {
    double p = u.values[e] * ut.values[e];
    for (int s = 0; s < 2; ++s) out[T.edge_verts[e][s]] += T.coef[e][s] * p;
  }
  return {twisted(2), out};
}

namespace {
Eigen::VectorXd massflux(const TWedge& T, const Eigen::VectorXd& h0, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  for (size_t e = 0; e < T.coef.size(); ++e)
    out[e] = (T.coef[e][0] * h0[T.edge_verts[e][0]] + T.coef[e][1] * h0[T.edge_verts[e][1]]) * x[e];
  return out;
}
}  // namespace

Cochain massflux_adjoint_straight(const TWedge& T, const Cochain& h0, const Cochain& u) {
  if (!(h0.type == straight(0)) || !(u.type == straight(1, Flavor::Circulation)))
    throw Error(ErrorKind::TypeMismatch, "massflux_adjoint_straight expects straight 0-form and circulation");
  return {straight(1, Flavor::Circulation), massflux(T, h0.values, u.values)};
}

Cochain massflux_adjoint_twisted(const TWedge& T, const Cochain& h0, const Cochain& ut) {
  if (!(h0.type == straight(0)) || !(ut.type == twisted(1, Flavor::Flux)))
    throw Error(ErrorKind::TypeMismatch, "massflux_adjoint_twisted expects straight 0-form and twisted flux");
  return {twisted(1, Flavor::Flux), massflux(T, h0.values, ut.values)};
}

}  // namespace trisk
