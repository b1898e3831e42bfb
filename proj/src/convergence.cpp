#include "trisk/convergence.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "trisk/error.hpp"
#include "trisk/harness.hpp"

namespace trisk {

namespace {

/// Sum of plane waves a cos(m theta_1 + n theta_2 + p) in lattice phases.
struct TrigField {
  struct Mode {
    int m, n;
    double a, p;
  };
  LatticeFrame frame;
  std::vector<Mode> modes;

  Vec2 k(const Mode& md) const { return md.m * frame.b1 + md.n * frame.b2; }
  double arg(const Mode& md, const Vec2& x) const { return k(md).dot(x) + md.p; }
  double value(const Vec2& x) const {
    double s = 0;
    for (const auto& md : modes) s += md.a * std::cos(arg(md, x));
    return s;
  }
  Vec2 grad(const Vec2& x) const {
    Vec2 g = Vec2::Zero();
    for (const auto& md : modes) g -= md.a * std::sin(arg(md, x)) * k(md);
    return g;
  }
  double lap(const Vec2& x) const {
    double s = 0;
    for (const auto& md : modes) s -= md.a * std::cos(arg(md, x)) * k(md).squaredNorm();
    return s;
  }
  /// Exact integral over a counterclockwise polygon via the divergence theorem.
  double integrate(const std::vector<Vec2>& poly) const {
    double total = 0;
    for (const auto& md : modes) {
      Vec2 kk = k(md);
      double k2 = kk.squaredNorm();
      if (k2 == 0) {
        total += md.a * std::cos(md.p) * polygon_area(poly);
        continue;
      }
      double s = 0;
      for (size_t i = 0; i < poly.size(); ++i) {
        Vec2 a = poly[i], d = poly[(i + 1) % poly.size()] - a;
        double L = d.norm();
        Vec2 t = d / L, n(t[1], -t[0]);
        double alpha = kk.dot(a) + md.p, beta = kk.dot(t);
        double line = std::abs(beta * L) < 1e-8 ? L * std::sin(alpha + 0.5 * beta * L)
                                                : (std::cos(alpha) - std::cos(alpha + beta * L)) / beta;
        s += kk.dot(n) / k2 * line;
      }
      total += md.a * s;
    }
    return total;
  }
};

TrigField potential(const MeshPair& m) {
  return {LatticeFrame(m.geom), {{1, 0, 1.0, 0.3}, {1, 1, 0.5, 1.1}, {0, 2, 0.3, -0.4}}};
}

TrigField stream(const MeshPair& m) {
  return {LatticeFrame(m.geom), {{1, -1, 0.7, 0.2}, {2, 1, 0.2, 0.5}, {0, 1, 0.4, 0.9}}};
}

struct ErrorNorms {
  double l2, linf;
};

ErrorNorms norms(const Eigen::VectorXd& err, const Eigen::VectorXd& w) {
  return {std::sqrt(err.cwiseAbs2().dot(w) / w.sum()), err.cwiseAbs().maxCoeff()};
}

Eigen::VectorXd vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

ErrorNorms measure(const std::string& op, const MeshPair& m) {
  const auto& t = m.topo;
  const auto& g = m.geom;
  DecOperators ops = build_dec_operators(m);
  TrigField phi = potential(m), chi = stream(m);
  VectorField X = [&](const Vec2& x) -> Vec2 {
    Vec2 gc = chi.grad(x);
    return phi.grad(x) + Vec2(-gc[1], gc[0]);
  };
  Eigen::VectorXd edge_w = vec(g.edge_len).cwiseProduct(vec(g.tedge_len));

  if (op == "div") {
    Cochain flux = reduce_vector(m, X, Flavor::Flux, Grid::Twisted);
    Eigen::VectorXd d = (ops.Dt2.mat * flux.values).cwiseQuotient(vec(g.tcell_area));
    Eigen::VectorXd err(t.nv);
    for (int v = 0; v < t.nv; ++v) err[v] = d[v] - phi.lap(g.vpos[v]);
    return norms(err, vec(g.tcell_area));
  }
  if (op == "curl") {
    Cochain u = reduce_vector(m, X, Flavor::Circulation, Grid::Straight);
    Eigen::VectorXd c = (ops.D2.mat * u.values).cwiseQuotient(vec(g.cell_area));
    Eigen::VectorXd err(t.nc);
    for (int i = 0; i < t.nc; ++i) err[i] = c[i] - chi.lap(g.tvpos[i]);
    return norms(err, vec(g.cell_area));
  }
  if (op == "grad") {
    Eigen::VectorXd p0(t.nv);
    for (int v = 0; v < t.nv; ++v) p0[v] = phi.value(g.vpos[v]);
    Eigen::VectorXd d = (ops.D1.mat * p0).cwiseQuotient(vec(g.edge_len));
    Eigen::VectorXd err(t.ne);
    for (int e = 0; e < t.ne; ++e) {
      Vec2 a = g.vpos[t.edge_verts[e][0]], dv = g.edge_vector(t, e);
      err[e] = d[e] - phi.grad(a + 0.5 * dv).dot(dv.normalized());
    }
    return norms(err, edge_w);
  }
  if (op == "perp") {
    Cochain u = reduce_vector(m, X, Flavor::Circulation, Grid::Straight);
    Eigen::VectorXd f = (ops.hodge.H1.mat * u.values).cwiseQuotient(vec(g.tedge_len));
    Eigen::VectorXd err(t.ne);
    for (int e = 0; e < t.ne; ++e) {
      auto p = tedge_endpoints(m, e);
      Vec2 tt = (p[1] - p[0]).normalized();
      err[e] = f[e] - X(0.5 * (p[0] + p[1])).dot(Vec2(tt[1], -tt[0]));
    }
    return norms(err, edge_w);
  }
  if (op == "R") {
    Cochain h = reduce_scalar(m, [&](const Vec2& x) { return phi.value(x); }, 2, Grid::Twisted);
    RWedge R = build_R(m, RKind::Metric);
    Eigen::VectorXd r = (R.mat * h.values).cwiseQuotient(vec(g.cell_area));
    Eigen::VectorXd err(t.nc);
    for (int i = 0; i < t.nc; ++i) err[i] = r[i] - phi.value(g.tvpos[i]);
    return norms(err, vec(g.cell_area));
  }
  if (op == "KE") {
    Cochain u = reduce_vector(m, X, Flavor::Circulation, Grid::Straight);
    TWedge T = build_T(m, TKind::Metric);
    Cochain K = ke_wedge(T, u, ops.hodge.H1.apply(u));
    Eigen::VectorXd k = K.values.cwiseQuotient(vec(g.tcell_area));
    Eigen::VectorXd err(t.nv);
    for (int v = 0; v < t.nv; ++v) err[v] = k[v] - X(g.vpos[v]).squaredNorm();
    return norms(err, vec(g.tcell_area));
  }
  if (op == "quadrature") {
    Cochain c = reduce_scalar(m, [&](const Vec2& x) { return phi.value(x); }, 2, Grid::Straight);
    Eigen::VectorXd err(t.nc);
    for (int i = 0; i < t.nc; ++i) err[i] = (c.values[i] - phi.integrate(cell_polygon(m, i))) / g.cell_area[i];
    return norms(err, vec(g.cell_area));
  }
  throw Error(ErrorKind::InvalidParameter, "unknown operator '" + op + "'");
}

}  // namespace

const std::vector<std::string>& convergence_operators() {
  static const std::vector<std::string> ops = {"div", "curl", "grad", "perp", "R", "KE", "quadrature"};
  return ops;
}

MeshPair family_mesh(const std::string& family, int n) {
  if (family == "quad") return build_periodic_quad(n, 1.0 / n);
  if (family == "trihex") return build_periodic_trihex(n, 1.0 / n);
  throw Error(ErrorKind::InvalidParameter, "unknown mesh family '" + family + "' (quad | trihex)");
}

ConvergenceReport convergence_study(const std::string& op, const std::string& family, const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw Error(ErrorKind::InvalidParameter, "a convergence study needs at least two resolutions");
  ConvergenceReport rep{op, family, {}};
  for (int n : sizes) {
    MeshPair m = family_mesh(family, n);
    ErrorNorms e = measure(op, m);
    ConvergenceRow row{n, m.geom.edge_len[0], e.l2, e.linf, 0, 0};
    if (!rep.rows.empty()) {
      const auto& prev = rep.rows.back();
      double ratio = std::log(prev.h / row.h);
      row.order_l2 = std::log(prev.l2 / row.l2) / ratio;
      row.order_linf = std::log(prev.linf / row.linf) / ratio;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

void print_report(std::ostream& os, const ConvergenceReport& r) {
  os << r.op << " on " << r.family << "\n";
  os << "       N            h           L2     order_L2         Linf   order_Linf\n";
  for (const auto& row : r.rows) {
    os << std::setw(8) << row.n << std::scientific << std::setprecision(4) << std::setw(13) << row.h << std::setw(13)
       << row.l2 << std::fixed << std::setprecision(3) << std::setw(13) << row.order_l2 << std::scientific
       << std::setprecision(4) << std::setw(13) << row.linf << std::fixed << std::setprecision(3) << std::setw(13)
       << row.order_linf << std::defaultfloat << "\n";
  }
}

}  // namespace trisk
