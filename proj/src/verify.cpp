#include "trisk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "trisk/error.hpp"

namespace trisk {

namespace {

struct Rng {
  std::mt19937_64 gen;
  std::uniform_real_distribution<double> U{-1.0, 1.0};
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  Eigen::VectorXd vec(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = U(gen);
    return v;
  }
};

double inf(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

CheckResult check(const std::string& group, const std::string& name, double value, double tol,
                  const std::string& note = {}) {
  return {group, name, value, tol, value <= tol, false, note};
}

CheckResult diag(const std::string& group, const std::string& name, double value, const std::string& note = {}) {
  return {group, name, value, 0.0, true, true, note};
}

SpMat identity(int n, double s) {
  SpMat I(n, n);
  I.setIdentity();
  return s * I;
}

std::vector<SchemeConfig> available_schemes(const MeshPair& m) {
  std::vector<SchemeConfig> out;
  for (const auto& name : preset_names()) {
    SchemeConfig s = scheme_preset(name);
    if (s.q == QVariant::DBL && !dbl_supported(m, build_R(m, s.r))) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<QVariant> available_variants(const MeshPair& m, const RWedge& R) {
  std::vector<QVariant> v = {QVariant::TE, QVariant::PE, QVariant::ACCUR};
  if (dbl_supported(m, R)) v.push_back(QVariant::DBL);
  return v;
}

}  // namespace

Checks verify_operators(const MeshPair& m, const VerifyOptions& o) {
  const std::string G = "dec_ops";
  Checks out;
  DecOperators ops = build_dec_operators(m);
  const double tol = 1e-13;
  out.push_back(check(G, "D2 D1 = 0", max_abs(SpMat(ops.D2.mat * ops.D1.mat)), tol));
  out.push_back(check(G, "D~2 D~1 = 0", max_abs(SpMat(ops.Dt2.mat * ops.Dt1.mat)), tol));
  TransposeReport tr = check_transpose_duality(ops);
  out.push_back(check(G, "D~2 = -D1^T", tr.dt2_vs_d1, tol));
  out.push_back(check(G, "D2 = D~1^T", tr.d2_vs_dt1, tol));
  out.push_back(check(G, "D1 const = 0", inf(ops.D1.mat * Eigen::VectorXd::Ones(m.topo.nv)), tol));
  out.push_back(check(G, "D~1 const = 0", inf(ops.Dt1.mat * Eigen::VectorXd::Ones(m.topo.ntv())), tol));

  Rng rng(o.seed);
  double stokes = 0, stokes_t = 0, ibp = 0;
  for (int k = 0; k < o.samples; ++k) {
    Eigen::VectorXd x = rng.vec(m.topo.ne), y = rng.vec(m.topo.ne), a = rng.vec(m.topo.nv);
    stokes = std::max(stokes, std::abs(stable_sum(ops.D2.mat * x)) / x.cwiseAbs().sum());
    stokes_t = std::max(stokes_t, std::abs(stable_sum(ops.Dt2.mat * y)) / y.cwiseAbs().sum());
    Cochain da = ops.D1.apply(Cochain(straight(0), a));
    Cochain yt(twisted(1, Flavor::Flux), y);
    double lhs = topological_pairing(da, yt), rhs = topological_pairing(Cochain(straight(0), a), ops.Dt2.apply(yt));
    ibp = std::max(ibp, std::abs(lhs + rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
  out.push_back(check(G, "sum D2 x = 0 (relative)", stokes, tol));
  out.push_back(check(G, "sum D~2 y = 0 (relative)", stokes_t, tol));
  out.push_back(check(G, "<<D1 a, y>> = -<<a, D~2 y>>", ibp, tol));

  HodgeSet h = ops.hodge;
  InverseHodges iv = ops.inv;
  out.push_back(check(G, "H~2 H0 = I", max_abs(SpMat(h.Ht2.mat * iv.H0.mat - identity(m.topo.nv, 1))), tol));
  out.push_back(check(G, "H0 H~2 = I", max_abs(SpMat(iv.H0.mat * h.Ht2.mat - identity(m.topo.nv, 1))), tol));
  out.push_back(check(G, "H~1 H1 = -I", max_abs(SpMat(iv.Ht1.mat * h.H1.mat - identity(m.topo.ne, -1))), tol));
  out.push_back(check(G, "H1 H~1 = -I", max_abs(SpMat(h.H1.mat * iv.Ht1.mat - identity(m.topo.ne, -1))), tol));
  out.push_back(check(G, "H~0 H2 = I", max_abs(SpMat(iv.Ht0.mat * h.H2.mat - identity(m.topo.nc, 1))), tol));
  out.push_back(check(G, "H2 H~0 = I", max_abs(SpMat(h.H2.mat * iv.Ht0.mat - identity(m.topo.nc, 1))), tol));
  return out;
}

Checks verify_wedges(const MeshPair& m, const VerifyOptions& o) {
  const std::string G = "wedge";
  const double tol = 1e-13;
  Checks out;
  DecOperators ops = build_dec_operators(m);
  for (RKind rk : {RKind::Metric, RKind::Combinatorial}) {
    const std::string tag = std::string(" [") + to_string(rk) + " R]";
    RWedge R = build_R(m, rk);
    SpMat W = build_W_from_R(m, R, ops);
    Eigen::VectorXd colsum = Eigen::RowVectorXd::Ones(m.topo.nc) * R.mat;
    out.push_back(check(G, "R partition of unity" + tag, inf(colsum - Eigen::VectorXd::Ones(m.topo.nv)), tol));
    out.push_back(check(G, "W = -W^T" + tag, max_abs(SpMat(W + SpMat(W.transpose()))), tol));
    out.push_back(check(G, "R D~2 = D2 W" + tag, max_abs(SpMat(R.mat * ops.Dt2.mat - ops.D2.mat * W)), tol));
    out.push_back(
        check(G, "W D~1 = D1 R^T" + tag, max_abs(SpMat(W * ops.Dt1.mat - ops.D1.mat * SpMat(R.mat.transpose()))), tol));

    SpMat M = ops.D1.mat * SpMat(R.mat.transpose());
    for (QVariant v : available_variants(m, R)) {
      QOperator Q(v, m, R, W);
      const std::string qt = std::string(" Q^") + to_string(v) + tag;
      out.push_back(check(G, "Q(1,.) = W" + qt, max_abs(SpMat(Q.matrix(Eigen::VectorXd::Ones(m.topo.nc)) - W)), tol));
      Rng rng(o.seed);
      double anti = 0, pens_adj = 0, pens_lit = 0;
      for (int k = 0; k < o.samples; ++k) {
        Eigen::VectorXd q = rng.vec(m.topo.nc);
        SpMat Qm = Q.matrix(q);
        anti = std::max(anti, max_abs(SpMat(Qm + SpMat(Qm.transpose()))));
        Eigen::VectorXd g = ops.Dt1.mat * q, half = 0.5 * (M * q.cwiseAbs2());
        pens_lit = std::max(pens_lit, inf(Qm * g - half));
        pens_adj = std::max(pens_adj, inf(Eigen::VectorXd(Qm.transpose() * g) + half));
      }
      if (v == QVariant::TE || v == QVariant::DBL)
        out.push_back(check(G, "Q antisymmetry" + qt, anti, tol));
      else
        out.push_back(diag(G, "Q antisymmetry" + qt, anti));
      if (v == QVariant::PE) {
        out.push_back(check(G, "enstrophy rule (adjoint form)" + qt, pens_adj, tol));
        out.push_back(diag(G, "enstrophy rule (literal form)" + qt, pens_lit));
      } else if (v == QVariant::DBL) {
        out.push_back(check(G, "enstrophy rule" + qt, pens_lit, tol));
      } else {
        out.push_back(diag(G, "enstrophy rule (literal form)" + qt, pens_lit));
      }
    }
  }
  for (TKind tk : {TKind::Metric, TKind::Combinatorial}) {
    TWedge T = build_T(m, tk);
    double worst = 0;
    for (const auto& c : T.coef) worst = std::max(worst, std::abs(c[0] + c[1] - 1.0));
    out.push_back(check(G, std::string("T partition of unity [") + to_string(tk) + " T]", worst, tol));
  }
  return out;
}

namespace {

struct RandomCase {
  ModelState s;
  PhysicsParams p;
};

RandomCase random_case(const MeshPair& m, const Model& md, Rng& rng) {
  Eigen::VectorXd len = Eigen::Map<const Eigen::VectorXd>(m.geom.edge_len.data(), m.topo.ne);
  Eigen::VectorXd tarea = Eigen::Map<const Eigen::VectorXd>(m.geom.tcell_area.data(), m.topo.nv);
  Eigen::VectorXd area = Eigen::Map<const Eigen::VectorXd>(m.geom.cell_area.data(), m.topo.nc);
  RandomCase rc;
  rc.s.u = Cochain(straight(1, Flavor::Circulation), rng.vec(m.topo.ne).cwiseProduct(len));
  Eigen::VectorXd hp = (Eigen::VectorXd::Ones(m.topo.nv) + 0.3 * rng.vec(m.topo.nv)).cwiseProduct(tarea);
  rc.s.h = Cochain(twisted(2), hp);
  Eigen::VectorXd f = rng.vec(m.topo.nc).cwiseProduct(area);
  Eigen::VectorXd hs = 0.1 * rng.vec(m.topo.nv).cwiseProduct(tarea);
  rc.p = make_physics(md.ops, 1.0, Cochain(straight(2), f), Cochain(twisted(2), hs));
  return rc;
}

}  // namespace

Checks verify_rates(const MeshPair& m, const VerifyOptions& o) {
  const std::string G = "swe_core";
  Checks out;
  for (const auto& sc : available_schemes(m)) {
    Model md = build_model(m, sc);
    Rng rng(o.seed);
    double wM = 0, wC = 0, wH = 0, wPE = 0, wVort = 0;
    for (int k = 0; k < o.samples; ++k) {
      RandomCase rc = random_case(m, md, rng);
      Tendencies t = tendencies(md, rc.s, rc.p);
      InvariantRates r = invariant_rates(md, rc.s, rc.p, t);
      Diagnostics d = diagnostics(md, rc.s, rc.p);
      wM = std::max(wM, std::abs(r.dM) / r.mass_scale);
      wC = std::max(wC, std::abs(r.dC) / r.circ_scale);
      wH = std::max(wH, std::abs(r.dH) / std::abs(d.energy));
      wPE = std::max(wPE, std::abs(r.dPE) / std::abs(d.potential_enstrophy));
      // no spurious vorticity: D2 du = -D2 Q(q, F)
      FunctionalDerivatives fd = functional_derivatives(md, rc.s, rc.p);
      Cochain q = diagnose_pv(md, rc.s, rc.p);
      Eigen::VectorXd qf = md.Q.apply(q.values, fd.F.values);
      Eigen::VectorXd lhs = md.ops.D2.mat * t.du.values + md.ops.D2.mat * qf;
      double scale = inf(md.ops.D1.mat * fd.B.values) + inf(qf);
      wVort = std::max(wVort, inf(lhs) / scale);
    }
    const std::string tag = " [" + sc.preset + "]";
    out.push_back(check(G, "dM/dt = 0" + tag, wM, 1e-14));
    out.push_back(check(G, "dC/dt = 0" + tag, wC, 1e-14));
    out.push_back(check(G, "no spurious vorticity" + tag, wVort, 1e-14));
    if (sc.q == QVariant::TE || sc.q == QVariant::DBL)
      out.push_back(check(G, "dH/dt = 0" + tag, wH, 1e-12));
    else
      out.push_back(diag(G, "dH/dt (not conserved)" + tag, wH));
    if (sc.q == QVariant::PE || sc.q == QVariant::DBL)
      out.push_back(check(G, "dPE/dt = 0" + tag, wPE, 1e-12));
    else
      out.push_back(diag(G, "dPE/dt (not conserved)" + tag, wPE));
  }
  return out;
}

Checks verify_uniform_pv(const MeshPair& m, const VerifyOptions& o, int steps) {
  const std::string G = "swe_core";
  Checks out;
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  RunConfig cfg;
  cfg.g = 1.0;
  cfg.coriolis.f0 = 1.0;
  cfg.ic.preset = "uniform-pv";
  cfg.ic.H0 = 1.0;
  cfg.ic.amplitude = 0.1;
  cfg.ic.width = 0.5;
  cfg.ic.q0 = 1.0;
  PhysicsParams p = make_physics(md, cfg);
  InitialCondition ic = initial_condition(cfg.ic, md, p);
  p = make_physics(md.ops, p.g, *ic.f2, p.hs2);

  // same-step identity: eta rate via momentum equals q0 times the mass-route rate
  Tendencies t = tendencies(md, ic.state, p);
  Eigen::VectorXd deta = md.ops.D2.mat * t.du.values;
  Eigen::VectorXd dmass = cfg.ic.q0 * (md.R.mat * t.dh.values);
  out.push_back(check(G, "PV compatibility (single step)", inf(deta - dmass), 1e-13));

  double dx = *std::min_element(m.geom.edge_len.begin(), m.geom.edge_len.end());
  IntegratorConfig ig;
  ig.dt = 0.3 * dx / std::sqrt(cfg.g * cfg.ic.H0);
  double worst = 0;
  RunCallbacks cb;
  cb.on_output = [&](int, const ModelState& s) {
    Cochain q = diagnose_pv(md, s, p);
    worst = std::max(worst, inf(q.values - Eigen::VectorXd::Constant(q.values.size(), cfg.ic.q0)));
  };
  run(ic.state, ig, steps, [&](const ModelState& s) { return tendencies(md, s, p); }, cb);
  out.push_back(check(G, "uniform PV stays uniform (" + std::to_string(steps) + " rk4 steps)", worst, 1e-11));
  (void)o;
  return out;
}

Checks verify_geostrophic(const MeshPair& m, const VerifyOptions& o, int steps) {
  const std::string G = "swe_core";
  Checks out;
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  RunConfig cfg;
  cfg.g = 1.0;
  cfg.coriolis.f0 = 1.0;
  cfg.ic.preset = "geostrophic-balance";
  cfg.ic.H0 = 1.0;
  cfg.ic.amplitude = 0.01;
  cfg.ic.seed = o.seed;
  PhysicsParams p = make_physics(md, cfg);
  ModelState s0 = initial_condition(cfg.ic, md, p).state;
  const double H0 = cfg.ic.H0;

  Tendencies t = linearized_tendencies(md, s0, p, H0);
  Eigen::VectorXd F = H0 * (md.ops.hodge.H1.mat * s0.u.values);
  Eigen::VectorXd coriolis = md.Q.apply(p.ft0.values / H0, F);
  Eigen::VectorXd grad = md.ops.D1.mat * (p.g * (md.ops.hodge.Ht2.mat * s0.h.values));
  double rel_u = inf(t.du.values) / std::max(inf(coriolis), inf(grad));
  double rel_h = inf(t.dh.values) / inf(F);
  out.push_back(check(G, "geostrophic mode: du/dt = 0 (relative)", rel_u, 1e-12));
  out.push_back(check(G, "geostrophic mode: dh/dt = 0 (relative)", rel_h, 1e-12));

  double dx = *std::min_element(m.geom.edge_len.begin(), m.geom.edge_len.end());
  IntegratorConfig ig;
  ig.dt = 0.3 * dx / std::sqrt(cfg.g * H0);
  Trajectory tr = run(s0, ig, steps, [&](const ModelState& s) { return linearized_tendencies(md, s, p, H0); });
  Eigen::VectorXd area = Eigen::Map<const Eigen::VectorXd>(m.geom.tcell_area.data(), m.topo.nv);
  Eigen::VectorXd pert0 = s0.h.values - H0 * area;
  double drift_u = inf(tr.final_state.u.values - s0.u.values) / inf(s0.u.values);
  double drift_h = inf(tr.final_state.h.values - s0.h.values) / inf(pert0);
  out.push_back(check(G, "geostrophic mode: " + std::to_string(steps) + "-step drift (relative)",
                      std::max(drift_u, drift_h), 1e-10));
  return out;
}

Checks verify_flux_branches(const MeshPair& m, const VerifyOptions& o) {
  const std::string G = "swe_core";
  Checks out;
  DecOperators ops = build_dec_operators(m);
  for (TKind tk : {TKind::Metric, TKind::Combinatorial}) {
    TWedge T = build_T(m, tk);
    Rng rng(o.seed);
    double worst = 0;
    for (int k = 0; k < o.samples; ++k) {
      Cochain h0(straight(0), Eigen::VectorXd::Ones(m.topo.nv) + 0.3 * rng.vec(m.topo.nv));
      Cochain u(straight(1, Flavor::Circulation), rng.vec(m.topo.ne));
      Cochain a = massflux_adjoint_twisted(T, h0, ops.hodge.H1.apply(u));
      Cochain b = ops.hodge.H1.apply(massflux_adjoint_straight(T, h0, u));
      worst = std::max(worst, inf(a.values - b.values) / std::max(inf(a.values), 1e-300));
    }
    out.push_back(check(G, std::string("mass-flux branches coincide [") + to_string(tk) + " T]", worst, 1e-13));
  }
  return out;
}

Checks verify_leibniz(const MeshPair& m, const VerifyOptions& o) {
  const std::string G = "leibniz";
  Checks out;
  DecOperators ops = build_dec_operators(m);
  for (RKind rk : {RKind::Combinatorial, RKind::Metric}) {
    RWedge R = build_R(m, rk);
    SpMat W = build_W_from_R(m, R, ops);
    SpMat M = ops.D1.mat * SpMat(R.mat.transpose());
    for (QVariant v : available_variants(m, R)) {
      QOperator Q(v, m, R, W);
      const std::string tag = std::string(" Q^") + to_string(v) + " [" + to_string(rk) + " R]";
      Rng rng(o.seed);
      double full = 0, part1 = 0, part2 = 0;
      for (int k = 0; k < o.samples; ++k) {
        Eigen::VectorXd x = rng.vec(m.topo.nc), y = rng.vec(m.topo.nc), z = rng.vec(m.topo.ne);
        Eigen::VectorXd lhs = Q.apply(x, ops.Dt1.mat * y) + Q.apply(y, ops.Dt1.mat * x);
        full = std::max(full, inf(lhs - M * x.cwiseProduct(y)));
        Eigen::VectorXd one = Eigen::VectorXd::Ones(m.topo.nc);
        part1 = std::max(part1, inf(ops.D2.mat * Q.apply(one, z) - R.mat * (ops.Dt2.mat * z)));
        part2 = std::max(part2, inf(Q.apply(x, ops.Dt1.mat * x) - 0.5 * (M * x.cwiseAbs2())));
      }
      if (v == QVariant::DBL) {
        out.push_back(check(G, "full Leibniz" + tag, full, 1e-12));
        out.push_back(check(G, "partial rule I (PV compatibility)" + tag, part1, 1e-13));
        out.push_back(check(G, "partial rule II (enstrophy)" + tag, part2, 1e-13));
      } else {
        out.push_back(diag(G, "full Leibniz residual" + tag, full));
        out.push_back(check(G, "partial rule I (PV compatibility)" + tag, part1, 1e-13));
        out.push_back(diag(G, "partial rule II residual" + tag, part2));
      }
    }
  }
  return out;
}

Checks verify_all(const MeshPair& m, const VerifyOptions& o) {
  Checks all;
  auto add = [&](Checks c) { all.insert(all.end(), c.begin(), c.end()); };
  add(verify_operators(m, o));
  add(verify_wedges(m, o));
  add(verify_rates(m, o));
  add(verify_flux_branches(m, o));
  add(verify_leibniz(m, o));
  if (o.time_tests) {
    add(verify_geostrophic(m, o));
    add(verify_uniform_pv(m, o));
  }
  return all;
}

EnergyStudy energy_time_study(const MeshPair& m, double dt, int steps, double midpoint_tol) {
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  RunConfig cfg;
  cfg.g = 1.0;
  cfg.coriolis.f0 = 0.25;
  cfg.ic.preset = "vortex-pair";
  cfg.ic.H0 = 1.0;
  cfg.ic.amplitude = 0.4;
  cfg.ic.width = 0.4;
  cfg.ic.center = {0.35, 0.5};
  cfg.ic.center2 = {0.65, 0.5};
  PhysicsParams p = make_physics(md, cfg);
  ModelState s0 = initial_condition(cfg.ic, md, p).state;
  TendencyFn rhs = [&](const ModelState& s) { return tendencies(md, s, p); };
  double E0 = hamiltonian(md, s0, p);
  auto drift = [&](const ModelState& s) { return std::abs(hamiltonian(md, s, p) - E0) / std::abs(E0); };

  EnergyStudy st;
  for (int r = 0; r < 3; ++r) {
    IntegratorConfig ig;
    ig.dt = dt / (1 << r);
    st.dts.push_back(ig.dt);
    st.drifts.push_back(drift(run(s0, ig, steps << r, rhs).final_state));

    ig.kind = IntegratorKind::ImplicitMidpoint;
    ig.tol = midpoint_tol;
    RunCallbacks cb;
    cb.on_output = [&](int n, const ModelState&) {
      if (n > 0) st.midpoint_max_iterations = std::max(st.midpoint_max_iterations, last_midpoint_iterations());
    };
    st.midpoint_drifts.push_back(drift(run(s0, ig, steps << r, rhs, cb).final_state));
  }
  // least-squares slope of log(drift) against log(dt)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int r = 0; r < 3; ++r) {
    double x = std::log2(st.dts[r]), y = std::log2(st.drifts[r]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  st.order = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  return st;
}

bool all_pass(const Checks& c) {
  for (const auto& x : c)
    if (!x.pass) return false;
  return true;
}

void print_checks(std::ostream& os, const std::string& label, const Checks& c) {
  for (const auto& x : c) {
    os << (x.diagnostic ? "  info " : x.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(10) << label << " "
       << std::setw(9) << x.group << " " << std::setw(58) << x.name << std::right << std::scientific
       << std::setprecision(2) << x.value;
    if (!x.diagnostic) os << " <= " << x.tol;
    if (!x.note.empty()) os << "  (" << x.note << ")";
    os << std::defaultfloat << "\n";
  }
}

}  // namespace trisk
