#include <doctest.h>

#include <random>

#include "trisk/error.hpp"
#include "trisk/swe.hpp"

using namespace trisk;

namespace {

ModelState uniform_state(const MeshPair& m, double h_pt, Vec2 vel) {
  ModelState s;
  s.u = reduce_vector(m, [&](const Vec2&) { return vel; }, Flavor::Circulation, Grid::Straight);
  s.h = Cochain(twisted(2), Eigen::Map<const Eigen::VectorXd>(m.geom.tcell_area.data(), m.topo.nv) * h_pt);
  return s;
}

ModelState random_state(const MeshPair& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3), h(0.8, 1.2);
  ModelState s = uniform_state(m, 1.0, Vec2(0, 0));
  for (int e = 0; e < m.topo.ne; ++e) s.u.values[e] = u(rng) * m.geom.edge_len[e];
  for (int v = 0; v < m.topo.nv; ++v) s.h.values[v] = h(rng) * m.geom.tcell_area[v];
  return s;
}

}  // namespace

TEST_CASE("hamiltonian by hand") {
  MeshPair m = build_periodic_quad(2, 1.0);
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  PhysicsParams p = make_physics(m, md.ops, 10.0, 0.0);
  CHECK(hamiltonian(md, uniform_state(m, 2.0, Vec2(0, 0)), p) == doctest::Approx(80.0));
  CHECK(hamiltonian(md, uniform_state(m, 2.0, Vec2(1, 0)), p) == doctest::Approx(84.0));
  CHECK(hamiltonian(md, uniform_state(m, 0.0, Vec2(0, 0)), p) == 0.0);
  CHECK(diagnostics(md, uniform_state(m, 2.0, Vec2(0, 0)), p).mass == doctest::Approx(8.0));
}

TEST_CASE("functional derivatives") {
  MeshPair m = build_periodic_quad(3, 1.0);
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  PhysicsParams p = make_physics(m, md.ops, 2.0, 0.0);
  double H0 = 1.5;
  FunctionalDerivatives fd = functional_derivatives(md, uniform_state(m, H0, Vec2(1, 0)), p);
  Cochain ut = reduce_vector(m, [](const Vec2&) { return Vec2(1, 0); }, Flavor::Flux, Grid::Twisted);
  CHECK((fd.F.values - H0 * ut.values).cwiseAbs().maxCoeff() < 1e-14);

  FunctionalDerivatives rest = functional_derivatives(md, uniform_state(m, H0, Vec2(0, 0)), p);
  CHECK(rest.F.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(rest.B.values.minCoeff() == doctest::Approx(2.0 * H0));
  CHECK(rest.B.values.maxCoeff() == doctest::Approx(2.0 * H0));
}

TEST_CASE("potential vorticity") {
  MeshPair m = build_periodic_quad(4, 0.5);
  Model md = build_model(m, scheme_preset("trsk2010-pe"));
  double f0 = 0.7, H0 = 2.0;
  PhysicsParams p = make_physics(m, md.ops, 1.0, f0);
  Cochain q = diagnose_pv(md, uniform_state(m, H0, Vec2(0, 0)), p);
  for (int c = 0; c < m.topo.nc; ++c) CHECK(q.values[c] == doctest::Approx(f0 / H0));

  // irrotational flow without rotation has zero PV
  PhysicsParams p0 = make_physics(m, md.ops, 1.0, 0.0);
  ModelState s = uniform_state(m, H0, Vec2(0, 0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1, 1);
  Eigen::VectorXd phi(m.topo.nv);
  for (auto& x : phi) x = d(rng);
  s.u.values = md.ops.D1.mat * phi;
  CHECK(diagnose_pv(md, s, p0).values.cwiseAbs().maxCoeff() == 0.0);

  ModelState r = random_state(m, rng);
  Cochain q1 = diagnose_pv(md, r, p);
  r.h.values *= 2;
  CHECK((diagnose_pv(md, r, p).values - 0.5 * q1.values).cwiseAbs().maxCoeff() < 1e-14);

  r.h.values[3] = -10;
  try {
    diagnose_pv(md, r, p);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PvSingularity);
  }
}

TEST_CASE("rest state has zero tendencies") {
  MeshPair m = build_periodic_trihex(4, 1.0);
  for (const auto& name : {"trsk2010-te", "trsk2010-pe", "accur"}) {
    Model md = build_model(m, scheme_preset(name));
    PhysicsParams p = make_physics(m, md.ops, 9.8, 1e-4);
    Tendencies t = tendencies(md, uniform_state(m, 3.0, Vec2(0, 0)), p);
    CHECK(t.dh.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.du.values.cwiseAbs().maxCoeff() < 1e-14);
    Tendencies l = linearized_tendencies(md, uniform_state(m, 3.0, Vec2(0, 0)), make_physics(m, md.ops, 9.8, 0.0), 3.0);
    CHECK(l.dh.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(l.du.values.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("conservation rates on random states") {
  std::mt19937_64 rng(21);
  MeshPair m = build_periodic_quad(6, 1.0);
  for (const auto& name : preset_names()) {
    Model md = build_model(m, scheme_preset(name));
    PhysicsParams p = make_physics(m, md.ops, 1.0, 0.5);
    for (int i = 0; i < 5; ++i) {
      ModelState s = random_state(m, rng);
      Tendencies t = tendencies(md, s, p);
      InvariantRates r = invariant_rates(md, s, p, t);
      Diagnostics d = diagnostics(md, s, p);
      CHECK(std::abs(r.dM) <= 1e-14 * r.mass_scale);
      CHECK(std::abs(r.dC) <= 1e-14 * r.circ_scale);
      CHECK(std::abs(stable_sum(t.dh.values)) <= 1e-14 * r.mass_scale);
      QVariant q = md.scheme.q;
      if (q == QVariant::TE || q == QVariant::DBL) CHECK(std::abs(r.dH) <= 1e-12 * std::abs(d.energy));
      if (q == QVariant::PE || q == QVariant::DBL)
        CHECK(std::abs(r.dPE) <= 1e-12 * std::abs(d.potential_enstrophy));
    }
  }
}

TEST_CASE("diagnostics for uniform PV") {
  MeshPair m = build_periodic_quad(3, 1.0);
  Model md = build_model(m, scheme_preset("trsk2010-te"));
  double f0 = 0.3, H0 = 1.2;
  PhysicsParams p = make_physics(m, md.ops, 1.0, f0);
  Diagnostics d = diagnostics(md, uniform_state(m, H0, Vec2(0, 0)), p);
  double q0 = f0 / H0;
  CHECK(d.circulation == doctest::Approx(f0 * 9.0));
  CHECK(d.potential_enstrophy == doctest::Approx(0.5 * q0 * q0 * H0 * 9.0));
  CHECK(d.min_h == doctest::Approx(H0));
  CHECK(d.max_u == 0.0);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 5);
  SchemeConfig al = scheme_preset("al81");
  CHECK(al.q == QVariant::DBL);
  CHECK(al.r == RKind::Combinatorial);
  CHECK(al.t == TKind::Combinatorial);
  CHECK(scheme_preset("trsk2010-pe").q == QVariant::PE);
  try {
    scheme_preset("nope");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}
