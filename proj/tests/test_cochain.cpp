#include <doctest.h>

#include <cmath>
#include <numbers>

#include "trisk/dec_ops.hpp"
#include "trisk/error.hpp"

using namespace trisk;

TEST_CASE("reduce_scalar exactness") {
  MeshPair m = build_periodic_quad(3, 1.0);
  Cochain c0 = reduce_scalar(m, [](const Vec2&) { return 2.5; }, 0, Grid::Straight);
  CHECK(c0.values.cwiseAbs().maxCoeff() == doctest::Approx(2.5));
  CHECK(c0.values.minCoeff() == doctest::Approx(2.5));

  Cochain c2 = reduce_scalar(m, [](const Vec2&) { return 1.0; }, 2, Grid::Straight);
  for (int i = 0; i < m.topo.nc; ++i) CHECK(c2.values[i] == doctest::Approx(1.0));

  MeshPair k = build_periodic_quad(5, 0.4);
  double L = 2.0;
  Cochain s = reduce_scalar(k, [&](const Vec2& x) { return std::sin(2 * std::numbers::pi * x[0] / L); }, 2,
                            Grid::Twisted);
  CHECK(std::abs(s.values.sum()) < 1e-13);

  try {
    reduce_scalar(m, [](const Vec2&) { return 1.0; }, 1, Grid::Straight);
    FAIL("k=1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongDegree);
  }
}

TEST_CASE("polygon quadrature is exact for quartic polynomials") {
  std::vector<Vec2> tri = {{0, 0}, {1, 0}, {0, 1}};
  // ∫ x^2 y^2 over the unit simplex = 2!2!/6! = 1/180
  double v = integrate_polygon(tri, [](const Vec2& x) { return x[0] * x[0] * x[1] * x[1]; });
  CHECK(v == doctest::Approx(1.0 / 180.0).epsilon(1e-14));
  // ∫_0^1 x^7 dx = 1/8 (Gauss–Legendre with 4 nodes is exact to degree 7)
  CHECK(integrate_segment({0, 0}, {1, 0}, [](const Vec2& x) { return std::pow(x[0], 7); }) ==
        doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("reduce_vector constant field on quad") {
  MeshPair m = build_periodic_quad(3, 1.0);
  auto X = [](const Vec2&) { return Vec2(1, 0); };
  Cochain circ = reduce_vector(m, X, Flavor::Circulation, Grid::Straight);
  Cochain flux = reduce_vector(m, X, Flavor::Flux, Grid::Straight);
  for (int e = 0; e < m.topo.ne; ++e) {
    Vec2 d = m.geom.edge_vector(m.topo, e);
    bool along_x = std::abs(d[1]) < 1e-12;
    if (along_x) {
      CHECK(circ.values[e] == doctest::Approx(d[0]));
      CHECK(flux.values[e] == doctest::Approx(0.0));
    } else {
      CHECK(circ.values[e] == doctest::Approx(0.0));
      CHECK(std::abs(flux.values[e]) == doctest::Approx(1.0));
      // normal is the tangent turned clockwise: (t_y, −t_x)
      CHECK(flux.values[e] == doctest::Approx(d[1]));
    }
  }
  Cochain z = reduce_vector(m, [](const Vec2&) { return Vec2(0, 0); }, Flavor::Flux, Grid::Twisted);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dof scaling") {
  MeshPair m = build_periodic_quad(3, 0.5);
  Eigen::VectorXd pts = Eigen::VectorXd::Constant(m.topo.nv, 2.0);
  Cochain h = scale_dofs(m, pts, twisted(2));
  for (int i = 0; i < m.topo.nv; ++i) CHECK(h.values[i] == doctest::Approx(0.5));
  CHECK((unscale_dofs(m, h) - pts).cwiseAbs().maxCoeff() == 0.0);

  MeshPair u = build_periodic_quad(3, 1.0);
  Cochain v = scale_dofs(u, Eigen::VectorXd::Ones(u.topo.ne), straight(1, Flavor::Circulation));
  CHECK(v.values.minCoeff() == doctest::Approx(1.0));
  CHECK(v.values.maxCoeff() == doctest::Approx(1.0));

  try {
    scale_dofs(u, Eigen::VectorXd::Ones(u.topo.nv), straight(0));
    FAIL("0-form scaling accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedScaling);
  }
}

TEST_CASE("topological pairing signs") {
  MeshPair m = build_periodic_quad(2, 1.0);
  Cochain a = Cochain::constant(m, straight(1, Flavor::Circulation), 1.0);
  Cochain b = Cochain::constant(m, twisted(1, Flavor::Flux), 1.0);
  CHECK(topological_pairing(a, b) == doctest::Approx(8.0));
  CHECK(topological_pairing(b, a) == doctest::Approx(-8.0));

  Cochain x0 = Cochain::constant(m, straight(0), 3.0);
  Cochain y2 = Cochain::constant(m, twisted(2), 0.5);
  CHECK(topological_pairing(x0, y2) == doctest::Approx(topological_pairing(y2, x0)));

  Cochain wrong = Cochain::constant(m, straight(2), 1.0);
  try {
    topological_pairing(a, wrong);
    FAIL("mismatched pairing accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PairingTypeError);
  }
}

TEST_CASE("reinterpret_flavor") {
  MeshPair m = build_periodic_quad(2, 1.0);
  Cochain c = Cochain::constant(m, straight(1, Flavor::Circulation), 1.0);
  Cochain f = reinterpret_flavor(c);
  CHECK(f.type.flavor == Flavor::Flux);
  CHECK(f.values == c.values);
  CHECK(reinterpret_flavor(f).type == c.type);
  try {
    reinterpret_flavor(Cochain::constant(m, straight(0), 1.0));
    FAIL("0-form accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongDegree);
  }
}
