#include <doctest.h>

#include <random>

#include "trisk/dec_ops.hpp"
#include "trisk/error.hpp"

using namespace trisk;

namespace {

Eigen::VectorXd random_vec(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

bool is_identity(const SpMat& a, double s = 1.0) {
  SpMat id(a.rows(), a.cols());
  id.setIdentity();
  return max_abs(a - s * id) < 1e-14;
}

}  // namespace

TEST_CASE("coboundaries have unit entries and annihilate") {
  for (const char* spec : {"quad:3", "trihex:2", "trihex:4:0.3"}) {
    MeshPair m = mesh_from_spec(spec);
    DecOperators ops = build_dec_operators(m);
    for (const SpMat* d : {&ops.D1.mat, &ops.D2.mat, &ops.Dt1.mat, &ops.Dt2.mat})
      for (int k = 0; k < d->outerSize(); ++k)
        for (SpMat::InnerIterator it(*d, k); it; ++it) CHECK(std::abs(it.value()) == 1.0);
    CHECK(max_abs(ops.D2.mat * ops.D1.mat) == 0.0);
    CHECK(max_abs(ops.Dt2.mat * ops.Dt1.mat) == 0.0);
    CHECK(ops.D1.apply(Cochain::constant(m, straight(0), 4.0)).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(check_transpose_duality(ops).max() == 0.0);
  }
}

TEST_CASE("transpose duality detects a flipped orientation") {
  MeshPair m = build_periodic_quad(3, 1.0);
  DecOperators ops = build_dec_operators(m);
  ops.D1.mat.coeffRef(0, m.topo.edge_verts[0][0]) *= -1;
  CHECK(check_transpose_duality(ops).max() > 0.5);
}

TEST_CASE("voronoi hodge on uniform quads") {
  DecOperators ops = build_dec_operators(build_periodic_quad(3, 1.0));
  CHECK(is_identity(ops.hodge.H1.mat));
  CHECK(is_identity(ops.hodge.Ht2.mat));
  CHECK(is_identity(ops.hodge.H2.mat));
  CHECK(is_identity(ops.inv.Ht1.mat, -1.0));

  DecOperators half = build_dec_operators(build_periodic_quad(3, 0.5));
  CHECK(is_identity(half.hodge.Ht2.mat, 4.0));
}

TEST_CASE("hodge sign rule on trihex") {
  DecOperators ops = build_dec_operators(build_periodic_trihex(4, 0.7));
  CHECK(is_identity(SpMat(ops.inv.Ht1.mat * ops.hodge.H1.mat), -1.0));
  CHECK(is_identity(SpMat(ops.inv.H0.mat * ops.hodge.Ht2.mat)));
  CHECK(is_identity(SpMat(ops.inv.Ht0.mat * ops.hodge.H2.mat)));
}

TEST_CASE("H1 maps a reduced constant circulation to the reduced flux") {
  MeshPair m = build_periodic_quad(3, 1.0);
  DecOperators ops = build_dec_operators(m);
  auto X = [](const Vec2&) { return Vec2(1, 0); };
  Cochain u = reduce_vector(m, X, Flavor::Circulation, Grid::Straight);
  Cochain f = reduce_vector(m, X, Flavor::Flux, Grid::Twisted);
  CHECK((ops.hodge.H1.apply(u).values - f.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("non-orthogonal mesh is rejected by the voronoi hodge") {
  MeshPair m = build_periodic_quad(3, 1.0);
  m.orthogonal = false;
  try {
    build_hodge_voronoi(m);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedHodge);
  }
}

TEST_CASE("inner products") {
  MeshPair m = build_periodic_quad(2, 1.0);
  DecOperators ops = build_dec_operators(m);
  Cochain ones = Cochain::constant(m, straight(1, Flavor::Circulation), 1.0);
  CHECK(inner_product(ops, ones, ones) == doctest::Approx(8.0));

  MeshPair t = build_periodic_trihex(4, 1.0);
  DecOperators to = build_dec_operators(t);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    Cochain a(twisted(1, Flavor::Flux), random_vec(t.topo.ne, rng));
    Cochain b(twisted(1, Flavor::Flux), random_vec(t.topo.ne, rng));
    CHECK(inner_product(to, a, a) > 0);
    CHECK(inner_product(to, a, b) == doctest::Approx(inner_product(to, b, a)).epsilon(1e-13));
  }
  Cochain z = Cochain::zeros(t, twisted(1, Flavor::Flux));
  CHECK(inner_product(to, z, z) == 0.0);
}

TEST_CASE("integration by parts and discrete Stokes") {
  MeshPair m = build_periodic_trihex(4, 0.9);
  DecOperators ops = build_dec_operators(m);
  std::mt19937_64 rng(7);
  const auto& t = m.topo;
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd x0 = random_vec(t.nv, rng), y1 = random_vec(t.ne, rng);
    Eigen::VectorXd x1 = random_vec(t.ne, rng), y0 = random_vec(t.nc, rng);
    // ⟨D1x, ỹ⟩ + ⟨x, D̄2ỹ⟩ and ⟨D2x, ỹ⟩ − ⟨x, D̄1ỹ⟩, as raw dot products
    CHECK(std::abs((ops.D1.mat * x0).dot(y1) + x0.dot(ops.Dt2.mat * y1)) < 1e-13);
    CHECK(std::abs((ops.D2.mat * x1).dot(y0) - x1.dot(ops.Dt1.mat * y0)) < 1e-13);
    CHECK(std::abs((ops.D2.mat * x1).sum()) < 1e-13);
    CHECK(std::abs((ops.Dt2.mat * y1).sum()) < 1e-13);
  }
}

TEST_CASE("typed operators reject mistyped input") {
  MeshPair m = build_periodic_quad(3, 1.0);
  DecOperators ops = build_dec_operators(m);
  try {
    ops.D2.apply(Cochain::constant(m, twisted(1, Flavor::Flux), 1.0));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TypeMismatch);
  }
  SparseLinearOp tt = transpose_op(transpose_op(ops.D1));
  CHECK(max_abs(tt.mat - ops.D1.mat) == 0.0);
  CHECK(tt.domain == ops.D1.domain);
  CHECK(tt.codomain == ops.D1.codomain);
  CHECK(transpose_op(ops.D1).domain == ops.D1.codomain);
}
