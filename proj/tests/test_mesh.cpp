#include <doctest.h>

#include <sstream>

#include "trisk/dec_ops.hpp"
#include "trisk/error.hpp"
#include "trisk/mesh.hpp"

using namespace trisk;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("quad mesh counts and Euler characteristic") {
  MeshPair m = build_periodic_quad(2, 1.0);
  CHECK(m.topo.nv == 4);
  CHECK(m.topo.ne == 8);
  CHECK(m.topo.nc == 4);
  CHECK(m.topo.nv - m.topo.ne + m.topo.nc == 0);
  CHECK(m.orthogonal);
}

TEST_CASE("quad areas by hand") {
  MeshPair m = build_periodic_quad(3, 0.5);
  double total = 0;
  for (int c = 0; c < m.topo.nc; ++c) {
    CHECK(m.geom.cell_area[c] == doctest::Approx(0.25));
    CHECK(m.geom.tcell_area[c] == doctest::Approx(0.25));
    total += m.geom.cell_area[c];
  }
  CHECK(total == doctest::Approx(2.25));
  CHECK(m.geom.domain_area() == doctest::Approx(2.25));

  MeshPair u = build_periodic_quad(3, 1.0);
  for (int e = 0; e < u.topo.ne; ++e) {
    CHECK(u.geom.edge_len[e] == doctest::Approx(1.0));
    CHECK(u.geom.tedge_len[e] == doctest::Approx(1.0));
    // kite spanned by the edge and its dual: two triangles of area 1/4
    CHECK(u.geom.ext_area[e] == doctest::Approx(0.5));
  }
}

TEST_CASE("trihex counts, valence and area partition") {
  MeshPair m = build_periodic_trihex(2, 1.0);
  CHECK(m.topo.nc == 8);
  CHECK(m.topo.nv == 4);
  for (int v = 0; v < m.topo.nv; ++v) {
    CHECK(m.topo.vert_cells[v].size() == 6);
    CHECK(m.topo.tcell_edges[v].size() == 6);
  }
  CHECK(validate_mesh(m).ok());
  for (int n : {4, 6}) {
    MeshPair k = build_periodic_trihex(n, 0.3);
    double a = 0, b = 0;
    for (double x : k.geom.cell_area) a += x;
    for (double x : k.geom.tcell_area) b += x;
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("generator size errors") {
  CHECK(kind_of([] { build_periodic_quad(1, 1.0); }) == ErrorKind::InvalidMeshSize);
  CHECK(kind_of([] { build_periodic_trihex(3, 1.0); }) == ErrorKind::InvalidMeshSize);
}

TEST_CASE("induced twisted orientation") {
  MeshPair m = build_periodic_quad(3, 1.0);
  const auto& t = m.topo;
  // n_ec at (e,c) equals t̃ at (ṽ(c), ẽ(e))
  for (int c = 0; c < t.nc; ++c)
    for (size_t k = 0; k < t.cell_edges[c].size(); ++k) {
      int e = t.cell_edges[c][k];
      int tv = t.dual_cell[c], te = t.dual_edge[e];
      int slot = t.tedge_verts[te][0] == tv ? 0 : 1;
      REQUIRE(t.tedge_verts[te][slot] == tv);
      CHECK(t.tt_ve[te][slot] == t.n_ec[c][k]);
    }
  // t_ve at (v,e) equals −ñ at (ẽ(e), c̃(v))
  for (int e = 0; e < t.ne; ++e)
    for (int s = 0; s < 2; ++s) {
      int v = t.edge_verts[e][s], tc = t.dual_vertex[v], te = t.dual_edge[e];
      const auto& loop = t.tcell_edges[tc];
      auto it = std::find(loop.begin(), loop.end(), te);
      REQUIRE(it != loop.end());
      CHECK(t.tn_ec[tc][it - loop.begin()] == -t.t_ve[e][s]);
    }
}

TEST_CASE("validation catches constructed defects") {
  CHECK(validate_mesh(build_periodic_quad(3, 1.0)).ok());

  MeshPair flipped = build_periodic_quad(3, 1.0);
  flipped.topo.n_ec[0][0] *= -1;
  CHECK_FALSE(validate_mesh(flipped).ok());

  MeshPair bumped = build_periodic_quad(3, 1.0);
  bumped.geom.overlap[0][0] += 0.1;
  auto rep = validate_mesh(bumped);
  REQUIRE_FALSE(rep.ok());
  bool mentions_overlap = false;
  for (const auto& f : rep.failures) mentions_overlap |= f.find("overlap") != std::string::npos;
  CHECK(mentions_overlap);
}

TEST_CASE("mesh text round trip") {
  for (const char* spec : {"quad:3", "trihex:4:0.7"}) {
    MeshPair m = mesh_from_spec(spec);
    std::stringstream ss;
    save_mesh(m, ss);
    MeshPair r = load_mesh(ss);
    CHECK(r.topo.edge_verts == m.topo.edge_verts);
    CHECK(r.topo.cell_edges == m.topo.cell_edges);
    CHECK(r.topo.n_ec == m.topo.n_ec);
    CHECK(r.topo.tn_ec == m.topo.tn_ec);
    CHECK(r.geom.edge_shift == m.geom.edge_shift);
    for (int c = 0; c < m.topo.nc; ++c) CHECK(r.geom.cell_area[c] == doctest::Approx(m.geom.cell_area[c]));
    CHECK(validate_mesh(r).ok());
  }
}

TEST_CASE("mesh parse errors") {
  MeshPair m = build_periodic_quad(3, 1.0);
  std::stringstream ss;
  save_mesh(m, ss);
  std::string text = ss.str();

  std::stringstream truncated(text.substr(0, text.find("STRAIGHT-CELLS")));
  try {
    load_mesh(truncated);
    FAIL("truncated file accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("STRAIGHT-CELLS") != std::string::npos);
  }

  // second edge line reuses id 0
  size_t sec = text.find("STRAIGHT-EDGES");
  size_t l1 = text.find('\n', sec) + 1;
  size_t l2 = text.find('\n', l1) + 1;
  std::string dup = text.substr(0, l2) + "0" + text.substr(text.find(' ', l2));
  std::stringstream dupss(dup);
  CHECK(kind_of([&] { load_mesh(dupss); }) == ErrorKind::ParseError);

  CHECK(kind_of([] { mesh_from_spec("/nonexistent/mesh.txt"); }) == ErrorKind::IoError);
}

TEST_CASE("polygon helpers") {
  std::vector<Vec2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_area(sq) == doctest::Approx(1.0));
  std::vector<Vec2> shifted = {{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}};
  CHECK(polygon_area(clip_convex(sq, shifted)) == doctest::Approx(0.25));
  Vec2 cc = circumcenter({0, 0}, {2, 0}, {0, 2});
  CHECK(cc[0] == doctest::Approx(1.0));
  CHECK(cc[1] == doctest::Approx(1.0));
}
