#include "trisk/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "trisk/error.hpp"

namespace trisk {

namespace {

int floor_div(int a, int n) { return (a >= 0) ? a / n : -((-a + n - 1) / n); }
int wrap_index(int a, int n) { return a - n * floor_div(a, n); }

Eigen::Matrix2d lattice(const MeshGeometry& g) {
  Eigen::Matrix2d A;
  A.col(0) = g.a1;
  A.col(1) = g.a2;
  return A;
}

Vec2 wrap_point(const MeshGeometry& g, const Vec2& p) {
  Eigen::Matrix2d A = lattice(g);
  Vec2 lam = A.inverse() * p;
  for (int i = 0; i < 2; ++i) lam[i] -= std::floor(lam[i]);
  return A * lam;
}

std::array<int, 2> lattice_shift(const MeshGeometry& g, const Vec2& d) {
  Vec2 lam = lattice(g).inverse() * d;
  return {static_cast<int>(std::lround(lam[0])), static_cast<int>(std::lround(lam[1]))};
}

Vec2 shift_vec(const MeshGeometry& g, const std::array<int, 2>& s) { return s[0] * g.a1 + s[1] * g.a2; }

int slot_of(const std::array<int, 2>& pair, int x) { return pair[0] == x ? 0 : (pair[1] == x ? 1 : -1); }

// Straight cell c translated so that its corner j sits at `anchor`.
std::vector<Vec2> cell_polygon_at(const MeshPair& m, int c, int j, const Vec2& anchor) {
  auto p = cell_polygon(m, c);
  Vec2 off = anchor - p[j];
  for (auto& x : p) x += off;
  return p;
}

Vec2 poly_circumcenter(const std::vector<Vec2>& p) { return circumcenter(p[0], p[1], p[2]); }

// Corner index of cell c at vertex v leaving along edge e.
int corner_index(const MeshTopology& t, int c, int v, int e) {
  for (size_t j = 0; j < t.cell_edges[c].size(); ++j)
    if (t.cell_verts[c][j] == v && t.cell_edges[c][j] == e) return static_cast<int>(j);
  throw Error(ErrorKind::ConstructionFailure, "corner not found for cell " + std::to_string(c));
}

struct Builder {
  int n;
  MeshPair m;
  explicit Builder(int n_) : n(n_) {}
  // Adds an edge between lattice sites given in unwrapped integer coordinates.
  int add_edge(int ti, int tj, int hi, int hj, int (*vid)(int, int, int)) {
    int e = m.topo.ne++;
    int tail = vid(wrap_index(ti, n), wrap_index(tj, n), n);
    int head = vid(wrap_index(hi, n), wrap_index(hj, n), n);
    m.topo.edge_verts.push_back({tail, head});
    m.topo.t_ve.push_back({-1, +1});
    m.geom.edge_shift.push_back({floor_div(hi, n) - floor_div(ti, n), floor_div(hj, n) - floor_div(tj, n)});
    return e;
  }
};

int grid_vid(int i, int j, int n) { return i + n * j; }

}  // namespace

double MeshGeometry::domain_area() const { return std::abs(a1[0] * a2[1] - a1[1] * a2[0]); }

Vec2 MeshGeometry::edge_vector(const MeshTopology& t, int e) const {
  const auto& ev = t.edge_verts[e];
  return vpos[ev[1]] + shift_vec(*this, edge_shift[e]) - vpos[ev[0]];
}

double polygon_area(const std::vector<Vec2>& p) {
  double a = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& w = p[(i + 1) % p.size()];
    a += u[0] * w[1] - u[1] * w[0];
  }
  return 0.5 * a;
}

std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
  // Sutherland–Hodgman; clip polygon is convex and counterclockwise
  std::vector<Vec2> out = subject;
  for (size_t i = 0; i < clip.size() && !out.empty(); ++i) {
    Vec2 a = clip[i], b = clip[(i + 1) % clip.size()];
    Vec2 d = b - a;
    auto side = [&](const Vec2& p) { return d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]); };
    std::vector<Vec2> in = std::move(out);
    out.clear();
    for (size_t k = 0; k < in.size(); ++k) {
      const Vec2& p = in[k];
      const Vec2& q = in[(k + 1) % in.size()];
      double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
  }
  return out;
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
  Vec2 ab = b - a, ac = c - a;
  double d = 2 * (ab[0] * ac[1] - ab[1] * ac[0]);
  double b2 = ab.squaredNorm(), c2 = ac.squaredNorm();
  Vec2 r((ac[1] * b2 - ab[1] * c2) / d, (ab[0] * c2 - ac[0] * b2) / d);
  return a + r;
}

std::vector<Vec2> cell_polygon(const MeshPair& m, int c) {
  const auto& t = m.topo;
  std::vector<Vec2> p;
  Vec2 x = m.geom.vpos[t.cell_verts[c][0]];
  for (size_t k = 0; k < t.cell_edges[c].size(); ++k) {
    p.push_back(x);
    x += t.n_ec[c][k] * m.geom.edge_vector(t, t.cell_edges[c][k]);
  }
  return p;
}

std::vector<Vec2> tcell_polygon(const MeshPair& m, int v) {
  const auto& t = m.topo;
  const auto& edges = t.vert_edges[v];
  const auto& cells = t.vert_cells[v];
  int k = static_cast<int>(edges.size());
  std::vector<Vec2> p(k);
  for (int i = 0; i < k; ++i) {
    int c = cells[i];
    int j = corner_index(t, c, v, edges[i]);
    // cell i sits between edges i and i+1, so it is the start of twisted edge i+1
    p[(i + 1) % k] = poly_circumcenter(cell_polygon_at(m, c, j, m.geom.vpos[v]));
  }
  return p;
}

std::array<Vec2, 2> tedge_endpoints(const MeshPair& m, int e) {
  const auto& t = m.topo;
  Vec2 p0 = m.geom.vpos[t.edge_verts[e][0]];
  Vec2 p1 = p0 + m.geom.edge_vector(t, e);
  std::array<Vec2, 2> out;
  for (int s = 0; s < 2; ++s) {
    int c = t.edge_cells[e][s];
    auto poly = cell_polygon(m, c);
    int k = -1;
    for (size_t i = 0; i < t.cell_edges[c].size(); ++i)
      if (t.cell_edges[c][i] == e) k = static_cast<int>(i);
    Vec2 off = (t.n_ec[c][k] > 0 ? p0 : p1) - poly[k];
    out[s] = poly_circumcenter(poly) + off;
  }
  return out;
}

void induce_twisted_orientation(MeshTopology& t) {
  t.tt_ve.assign(t.ne, {0, 0});
  for (int e = 0; e < t.ne; ++e) {
    for (int s = 0; s < 2; ++s) {
      int c = t.tedge_verts[e][s];
      for (size_t k = 0; k < t.cell_edges[c].size(); ++k)
        if (t.cell_edges[c][k] == e) t.tt_ve[e][s] = t.n_ec[c][k];
    }
  }
  t.tn_ec.assign(t.nv, {});
  for (int v = 0; v < t.nv; ++v) {
    for (int e : t.tcell_edges[v]) {
      int s = slot_of(t.edge_verts[e], v);
      t.tn_ec[v].push_back(-t.t_ve[e][s]);
    }
  }
}

void complete_topology(MeshTopology& t) {
  t.edge_cells.assign(t.ne, {-1, -1});
  for (int c = 0; c < t.nc; ++c) {
    for (size_t k = 0; k < t.cell_edges[c].size(); ++k) {
      int e = t.cell_edges[c][k];
      if (e < 0 || e >= t.ne) throw Error(ErrorKind::LoadError, "cell " + std::to_string(c) + " references bad edge");
      int s = t.n_ec[c][k] < 0 ? 0 : 1;
      if (t.edge_cells[e][s] != -1)
        throw Error(ErrorKind::LoadError, "edge " + std::to_string(e) + " has two cells with the same orientation");
      t.edge_cells[e][s] = c;
    }
  }
  for (int e = 0; e < t.ne; ++e)
    if (t.edge_cells[e][0] < 0 || t.edge_cells[e][1] < 0)
      throw Error(ErrorKind::LoadError, "edge " + std::to_string(e) + " does not bound exactly two cells");

  // corner walk: at each corner the leaving edge precedes the arriving edge
  // counterclockwise around the vertex, with the cell in between
  std::vector<std::map<int, std::pair<int, int>>> next(t.nv);
  for (int c = 0; c < t.nc; ++c) {
    int m = static_cast<int>(t.cell_edges[c].size());
    for (int j = 0; j < m; ++j) {
      int v = t.cell_verts[c][j];
      int leave = t.cell_edges[c][j];
      int arrive = t.cell_edges[c][(j + m - 1) % m];
      next[v][leave] = {arrive, c};
    }
  }
  t.vert_edges.assign(t.nv, {});
  t.vert_cells.assign(t.nv, {});
  for (int v = 0; v < t.nv; ++v) {
    if (next[v].empty()) throw Error(ErrorKind::LoadError, "vertex " + std::to_string(v) + " has no cells");
    int start = next[v].begin()->first;
    int e = start;
    do {
      auto it = next[v].find(e);
      if (it == next[v].end() || t.vert_edges[v].size() > next[v].size())
        throw Error(ErrorKind::LoadError, "vertex " + std::to_string(v) + " has an open fan");
      t.vert_edges[v].push_back(e);
      t.vert_cells[v].push_back(it->second.second);
      e = it->second.first;
    } while (e != start);
    if (t.vert_edges[v].size() != next[v].size())
      throw Error(ErrorKind::LoadError, "vertex " + std::to_string(v) + " is not a manifold vertex");
  }

  t.tedge_verts.assign(t.ne, {0, 0});
  for (int e = 0; e < t.ne; ++e) t.tedge_verts[e] = {t.edge_cells[e][0], t.edge_cells[e][1]};
  t.tcell_edges = t.vert_edges;
  t.tcell_verts.assign(t.nv, {});
  for (int v = 0; v < t.nv; ++v) {
    int k = static_cast<int>(t.vert_cells[v].size());
    for (int i = 0; i < k; ++i) t.tcell_verts[v].push_back(t.vert_cells[v][(i + k - 1) % k]);
  }
  induce_twisted_orientation(t);

  t.dual_vertex.resize(t.nv);
  t.dual_edge.resize(t.ne);
  t.dual_cell.resize(t.nc);
  for (int i = 0; i < t.nv; ++i) t.dual_vertex[i] = i;
  for (int i = 0; i < t.ne; ++i) t.dual_edge[i] = i;
  for (int i = 0; i < t.nc; ++i) t.dual_cell[i] = i;

  t.ecp.assign(t.ne, {});
  for (int e = 0; e < t.ne; ++e) {
    std::set<int> s;
    for (int c : t.edge_cells[e])
      for (int x : t.cell_edges[c])
        if (x != e) s.insert(x);
    t.ecp[e].assign(s.begin(), s.end());
  }
}

void compute_geometry(MeshPair& m) {
  auto& t = m.topo;
  auto& g = m.geom;
  g.edge_len.resize(t.ne);
  for (int e = 0; e < t.ne; ++e) g.edge_len[e] = g.edge_vector(t, e).norm();
  g.cell_area.resize(t.nc);
  g.tvpos.resize(t.nc);
  for (int c = 0; c < t.nc; ++c) {
    auto p = cell_polygon(m, c);
    g.cell_area[c] = polygon_area(p);
    g.tvpos[c] = wrap_point(g, poly_circumcenter(p));
  }
  g.tedge_len.resize(t.ne);
  g.tedge_shift.resize(t.ne);
  g.ext_area.resize(t.ne);
  g.ext_overlap.resize(t.ne);
  std::vector<std::vector<Vec2>> tpoly(t.nv);
  g.tcell_area.resize(t.nv);
  for (int v = 0; v < t.nv; ++v) {
    tpoly[v] = tcell_polygon(m, v);
    g.tcell_area[v] = polygon_area(tpoly[v]);
  }
  bool ortho = true;
  for (int e = 0; e < t.ne; ++e) {
    auto q = tedge_endpoints(m, e);
    Vec2 dt = q[1] - q[0];
    g.tedge_len[e] = dt.norm();
    int tv0 = t.tedge_verts[e][0], tv1 = t.tedge_verts[e][1];
    g.tedge_shift[e] = lattice_shift(g, g.tvpos[tv0] + dt - g.tvpos[tv1]);

    Vec2 p0 = g.vpos[t.edge_verts[e][0]];
    Vec2 de = g.edge_vector(t, e);
    Vec2 p1 = p0 + de;
    std::vector<Vec2> kite = {p0, q[0], p1, q[1]};
    if (polygon_area(kite) < 0) std::reverse(kite.begin(), kite.end());
    g.ext_area[e] = polygon_area(kite);
    for (int s = 0; s < 2; ++s) {
      int v = t.edge_verts[e][s];
      Vec2 off = (s == 0 ? p0 : p1) - g.vpos[v];
      std::vector<Vec2> tp = tpoly[v];
      for (auto& x : tp) x += off;
      g.ext_overlap[e][s] = polygon_area(clip_convex(kite, tp));
    }
    Vec2 th = de / de.norm();
    Vec2 sh = dt / dt.norm();
    Vec2 mh(sh[1], -sh[0]);
    if (std::abs(th.dot(mh) - 1.0) > 1e-12) ortho = false;
  }
  m.orthogonal = ortho;

  g.overlap.assign(t.nv, {});
  for (int v = 0; v < t.nv; ++v) {
    for (size_t k = 0; k < t.vert_cells[v].size(); ++k) {
      int c = t.vert_cells[v][k];
      int j = corner_index(t, c, v, t.vert_edges[v][k]);
      auto cp = cell_polygon_at(m, c, j, g.vpos[v]);
      g.overlap[v].push_back(polygon_area(clip_convex(tpoly[v], cp)));
    }
  }
}

MeshPair build_periodic_quad(int n, double spacing) {
  if (n < 2) throw Error(ErrorKind::InvalidMeshSize, "quad mesh needs n >= 2, got " + std::to_string(n));
  if (!(spacing > 0)) throw Error(ErrorKind::InvalidMeshSize, "spacing must be positive");
  Builder b(n);
  auto& t = b.m.topo;
  auto& g = b.m.geom;
  g.a1 = Vec2(n * spacing, 0);
  g.a2 = Vec2(0, n * spacing);
  t.nv = n * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g.vpos.emplace_back(i * spacing, j * spacing);
  // edge 2*(i+n*j) runs along x from (i,j), edge 2*(i+n*j)+1 along y
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      b.add_edge(i, j, i + 1, j, grid_vid);
      b.add_edge(i, j, i, j + 1, grid_vid);
    }
  auto hx = [n](int i, int j) { return 2 * grid_vid(wrap_index(i, n), wrap_index(j, n), n); };
  auto hy = [n](int i, int j) { return 2 * grid_vid(wrap_index(i, n), wrap_index(j, n), n) + 1; };
  auto vid = [n](int i, int j) { return grid_vid(wrap_index(i, n), wrap_index(j, n), n); };
  t.nc = n * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      t.cell_edges.push_back({hx(i, j), hy(i + 1, j), hx(i, j + 1), hy(i, j)});
      t.n_ec.push_back({+1, +1, -1, -1});
      t.cell_verts.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  complete_topology(t);
  compute_geometry(b.m);
  b.m.gen = {"quad", n, spacing};
  return b.m;
}

MeshPair build_periodic_trihex(int n, double spacing) {
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorKind::InvalidMeshSize, "trihex mesh needs even n >= 2, got " + std::to_string(n));
  if (!(spacing > 0)) throw Error(ErrorKind::InvalidMeshSize, "spacing must be positive");
  Builder b(n);
  auto& t = b.m.topo;
  auto& g = b.m.geom;
  const double r3 = std::sqrt(3.0);
  Vec2 e1(spacing, 0), e2(0.5 * spacing, 0.5 * r3 * spacing);
  g.a1 = n * e1;
  g.a2 = n * e2;
  t.nv = n * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g.vpos.push_back(i * e1 + j * e2);
  // per site: 3k along e1, 3k+1 along e2, 3k+2 from (i+1,j) to (i,j+1)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      b.add_edge(i, j, i + 1, j, grid_vid);
      b.add_edge(i, j, i, j + 1, grid_vid);
      b.add_edge(i + 1, j, i, j + 1, grid_vid);
    }
  auto eid = [n](int i, int j, int k) { return 3 * grid_vid(wrap_index(i, n), wrap_index(j, n), n) + k; };
  auto vid = [n](int i, int j) { return grid_vid(wrap_index(i, n), wrap_index(j, n), n); };
  t.nc = 2 * n * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      t.cell_edges.push_back({eid(i, j, 0), eid(i, j, 2), eid(i, j, 1)});
      t.n_ec.push_back({+1, +1, -1});
      t.cell_verts.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
      t.cell_edges.push_back({eid(i + 1, j, 1), eid(i, j + 1, 0), eid(i, j, 2)});
      t.n_ec.push_back({+1, -1, -1});
      t.cell_verts.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  complete_topology(t);
  compute_geometry(b.m);
  b.m.gen = {"trihex", n, spacing};
  return b.m;
}

ValidationReport validate_mesh(const MeshPair& m, double tol) {
  ValidationReport r;
  const auto& t = m.topo;
  const auto& g = m.geom;
  auto fail = [&](const std::string& s) { r.failures.push_back(s); };

  if ((int)t.edge_verts.size() != t.ne || (int)t.t_ve.size() != t.ne || (int)t.cell_edges.size() != t.nc ||
      (int)t.n_ec.size() != t.nc || (int)t.cell_verts.size() != t.nc || (int)t.tedge_verts.size() != t.ne ||
      (int)t.tt_ve.size() != t.ne || (int)t.tcell_edges.size() != t.nv || (int)t.tn_ec.size() != t.nv) {
    fail("index-consistency: incidence array sizes do not match entity counts");
    return r;
  }
  if (t.nv - t.ne + t.nc != 0) fail("euler-characteristic: V - E + F != 0");

  std::vector<int> seen(t.ne, 0);
  for (int c = 0; c < t.nc; ++c)
    for (int e : t.cell_edges[c]) seen[e]++;
  for (int e = 0; e < t.ne; ++e) {
    if (seen[e] != 2) fail("edge-cells: edge " + std::to_string(e) + " bounds " + std::to_string(seen[e]) + " cells");
    if (t.edge_verts[e][0] == t.edge_verts[e][1]) fail("edge-vertices: edge " + std::to_string(e) + " is a loop");
  }

  // D2 D1 = 0 cell by cell
  for (int c = 0; c < t.nc; ++c) {
    std::map<int, int> acc;
    for (size_t k = 0; k < t.cell_edges[c].size(); ++k) {
      int e = t.cell_edges[c][k];
      for (int s = 0; s < 2; ++s) acc[t.edge_verts[e][s]] += t.n_ec[c][k] * t.t_ve[e][s];
    }
    for (auto& [v, x] : acc)
      if (x != 0) {
        fail("orientation-consistency: D2*D1 != 0 on cell " + std::to_string(c));
        break;
      }
  }
  for (int v = 0; v < t.nv; ++v) {
    std::map<int, int> acc;
    for (size_t k = 0; k < t.tcell_edges[v].size(); ++k) {
      int e = t.tcell_edges[v][k];
      for (int s = 0; s < 2; ++s) acc[t.tedge_verts[e][s]] += t.tn_ec[v][k] * t.tt_ve[e][s];
    }
    for (auto& [c, x] : acc)
      if (x != 0) {
        fail("orientation-consistency: twisted D2*D1 != 0 on twisted cell " + std::to_string(v));
        break;
      }
  }

  // induced orientation
  for (int e = 0; e < t.ne; ++e)
    for (int s = 0; s < 2; ++s) {
      int c = t.tedge_verts[e][s];
      int n = 0;
      for (size_t k = 0; k < t.cell_edges[c].size(); ++k)
        if (t.cell_edges[c][k] == e) n = t.n_ec[c][k];
      if (n != t.tt_ve[e][s]) {
        fail("induced-orientation: t~ != n_ec at twisted edge " + std::to_string(e));
        break;
      }
    }
  for (int v = 0; v < t.nv; ++v)
    for (size_t k = 0; k < t.tcell_edges[v].size(); ++k) {
      int e = t.tcell_edges[v][k];
      int s = slot_of(t.edge_verts[e], v);
      if (s < 0 || t.tn_ec[v][k] != -t.t_ve[e][s]) {
        fail("induced-orientation: n~ != -t_ve at twisted cell " + std::to_string(v));
        break;
      }
    }

  auto is_perm = [](const std::vector<int>& p, int n) {
    if ((int)p.size() != n) return false;
    std::vector<char> hit(n, 0);
    for (int x : p) {
      if (x < 0 || x >= n || hit[x]) return false;
      hit[x] = 1;
    }
    return true;
  };
  if (!is_perm(t.dual_vertex, t.nv) || !is_perm(t.dual_edge, t.ne) || !is_perm(t.dual_cell, t.nc))
    fail("duality: maps are not bijections");

  for (int e = 0; e < t.ne && (int)t.ecp.size() == t.ne; ++e) {
    std::set<int> s;
    for (int c : t.edge_cells[e])
      for (int x : t.cell_edges[c])
        if (x != e) s.insert(x);
    if (std::vector<int>(s.begin(), s.end()) != t.ecp[e]) {
      fail("stencil: ECP(e) != EC(CE(e)) at edge " + std::to_string(e));
      break;
    }
  }

  // geometry
  if ((int)g.edge_len.size() != t.ne || (int)g.cell_area.size() != t.nc || (int)g.tcell_area.size() != t.nv ||
      (int)g.overlap.size() != t.nv) {
    fail("geometry: arrays missing or mis-sized");
    return r;
  }
  for (int e = 0; e < t.ne; ++e)
    if (!(g.edge_len[e] > 0 && g.tedge_len[e] > 0 && g.ext_area[e] > 0)) {
      fail("positivity: non-positive edge measure at " + std::to_string(e));
      break;
    }
  for (int c = 0; c < t.nc; ++c)
    if (!(g.cell_area[c] > 0)) {
      fail("positivity: non-positive cell area at " + std::to_string(c));
      break;
    }
  for (int v = 0; v < t.nv; ++v)
    if (!(g.tcell_area[v] > 0)) {
      fail("positivity: non-positive twisted cell area at " + std::to_string(v));
      break;
    }
  std::vector<double> per_cell(t.nc, 0.0);
  for (int v = 0; v < t.nv; ++v) {
    double s = 0;
    for (size_t k = 0; k < g.overlap[v].size(); ++k) {
      s += g.overlap[v][k];
      per_cell[t.vert_cells[v][k]] += g.overlap[v][k];
    }
    if (std::abs(s - g.tcell_area[v]) > tol * g.tcell_area[v]) {
      fail("overlap-partition: sum_c A(c~,c) != A(c~) at twisted cell " + std::to_string(v));
      break;
    }
  }
  for (int c = 0; c < t.nc; ++c)
    if (std::abs(per_cell[c] - g.cell_area[c]) > tol * g.cell_area[c]) {
      fail("overlap-partition: sum_c~ A(c~,c) != A(c) at cell " + std::to_string(c));
      break;
    }
  for (int e = 0; e < t.ne; ++e)
    if (std::abs(g.ext_overlap[e][0] + g.ext_overlap[e][1] - g.ext_area[e]) > tol * g.ext_area[e]) {
      fail("extended-partition: sum A(c~,e~) != extended area at edge " + std::to_string(e));
      break;
    }
  double sc = 0, stc = 0;
  for (double a : g.cell_area) sc += a;
  for (double a : g.tcell_area) stc += a;
  double dom = g.domain_area();
  if (std::abs(sc - dom) > tol * dom * 10) fail("domain-area: sum A(c) != domain area");
  if (std::abs(stc - dom) > tol * dom * 10) fail("domain-area: sum A(c~) != domain area");

  if (m.orthogonal) {
    for (int e = 0; e < t.ne; ++e) {
      auto q = tedge_endpoints(m, e);
      Vec2 th = g.edge_vector(t, e).normalized();
      Vec2 sh = (q[1] - q[0]).normalized();
      if (std::abs(th.dot(Vec2(sh[1], -sh[0])) - 1.0) > tol) {
        fail("orthogonality: flag set but edge " + std::to_string(e) + " is not orthogonal");
        break;
      }
    }
  }
  return r;
}

MeshPair mesh_from_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (!parts.empty() && (parts[0] == "quad" || parts[0] == "trihex")) {
    if (parts.size() < 2 || parts.size() > 3)
      throw Error(ErrorKind::InvalidParameter, "mesh spec must be kind:n[:spacing], got '" + spec + "'");
    int n = 0;
    double h = 1.0;
    try {
      n = std::stoi(parts[1]);
      if (parts.size() == 3) h = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParameter, "bad number in mesh spec '" + spec + "'");
    }
    return parts[0] == "quad" ? build_periodic_quad(n, h) : build_periodic_trihex(n, h);
  }
  return load_mesh_file(spec);
}

}  // namespace trisk
