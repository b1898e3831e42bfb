#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "trisk/error.hpp"
#include "trisk/mesh.hpp"

namespace trisk {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidMeshSize: return "invalid-mesh-size";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::LoadError: return "load-error";
    case ErrorKind::WrongDegree: return "wrong-degree";
    case ErrorKind::UnsupportedScaling: return "unsupported-scaling";
    case ErrorKind::PairingTypeError: return "pairing-type-error";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::UnsupportedHodge: return "unsupported-hodge";
    case ErrorKind::SingularHodge: return "singular-hodge";
    case ErrorKind::ConstructionFailure: return "construction-failure";
    case ErrorKind::UnsupportedVariant: return "unsupported-variant";
    case ErrorKind::MissingGeometry: return "missing-geometry";
    case ErrorKind::PvSingularity: return "pv-singularity";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::IntegratorDivergence: return "integrator-divergence";
    case ErrorKind::ConfigError: return "config-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

namespace {

// Format:
//   TRISK-MESH 1
//   GENERATOR <kind|none> <n> <spacing>
//   LATTICE a1x a1y a2x a2y
//   STRAIGHT-VERTICES nv      then "id x y"
//   STRAIGHT-EDGES ne         then "id tail head t_tail t_head s1 s2"
//   STRAIGHT-CELLS nc         then "id m v0 e0 n0 ... v(m-1) e(m-1) n(m-1)"
//   TWISTED-VERTICES nc       then "id x y"
//   TWISTED-EDGES ne          then "id tail head t_tail t_head s1 s2"
//   TWISTED-CELLS nv          then "id m v0 e0 n0 ..."
//   DUALITY                   then "VERTEX nv ..." "EDGE ne ..." "CELL nc ..." rows of "id dual"
//   GEOMETRY (optional)       then EDGE-MEASURES / CELL-AREAS / TWISTED-CELL-AREAS blocks
//   END

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  bool next(std::vector<std::string>& toks) {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      auto h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      std::istringstream ss(line);
      toks.clear();
      std::string t;
      while (ss >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  }

  std::vector<std::string> section(const std::string& name, size_t min_tokens) {
    std::vector<std::string> toks;
    if (!next(toks)) throw Error(ErrorKind::ParseError, "missing section " + name + " (unexpected end of file)");
    if (toks[0] != name)
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno_) + ": expected section " + name + ", found '" + toks[0] + "'");
    if (toks.size() < min_tokens) fail("section header " + name + " is incomplete");
    return toks;
  }

  std::vector<std::string> row(const std::string& sec, size_t min_tokens) {
    std::vector<std::string> toks;
    if (!next(toks)) throw Error(ErrorKind::ParseError, "section " + sec + " truncated (unexpected end of file)");
    if (toks.size() < min_tokens) fail("too few fields in " + sec + " row");
    return toks;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno_) + ": " + msg);
  }

  int to_int(const std::string& s) const {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      fail("expected integer, found '" + s + "'");
    }
    if (pos != s.size()) fail("expected integer, found '" + s + "'");
    return v;
  }
  double to_double(const std::string& s) const {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      fail("expected number, found '" + s + "'");
    }
    if (pos != s.size()) fail("expected number, found '" + s + "'");
    return v;
  }
  int lineno() const { return lineno_; }

 private:
  std::istream& is_;
  int lineno_ = 0;
};

struct GridBlock {
  std::vector<Vec2> pos;
  std::vector<std::array<int, 2>> ev, tv, shift;
  std::vector<std::vector<int>> cv, ce, cn;
};

void write_grid(std::ostream& os, const char* prefix, const std::vector<Vec2>& pos,
                const std::vector<std::array<int, 2>>& ev, const std::vector<std::array<int, 2>>& tv,
                const std::vector<std::array<int, 2>>& sh, const std::vector<std::vector<int>>& cv,
                const std::vector<std::vector<int>>& ce, const std::vector<std::vector<int>>& cn) {
  os << prefix << "-VERTICES " << pos.size() << "\n";
  for (size_t i = 0; i < pos.size(); ++i) os << i << " " << pos[i][0] << " " << pos[i][1] << "\n";
  os << prefix << "-EDGES " << ev.size() << "\n";
  for (size_t i = 0; i < ev.size(); ++i)
    os << i << " " << ev[i][0] << " " << ev[i][1] << " " << tv[i][0] << " " << tv[i][1] << " " << sh[i][0] << " "
       << sh[i][1] << "\n";
  os << prefix << "-CELLS " << ce.size() << "\n";
  for (size_t i = 0; i < ce.size(); ++i) {
    os << i << " " << ce[i].size();
    for (size_t k = 0; k < ce[i].size(); ++k) os << " " << cv[i][k] << " " << ce[i][k] << " " << cn[i][k];
    os << "\n";
  }
}

GridBlock read_grid(Reader& r, const std::string& prefix) {
  GridBlock b;
  auto h = r.section(prefix + "-VERTICES", 2);
  int nv = r.to_int(h[1]);
  b.pos.assign(nv, Vec2::Zero());
  std::vector<char> seen(nv, 0);
  for (int i = 0; i < nv; ++i) {
    auto t = r.row(h[0], 3);
    int id = r.to_int(t[0]);
    if (id < 0 || id >= nv) r.fail("vertex id out of range");
    if (seen[id]) r.fail("duplicate vertex id " + t[0]);
    seen[id] = 1;
    b.pos[id] = Vec2(r.to_double(t[1]), r.to_double(t[2]));
  }
  h = r.section(prefix + "-EDGES", 2);
  int ne = r.to_int(h[1]);
  b.ev.assign(ne, {0, 0});
  b.tv.assign(ne, {0, 0});
  b.shift.assign(ne, {0, 0});
  seen.assign(ne, 0);
  for (int i = 0; i < ne; ++i) {
    auto t = r.row(h[0], 7);
    int id = r.to_int(t[0]);
    if (id < 0 || id >= ne) r.fail("edge id out of range");
    if (seen[id]) r.fail("duplicate edge id " + t[0]);
    seen[id] = 1;
    b.ev[id] = {r.to_int(t[1]), r.to_int(t[2])};
    b.tv[id] = {r.to_int(t[3]), r.to_int(t[4])};
    b.shift[id] = {r.to_int(t[5]), r.to_int(t[6])};
    for (int s = 0; s < 2; ++s)
      if (b.ev[id][s] < 0 || b.ev[id][s] >= nv) r.fail("edge references unknown vertex");
  }
  h = r.section(prefix + "-CELLS", 2);
  int nc = r.to_int(h[1]);
  b.cv.assign(nc, {});
  b.ce.assign(nc, {});
  b.cn.assign(nc, {});
  seen.assign(nc, 0);
  for (int i = 0; i < nc; ++i) {
    auto t = r.row(h[0], 2);
    int id = r.to_int(t[0]);
    if (id < 0 || id >= nc) r.fail("cell id out of range");
    if (seen[id]) r.fail("duplicate cell id " + t[0]);
    seen[id] = 1;
    int m = r.to_int(t[1]);
    if (m < 3 || t.size() != static_cast<size_t>(2 + 3 * m)) r.fail("cell row has wrong field count");
    for (int k = 0; k < m; ++k) {
      int v = r.to_int(t[2 + 3 * k]), e = r.to_int(t[3 + 3 * k]), n = r.to_int(t[4 + 3 * k]);
      if (v < 0 || v >= nv || e < 0 || e >= ne || (n != 1 && n != -1)) r.fail("cell row has invalid entry");
      b.cv[id].push_back(v);
      b.ce[id].push_back(e);
      b.cn[id].push_back(n);
    }
  }
  return b;
}

std::vector<int> read_map(Reader& r, const std::string& name, int n) {
  auto h = r.section(name, 2);
  if (r.to_int(h[1]) != n) r.fail(name + " count does not match entity count");
  std::vector<int> map(n, -1);
  for (int i = 0; i < n; ++i) {
    auto t = r.row(name, 2);
    int a = r.to_int(t[0]);
    if (a < 0 || a >= n || map[a] != -1) r.fail("bad or duplicate id in " + name);
    map[a] = r.to_int(t[1]);
  }
  return map;
}

}  // namespace

void save_mesh(const MeshPair& m, std::ostream& os) {
  const auto& t = m.topo;
  const auto& g = m.geom;
  os << std::setprecision(17);
  os << "TRISK-MESH 1\n";
  os << "GENERATOR " << (m.gen.kind.empty() ? "none" : m.gen.kind) << " " << m.gen.n << " " << m.gen.spacing << "\n";
  os << "LATTICE " << g.a1[0] << " " << g.a1[1] << " " << g.a2[0] << " " << g.a2[1] << "\n";
  write_grid(os, "STRAIGHT", g.vpos, t.edge_verts, t.t_ve, g.edge_shift, t.cell_verts, t.cell_edges, t.n_ec);
  write_grid(os, "TWISTED", g.tvpos, t.tedge_verts, t.tt_ve, g.tedge_shift, t.tcell_verts, t.tcell_edges, t.tn_ec);
  os << "DUALITY\n";
  auto wmap = [&](const char* name, const std::vector<int>& mp) {
    os << name << " " << mp.size() << "\n";
    for (size_t i = 0; i < mp.size(); ++i) os << i << " " << mp[i] << "\n";
  };
  wmap("VERTEX-TWISTED-CELL", t.dual_vertex);
  wmap("EDGE-TWISTED-EDGE", t.dual_edge);
  wmap("CELL-TWISTED-VERTEX", t.dual_cell);
  os << "GEOMETRY\n";
  os << "EDGE-MEASURES " << t.ne << "\n";
  for (int e = 0; e < t.ne; ++e)
    os << e << " " << g.edge_len[e] << " " << g.tedge_len[e] << " " << g.ext_area[e] << " " << g.ext_overlap[e][0]
       << " " << g.ext_overlap[e][1] << "\n";
  os << "CELL-AREAS " << t.nc << "\n";
  for (int c = 0; c < t.nc; ++c) os << c << " " << g.cell_area[c] << "\n";
  os << "TWISTED-CELL-AREAS " << t.nv << "\n";
  for (int v = 0; v < t.nv; ++v) {
    os << v << " " << g.tcell_area[v] << " " << g.overlap[v].size();
    for (double a : g.overlap[v]) os << " " << a;
    os << "\n";
  }
  os << "ORTHOGONAL " << (m.orthogonal ? 1 : 0) << "\n";
  os << "END\n";
}

void save_mesh(const MeshPair& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  save_mesh(m, os);
  if (!os) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

MeshPair load_mesh(std::istream& is) {
  Reader r(is);
  auto h = r.section("TRISK-MESH", 2);
  if (h[1] != "1") r.fail("unsupported format version " + h[1]);
  MeshPair m;
  h = r.section("GENERATOR", 4);
  m.gen.kind = h[1] == "none" ? "" : h[1];
  m.gen.n = r.to_int(h[2]);
  m.gen.spacing = r.to_double(h[3]);
  h = r.section("LATTICE", 5);
  m.geom.a1 = Vec2(r.to_double(h[1]), r.to_double(h[2]));
  m.geom.a2 = Vec2(r.to_double(h[3]), r.to_double(h[4]));

  GridBlock s = read_grid(r, "STRAIGHT");
  GridBlock tw = read_grid(r, "TWISTED");
  auto& t = m.topo;
  t.nv = static_cast<int>(s.pos.size());
  t.ne = static_cast<int>(s.ev.size());
  t.nc = static_cast<int>(s.ce.size());
  if ((int)tw.pos.size() != t.nc || (int)tw.ev.size() != t.ne || (int)tw.ce.size() != t.nv)
    throw Error(ErrorKind::LoadError, "twisted entity counts are not dual to straight counts");
  t.edge_verts = s.ev;
  t.t_ve = s.tv;
  t.cell_verts = s.cv;
  t.cell_edges = s.ce;
  t.n_ec = s.cn;
  m.geom.vpos = s.pos;
  m.geom.edge_shift = s.shift;

  r.section("DUALITY", 1);
  auto dv = read_map(r, "VERTEX-TWISTED-CELL", t.nv);
  auto de = read_map(r, "EDGE-TWISTED-EDGE", t.ne);
  auto dc = read_map(r, "CELL-TWISTED-VERTEX", t.nc);
  auto check_perm = [&](const std::vector<int>& p, const char* name) {
    std::set<int> u(p.begin(), p.end());
    if ((int)u.size() != (int)p.size() || *u.begin() < 0 || *u.rbegin() >= (int)p.size())
      throw Error(ErrorKind::LoadError, std::string("duality map ") + name + " is not a bijection");
  };
  check_perm(dv, "VERTEX-TWISTED-CELL");
  check_perm(de, "EDGE-TWISTED-EDGE");
  check_perm(dc, "CELL-TWISTED-VERTEX");

  complete_topology(t);

  // Twisted data in the file may use any numbering; translate to canonical
  // (dual) numbering and compare with the induced complex.
  std::vector<int> inv_dc(t.nc), inv_de(t.ne), inv_dv(t.nv);
  for (int i = 0; i < t.nc; ++i) inv_dc[dc[i]] = i;
  for (int i = 0; i < t.ne; ++i) inv_de[de[i]] = i;
  for (int i = 0; i < t.nv; ++i) inv_dv[dv[i]] = i;
  for (int fe = 0; fe < t.ne; ++fe) {
    int e = inv_de[fe];
    for (int k = 0; k < 2; ++k) {
      int tv = inv_dc[tw.ev[fe][k]];
      int slot = t.tedge_verts[e][0] == tv ? 0 : (t.tedge_verts[e][1] == tv ? 1 : -1);
      if (slot < 0 || t.tt_ve[e][slot] != tw.tv[fe][k])
        throw Error(ErrorKind::LoadError, "twisted edge " + std::to_string(fe) + " disagrees with induced orientation");
    }
  }
  for (int fc = 0; fc < t.nv; ++fc) {
    int v = inv_dv[fc];
    std::set<std::pair<int, int>> a, b;
    for (size_t k = 0; k < tw.ce[fc].size(); ++k) a.insert({inv_de[tw.ce[fc][k]], tw.cn[fc][k]});
    for (size_t k = 0; k < t.tcell_edges[v].size(); ++k) b.insert({t.tcell_edges[v][k], t.tn_ec[v][k]});
    if (a != b)
      throw Error(ErrorKind::LoadError, "twisted cell " + std::to_string(fc) + " disagrees with induced orientation");
  }

  std::vector<std::string> toks;
  if (!r.next(toks)) throw Error(ErrorKind::ParseError, "missing section END (unexpected end of file)");
  if (toks[0] == "GEOMETRY") {
    compute_geometry(m);  // positions, shifts, orthogonality; measures overwritten below
    for (int fc = 0; fc < t.nc; ++fc) m.geom.tvpos[inv_dc[fc]] = tw.pos[fc];
    h = r.section("EDGE-MEASURES", 2);
    if (r.to_int(h[1]) != t.ne) r.fail("EDGE-MEASURES count mismatch");
    for (int i = 0; i < t.ne; ++i) {
      auto x = r.row(h[0], 6);
      int e = r.to_int(x[0]);
      if (e < 0 || e >= t.ne) r.fail("edge id out of range");
      m.geom.edge_len[e] = r.to_double(x[1]);
      m.geom.tedge_len[e] = r.to_double(x[2]);
      m.geom.ext_area[e] = r.to_double(x[3]);
      m.geom.ext_overlap[e] = {r.to_double(x[4]), r.to_double(x[5])};
    }
    h = r.section("CELL-AREAS", 2);
    if (r.to_int(h[1]) != t.nc) r.fail("CELL-AREAS count mismatch");
    for (int i = 0; i < t.nc; ++i) {
      auto x = r.row(h[0], 2);
      int c = r.to_int(x[0]);
      if (c < 0 || c >= t.nc) r.fail("cell id out of range");
      m.geom.cell_area[c] = r.to_double(x[1]);
    }
    h = r.section("TWISTED-CELL-AREAS", 2);
    if (r.to_int(h[1]) != t.nv) r.fail("TWISTED-CELL-AREAS count mismatch");
    for (int i = 0; i < t.nv; ++i) {
      auto x = r.row(h[0], 3);
      int v = r.to_int(x[0]);
      if (v < 0 || v >= t.nv) r.fail("twisted cell id out of range");
      m.geom.tcell_area[v] = r.to_double(x[1]);
      int k = r.to_int(x[2]);
      if (k != (int)t.vert_cells[v].size() || x.size() != static_cast<size_t>(3 + k))
        r.fail("overlap count does not match vertex valence");
      for (int j = 0; j < k; ++j) m.geom.overlap[v][j] = r.to_double(x[3 + j]);
    }
    h = r.section("ORTHOGONAL", 2);
    m.orthogonal = r.to_int(h[1]) != 0;
    r.section("END", 1);
  } else if (toks[0] == "END") {
    compute_geometry(m);
  } else {
    r.fail("expected section GEOMETRY or END, found '" + toks[0] + "'");
  }

  auto rep = validate_mesh(m);
  if (!rep.ok()) {
    std::string msg = "mesh failed validation:";
    for (auto& f : rep.failures) msg += "\n  " + f;
    throw Error(ErrorKind::LoadError, msg);
  }
  return m;
}

MeshPair load_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open mesh file '" + path + "'");
  return load_mesh(is);
}

}  // namespace trisk
