#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace trisk {

using Vec2 = Eigen::Vector2d;

/// Combinatorial data for the straight grid and its induced twisted dual.
///
/// Orientation index order is vertex-then-edge (t_ve). Twisted entities are
/// numbered canonically: twisted vertex i is dual to straight cell i, twisted
/// edge i to straight edge i, twisted cell i to straight vertex i. The duality
/// arrays are kept explicitly so validation and file I/O can check them.
struct MeshTopology {
  int nv = 0, ne = 0, nc = 0;

  // straight grid
  std::vector<std::array<int, 2>> edge_verts;   // VE(e) = {tail, head}
  std::vector<std::array<int, 2>> t_ve;         // t_{tail,e}, t_{head,e}
  std::vector<std::vector<int>> cell_edges;     // EC(c), counterclockwise loop
  std::vector<std::vector<int>> n_ec;           // aligned with cell_edges
  std::vector<std::vector<int>> cell_verts;     // VC(c); entry k starts edge k

  // twisted grid
  std::vector<std::array<int, 2>> tedge_verts;  // VE(ẽ) as twisted vertex ids
  std::vector<std::array<int, 2>> tt_ve;        // t̃ aligned with tedge_verts
  std::vector<std::vector<int>> tcell_edges;    // EC(c̃), counterclockwise loop
  std::vector<std::vector<int>> tn_ec;          // ñ aligned with tcell_edges
  std::vector<std::vector<int>> tcell_verts;    // twisted vertex k starts edge k

  // duality: straight vertex -> twisted cell, edge -> twisted edge, cell -> twisted vertex
  std::vector<int> dual_vertex, dual_edge, dual_cell;

  // derived stencils
  std::vector<std::array<int, 2>> edge_cells;   // CE(e) = {cell with n=-1, cell with n=+1}
  std::vector<std::vector<int>> vert_edges;     // EV(v), counterclockwise around v
  std::vector<std::vector<int>> vert_cells;     // CV(v); vert_cells[v][k] lies between edges k and k+1
  std::vector<std::vector<int>> ecp;            // EC(CE(e)) without e, sorted unique

  int ntv() const { return nc; }
  int nte() const { return ne; }
  int ntc() const { return nv; }
};

/// Sizes, coordinates and overlap areas. Periodicity is described by the two
/// lattice vectors; edges carry integer lattice shifts so that
/// pos[tail] + d_e = pos[head] + shift[0]*a1 + shift[1]*a2.
struct MeshGeometry {
  Vec2 a1{1, 0}, a2{0, 1};
  std::vector<Vec2> vpos;                       // straight vertices (fundamental domain)
  std::vector<Vec2> tvpos;                      // twisted vertices = cell circumcenters
  std::vector<std::array<int, 2>> edge_shift;
  std::vector<std::array<int, 2>> tedge_shift;

  std::vector<double> edge_len;                 // A_e
  std::vector<double> tedge_len;                // A_ẽ
  std::vector<double> cell_area;                // A_c
  std::vector<double> tcell_area;               // A_c̃
  std::vector<std::vector<double>> overlap;     // A_{c̃(v), vert_cells[v][k]}
  std::vector<double> ext_area;                 // Ã_ẽ (kite)
  std::vector<std::array<double, 2>> ext_overlap;  // A_{c̃,ẽ} for c̃ dual to tail, head

  double domain_area() const;
  Vec2 edge_vector(const MeshTopology& t, int e) const;
};

struct GeneratorInfo {
  std::string kind;  // "quad", "trihex" or empty
  int n = 0;
  double spacing = 0;
};

struct MeshPair {
  MeshTopology topo;
  MeshGeometry geom;
  GeneratorInfo gen;
  bool orthogonal = false;
};

MeshPair build_periodic_quad(int n, double spacing);
MeshPair build_periodic_trihex(int n, double spacing);

/// Fills the twisted orientation from the straight one:
/// t̃_{ṽ,ẽ} = n_{e,c} and ñ_{ẽ,c̃} = −t_{v,e}.
void induce_twisted_orientation(MeshTopology& t);

/// Rebuilds twisted incidence, derived stencils and orientation from the
/// straight grid.
void complete_topology(MeshTopology& t);

/// Recomputes every geometric quantity from vertex positions and edge shifts.
void compute_geometry(MeshPair& m);

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ValidationReport validate_mesh(const MeshPair& m, double tol = 1e-12);

void save_mesh(const MeshPair& m, std::ostream& os);
void save_mesh(const MeshPair& m, const std::string& path);
MeshPair load_mesh(std::istream& is);
MeshPair load_mesh_file(const std::string& path);

/// Parses "quad:8", "quad:9:0.5", "trihex:4" or a file path.
MeshPair mesh_from_spec(const std::string& spec);

// polygon helpers shared with the reduction code
double polygon_area(const std::vector<Vec2>& p);
std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip);
Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c);

/// Straight cell polygon, unwrapped, starting at cell_verts[c][0] = vpos.
std::vector<Vec2> cell_polygon(const MeshPair& m, int c);
/// Twisted cell polygon around straight vertex v, with v at vpos[v].
std::vector<Vec2> tcell_polygon(const MeshPair& m, int v);
/// Endpoints of twisted edge e expressed in the frame where the straight edge
/// starts at vpos[tail].
std::array<Vec2, 2> tedge_endpoints(const MeshPair& m, int e);

}  // namespace trisk
