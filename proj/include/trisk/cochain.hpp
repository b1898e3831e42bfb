#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>

#include "trisk/mesh.hpp"

namespace trisk {

enum class Grid { Straight, Twisted };
enum class Flavor { None, Circulation, Flux };

struct FormType {
  Grid grid = Grid::Straight;
  int degree = 0;
  Flavor flavor = Flavor::None;

  bool operator==(const FormType&) const = default;
  std::string str() const;
};

inline FormType straight(int k, Flavor f = Flavor::None) { return {Grid::Straight, k, k == 1 ? f : Flavor::None}; }
inline FormType twisted(int k, Flavor f = Flavor::None) { return {Grid::Twisted, k, k == 1 ? f : Flavor::None}; }

/// Number of k-cells of the given grid.
int cell_count(const MeshPair& m, const FormType& t);

/// A discrete k-form: one real number per oriented k-cell.
struct Cochain {
  FormType type;
  Eigen::VectorXd values;

  Cochain() = default;
  Cochain(FormType t, Eigen::VectorXd v);
  static Cochain zeros(const MeshPair& m, FormType t);
  static Cochain constant(const MeshPair& m, FormType t, double c);
};

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

Cochain reduce_scalar(const MeshPair& m, const ScalarField& f, int k, Grid grid);
Cochain reduce_vector(const MeshPair& m, const VectorField& X, Flavor flavor, Grid grid);

/// Integral of f over a convex polygon (fan triangulation, degree-5 rule per triangle).
double integrate_polygon(const std::vector<Vec2>& poly, const ScalarField& f);
/// Integral of f along a segment (4-point Gauss–Legendre).
double integrate_segment(const Vec2& a, const Vec2& b, const ScalarField& f);

/// Measure of each k-cell (A_e, A_ẽ, A_c, A_c̃; 1 for vertices).
Eigen::VectorXd cell_measures(const MeshPair& m, const FormType& t);

/// Multiplies point values by the cell measure (only k = 1, 2 have a scaling).
Cochain scale_dofs(const MeshPair& m, const Eigen::VectorXd& points, FormType target);
Eigen::VectorXd unscale_dofs(const MeshPair& m, const Cochain& c);

double topological_pairing(const Cochain& a, const Cochain& b);
Cochain reinterpret_flavor(const Cochain& c);

/// Representative location of each k-cell: vertex, edge midpoint or the dual vertex.
std::vector<Vec2> cell_locations(const MeshPair& m, const FormType& t);

/// Tab-separated table: id, x, y, raw value, pointwise value.
void write_field_table(std::ostream& os, const MeshPair& m, const Cochain& c, const std::string& name);

}  // namespace trisk
