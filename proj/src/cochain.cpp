#include "trisk/cochain.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "trisk/error.hpp"

namespace trisk {

namespace {

// Radon's 7-point rule, exact for degree 5 (barycentric a, b, weight)
struct TriPoint {
  double l1, l2, w;
};
const std::array<TriPoint, 7>& tri_rule() {
  static const std::array<TriPoint, 7> r = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w0 = 9.0 / 40.0, w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
    return std::array<TriPoint, 7>{{{1.0 / 3, 1.0 / 3, w0},
                                    {a1, a1, w1},
                                    {b1, a1, w1},
                                    {a1, b1, w1},
                                    {a2, a2, w2},
                                    {b2, a2, w2},
                                    {a2, b2, w2}}};
  }();
  return r;
}

const char* grid_name(Grid g) { return g == Grid::Straight ? "straight" : "twisted"; }

}  // namespace

std::string FormType::str() const {
  std::string s = std::string(grid_name(grid)) + " " + std::to_string(degree) + "-form";
  if (degree == 1) s += flavor == Flavor::Circulation ? " (circulation)" : flavor == Flavor::Flux ? " (flux)" : " (?)";
  return s;
}

int cell_count(const MeshPair& m, const FormType& t) {
  const auto& tp = m.topo;
  switch (t.degree) {
    case 0: return t.grid == Grid::Straight ? tp.nv : tp.ntv();
    case 1: return tp.ne;
    case 2: return t.grid == Grid::Straight ? tp.nc : tp.ntc();
  }
  throw Error(ErrorKind::WrongDegree, "degree must be 0, 1 or 2");
}

Cochain::Cochain(FormType t, Eigen::VectorXd v) : type(t), values(std::move(v)) {
  if (t.degree < 0 || t.degree > 2) throw Error(ErrorKind::WrongDegree, "degree must be 0, 1 or 2");
  if ((t.degree == 1) != (t.flavor != Flavor::None))
    throw Error(ErrorKind::TypeMismatch, "flavor must be set exactly for edge cochains");
}

Cochain Cochain::zeros(const MeshPair& m, FormType t) { return {t, Eigen::VectorXd::Zero(cell_count(m, t))}; }

Cochain Cochain::constant(const MeshPair& m, FormType t, double c) {
  return {t, Eigen::VectorXd::Constant(cell_count(m, t), c)};
}

double integrate_polygon(const std::vector<Vec2>& poly, const ScalarField& f) {
  Vec2 ctr = Vec2::Zero();
  for (auto& p : poly) ctr += p;
  ctr /= static_cast<double>(poly.size());
  double sum = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    double area = 0.5 * ((a - ctr)[0] * (b - ctr)[1] - (a - ctr)[1] * (b - ctr)[0]);
    double s = 0;
    for (const auto& q : tri_rule()) s += q.w * f(q.l1 * a + q.l2 * b + (1 - q.l1 - q.l2) * ctr);
    sum += area * s;
  }
  return sum;
}

double integrate_segment(const Vec2& a, const Vec2& b, const ScalarField& f) {
  static const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  static const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  static const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
  static const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
  const std::array<std::pair<double, double>, 4> gl = {{{-x2, w2}, {-x1, w1}, {x1, w1}, {x2, w2}}};
  Vec2 mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (auto [x, w] : gl) s += w * f(mid + x * half);
  return s * half.norm();
}

Cochain reduce_scalar(const MeshPair& m, const ScalarField& f, int k, Grid grid) {
  if (k == 1) throw Error(ErrorKind::WrongDegree, "reduce_scalar takes k = 0 or 2; use reduce_vector for edges");
  if (k != 0 && k != 2) throw Error(ErrorKind::WrongDegree, "degree must be 0 or 2");
  FormType t{grid, k, Flavor::None};
  Cochain out = Cochain::zeros(m, t);
  int n = cell_count(m, t);
  for (int i = 0; i < n; ++i) {
    if (k == 0) {
      out.values[i] = f(grid == Grid::Straight ? m.geom.vpos[i] : m.geom.tvpos[i]);
    } else {
      out.values[i] = integrate_polygon(grid == Grid::Straight ? cell_polygon(m, i) : tcell_polygon(m, i), f);
    }
  }
  return out;
}

Cochain reduce_vector(const MeshPair& m, const VectorField& X, Flavor flavor, Grid grid) {
  if (flavor == Flavor::None) throw Error(ErrorKind::TypeMismatch, "edge cochains need a flavor");
  FormType t{grid, 1, flavor};
  Cochain out = Cochain::zeros(m, t);
  for (int e = 0; e < m.topo.ne; ++e) {
    Vec2 a, b;
    if (grid == Grid::Straight) {
      a = m.geom.vpos[m.topo.edge_verts[e][0]];
      b = a + m.geom.edge_vector(m.topo, e);
    } else {
      auto q = tedge_endpoints(m, e);
      a = q[0];
      b = q[1];
    }
    Vec2 tan = (b - a).normalized();
    Vec2 dir = flavor == Flavor::Circulation ? tan : Vec2(tan[1], -tan[0]);
    out.values[e] = integrate_segment(a, b, [&](const Vec2& p) { return X(p).dot(dir); });
  }
  return out;
}

Eigen::VectorXd cell_measures(const MeshPair& m, const FormType& t) {
  const auto& g = m.geom;
  auto vec = [](const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); };
  switch (t.degree) {
    case 0: return Eigen::VectorXd::Ones(cell_count(m, t));
    case 1: return t.grid == Grid::Straight ? vec(g.edge_len) : vec(g.tedge_len);
    case 2: return t.grid == Grid::Straight ? vec(g.cell_area) : vec(g.tcell_area);
  }
  throw Error(ErrorKind::WrongDegree, "degree must be 0, 1 or 2");
}

Cochain scale_dofs(const MeshPair& m, const Eigen::VectorXd& points, FormType target) {
  if (target.degree != 1 && target.degree != 2)
    throw Error(ErrorKind::UnsupportedScaling, "no scaling defined for " + target.str());
  if (points.size() != cell_count(m, target))
    throw Error(ErrorKind::TypeMismatch, "point vector has wrong length for " + target.str());
  return {target, points.cwiseProduct(cell_measures(m, target))};
}

Eigen::VectorXd unscale_dofs(const MeshPair& m, const Cochain& c) {
  if (c.type.degree != 1 && c.type.degree != 2)
    throw Error(ErrorKind::UnsupportedScaling, "no scaling defined for " + c.type.str());
  return c.values.cwiseQuotient(cell_measures(m, c.type));
}

double topological_pairing(const Cochain& a, const Cochain& b) {
  const auto& ta = a.type;
  const auto& tb = b.type;
  if (ta.grid == tb.grid || ta.degree + tb.degree != 2)
    throw Error(ErrorKind::PairingTypeError, "cannot pair " + ta.str() + " with " + tb.str());
  if (ta.degree == 1 && ta.flavor == tb.flavor)
    throw Error(ErrorKind::PairingTypeError, "edge pairing needs complementary flavors: " + ta.str() + " with " + tb.str());
  if (a.values.size() != b.values.size()) throw Error(ErrorKind::PairingTypeError, "length mismatch");
  double s = a.values.dot(b.values);
  int k = ta.degree;
  if (ta.grid == Grid::Twisted && (k * (2 - k)) % 2 == 1) s = -s;
  return s;
}

Cochain reinterpret_flavor(const Cochain& c) {
  if (c.type.degree != 1) throw Error(ErrorKind::WrongDegree, "reinterpret_flavor needs an edge cochain");
  Cochain out = c;
  out.type.flavor = c.type.flavor == Flavor::Circulation ? Flavor::Flux : Flavor::Circulation;
  return out;
}

std::vector<Vec2> cell_locations(const MeshPair& m, const FormType& t) {
  const auto& g = m.geom;
  if (t.degree == 1) {
    std::vector<Vec2> p(m.topo.ne);
    for (int e = 0; e < m.topo.ne; ++e) p[e] = g.vpos[m.topo.edge_verts[e][0]] + 0.5 * g.edge_vector(m.topo, e);
    return p;
  }
  bool straight_pts = (t.grid == Grid::Straight) == (t.degree == 0);
  return straight_pts ? g.vpos : g.tvpos;
}

void write_field_table(std::ostream& os, const MeshPair& m, const Cochain& c, const std::string& name) {
  auto loc = cell_locations(m, c.type);
  Eigen::VectorXd pt = c.type.degree == 0 ? c.values : unscale_dofs(m, c);
  os << "# " << name << ": " << c.type.str() << "\n";
  os << "id\tx\ty\traw\tpointwise\n";
  os << std::setprecision(17);
  for (int i = 0; i < c.values.size(); ++i)
    os << i << "\t" << loc[i][0] << "\t" << loc[i][1] << "\t" << c.values[i] << "\t" << pt[i] << "\n";
}

}  // namespace trisk
