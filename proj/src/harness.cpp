#include "trisk/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <Eigen/LU>
#include <json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "trisk/error.hpp"

namespace trisk {

using json = nlohmann::json;

LatticeFrame::LatticeFrame(const MeshGeometry& g) {
  Eigen::Matrix2d A;
  A.col(0) = g.a1;
  A.col(1) = g.a2;
  Eigen::Matrix2d B = 2 * std::numbers::pi * A.inverse();  // rows are b1, b2
  b1 = B.row(0).transpose();
  b2 = B.row(1).transpose();
}

std::array<double, 2> LatticeFrame::phases(const Vec2& x) const { return {b1.dot(x), b2.dot(x)}; }

double PeriodicBump::value(const Vec2& x) const {
  auto th = frame.phases(x);
  const double tau = 2 * std::numbers::pi;
  return std::exp((std::cos(th[0] - tau * c1) + std::cos(th[1] - tau * c2) - 2.0) / (width * width));
}

Vec2 PeriodicBump::grad(const Vec2& x) const {
  auto th = frame.phases(x);
  const double tau = 2 * std::numbers::pi;
  double v = value(x) / (width * width);
  return -v * (std::sin(th[0] - tau * c1) * frame.b1 + std::sin(th[1] - tau * c2) * frame.b2);
}

// ---------------------------------------------------------------------------
// configuration

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) config_fail(where + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) config_fail("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void get(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    config_fail("bad value for '" + std::string(key) + "' in " + where);
  }
}

RKind parse_rkind(const std::string& s) {
  if (s == "metric") return RKind::Metric;
  if (s == "combinatorial") return RKind::Combinatorial;
  config_fail("R must be metric or combinatorial, got '" + s + "'");
}

TKind parse_tkind(const std::string& s) {
  if (s == "metric") return TKind::Metric;
  if (s == "combinatorial") return TKind::Combinatorial;
  config_fail("T must be metric or combinatorial, got '" + s + "'");
}

QVariant parse_q(const std::string& s) {
  if (s == "TE") return QVariant::TE;
  if (s == "PE") return QVariant::PE;
  if (s == "DBL") return QVariant::DBL;
  if (s == "ACCUR") return QVariant::ACCUR;
  config_fail("Q must be TE, PE, DBL or ACCUR, got '" + s + "'");
}

std::string mesh_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  allow_keys(j, "mesh", {"generator", "n", "spacing", "file"});
  if (j.contains("file")) {
    if (j.size() != 1) config_fail("mesh.file excludes generator keys");
    return j.at("file").get<std::string>();
  }
  std::string gen = "quad";
  int n = 8;
  double spacing = 1.0;
  get(j, "generator", gen, "mesh");
  get(j, "n", n, "mesh");
  get(j, "spacing", spacing, "mesh");
  std::ostringstream os;
  os << std::setprecision(17) << gen << ":" << n << ":" << spacing;
  return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  RunConfig c;
  allow_keys(j, "config", {"mesh", "scheme", "model", "physics", "initial_condition", "integrator", "steps", "output"});
  if (j.contains("mesh")) c.mesh = mesh_string(j.at("mesh"));
  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    if (s.is_string()) {
      try {
        c.scheme = scheme_preset(s.get<std::string>());
      } catch (const Error& e) {
        config_fail(e.what());
      }
    } else {
      allow_keys(s, "scheme", {"preset", "R", "Q", "T", "hodge"});
      if (s.contains("preset")) {
        std::string name;
        get(s, "preset", name, "scheme");
        try {
          c.scheme = scheme_preset(name);
        } catch (const Error& e) {
          config_fail(e.what());
        }
      }
      std::string r = to_string(c.scheme.r), q = to_string(c.scheme.q), t = to_string(c.scheme.t);
      get(s, "R", r, "scheme");
      get(s, "Q", q, "scheme");
      get(s, "T", t, "scheme");
      get(s, "hodge", c.scheme.hodge, "scheme");
      c.scheme.r = parse_rkind(r);
      c.scheme.q = parse_q(q);
      c.scheme.t = parse_tkind(t);
      if (c.scheme.hodge != "voronoi") config_fail("hodge must be voronoi");
      if (!s.contains("preset")) c.scheme.preset.clear();
    }
  }
  get(j, "model", c.model, "config");
  if (c.model != "nonlinear" && c.model != "linear") config_fail("model must be nonlinear or linear");
  if (j.contains("physics")) {
    const json& p = j.at("physics");
    allow_keys(p, "physics", {"g", "coriolis", "topography"});
    get(p, "g", c.g, "physics");
    if (!(c.g > 0)) config_fail("physics.g must be positive");
    if (p.contains("coriolis")) {
      const json& f = p.at("coriolis");
      if (f.is_number()) {
        c.coriolis.f0 = f.get<double>();
      } else {
        allow_keys(f, "physics.coriolis", {"kind", "f0", "f1"});
        get(f, "kind", c.coriolis.kind, "physics.coriolis");
        get(f, "f0", c.coriolis.f0, "physics.coriolis");
        get(f, "f1", c.coriolis.f1, "physics.coriolis");
        if (c.coriolis.kind != "constant" && c.coriolis.kind != "sinusoidal")
          config_fail("coriolis kind must be constant or sinusoidal");
      }
    }
    if (p.contains("topography")) {
      const json& t = p.at("topography");
      allow_keys(t, "physics.topography", {"kind", "amplitude", "width", "center"});
      get(t, "kind", c.topography.kind, "physics.topography");
      get(t, "amplitude", c.topography.amplitude, "physics.topography");
      get(t, "width", c.topography.width, "physics.topography");
      get(t, "center", c.topography.center, "physics.topography");
      if (c.topography.kind != "none" && c.topography.kind != "gaussian")
        config_fail("topography kind must be none or gaussian");
      if (!(c.topography.width > 0)) config_fail("topography width must be positive");
    }
  }
  if (j.contains("initial_condition")) {
    const json& ic = j.at("initial_condition");
    const char* w = "initial_condition";
    allow_keys(ic, w, {"preset", "H0", "amplitude", "width", "center", "center2", "q0", "seed"});
    get(ic, "preset", c.ic.preset, w);
    get(ic, "H0", c.ic.H0, w);
    get(ic, "amplitude", c.ic.amplitude, w);
    get(ic, "width", c.ic.width, w);
    get(ic, "center", c.ic.center, w);
    get(ic, "center2", c.ic.center2, w);
    get(ic, "q0", c.ic.q0, w);
    get(ic, "seed", c.ic.seed, w);
    static const std::set<std::string> presets = {"rest", "gaussian-hill", "vortex-pair", "geostrophic-balance",
                                                  "uniform-pv"};
    if (!presets.count(c.ic.preset)) config_fail("unknown initial condition preset '" + c.ic.preset + "'");
    if (!(c.ic.H0 > 0)) config_fail("initial_condition.H0 must be positive");
    if (!(c.ic.width > 0)) config_fail("initial_condition.width must be positive");
  }
  if (j.contains("integrator")) {
    const json& it = j.at("integrator");
    allow_keys(it, "integrator", {"kind", "dt", "tol", "max_iter"});
    std::string kind = to_string(c.integrator.kind);
    get(it, "kind", kind, "integrator");
    try {
      c.integrator.kind = parse_integrator(kind);
    } catch (const Error& e) {
      config_fail(e.what());
    }
    get(it, "dt", c.integrator.dt, "integrator");
    get(it, "tol", c.integrator.tol, "integrator");
    get(it, "max_iter", c.integrator.max_iter, "integrator");
    if (!(c.integrator.dt > 0)) config_fail("integrator.dt must be positive");
    if (!(c.integrator.tol > 0)) config_fail("integrator.tol must be positive");
  }
  get(j, "steps", c.steps, "config");
  if (c.steps < 0) config_fail("steps must be non-negative");
  if (j.contains("output")) {
    const json& o = j.at("output");
    allow_keys(o, "output", {"dir", "cadence", "snapshots", "vtk"});
    get(o, "dir", c.output.dir, "output");
    get(o, "cadence", c.output.cadence, "output");
    get(o, "snapshots", c.output.snapshots, "output");
    get(o, "vtk", c.output.vtk, "output");
    if (c.output.cadence < 1) config_fail("output.cadence must be at least 1");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& cfg, const MeshPair& m) {
  if (cfg.scheme.q == QVariant::DBL) {
    std::string why;
    RWedge R = build_R(m, cfg.scheme.r);
    if (!dbl_supported(m, R, &why)) config_fail("scheme uses DBL but " + why);
  }
  if (!m.orthogonal) config_fail("the voronoi Hodge star needs an orthogonal mesh");
  if (cfg.ic.preset == "geostrophic-balance" && cfg.coriolis.kind != "constant")
    config_fail("geostrophic-balance needs constant coriolis");
}

PhysicsParams make_physics(const Model& md, const RunConfig& cfg) {
  const MeshPair& m = md.mesh;
  LatticeFrame L(m.geom);
  const auto& cor = cfg.coriolis;
  Cochain f2 = reduce_scalar(
      m, [&](const Vec2& x) { return cor.f0 + (cor.kind == "sinusoidal" ? cor.f1 * std::sin(L.phases(x)[1]) : 0.0); },
      2, Grid::Straight);
  Cochain hs = Cochain::zeros(m, twisted(2));
  if (cfg.topography.kind == "gaussian") {
    PeriodicBump b{L, cfg.topography.center[0], cfg.topography.center[1], cfg.topography.width};
    hs = reduce_scalar(m, [&](const Vec2& x) { return cfg.topography.amplitude * b.value(x); }, 2, Grid::Twisted);
  }
  return make_physics(md.ops, cfg.g, std::move(f2), std::move(hs));
}

// ---------------------------------------------------------------------------
// initial conditions

namespace {

Cochain velocity_from_streamfunction(const MeshPair& m, const std::function<Vec2(const Vec2&)>& grad_psi) {
  return reduce_vector(
      m, [&](const Vec2& x) {
        Vec2 g = grad_psi(x);
        return Vec2(-g[1], g[0]);
      },
      Flavor::Circulation, Grid::Straight);
}

double constant_f(const MeshPair& m, const PhysicsParams& p) {
  double f0 = p.f2.values[0] / m.geom.cell_area[0];
  for (int c = 0; c < m.topo.nc; ++c)
    if (std::abs(p.f2.values[c] / m.geom.cell_area[c] - f0) > 1e-12 * std::max(1.0, std::abs(f0)))
      throw Error(ErrorKind::InvalidParameter, "geostrophic-balance needs a constant Coriolis parameter");
  return f0;
}

}  // namespace

InitialCondition initial_condition(const InitialConditionConfig& ic, const Model& md, const PhysicsParams& p) {
  const MeshPair& m = md.mesh;
  LatticeFrame L(m.geom);
  PeriodicBump b1{L, ic.center[0], ic.center[1], ic.width};
  PeriodicBump b2{L, ic.center2[0], ic.center2[1], ic.width};
  InitialCondition out;
  ModelState& s = out.state;
  s.u = Cochain::zeros(m, straight(1, Flavor::Circulation));
  s.h = reduce_scalar(m, [&](const Vec2&) { return ic.H0; }, 2, Grid::Twisted);

  if (ic.preset == "rest") {
  } else if (ic.preset == "gaussian-hill") {
    s.h = reduce_scalar(m, [&](const Vec2& x) { return ic.H0 + ic.amplitude * b1.value(x); }, 2, Grid::Twisted);
  } else if (ic.preset == "vortex-pair" || ic.preset == "uniform-pv") {
    // psi = A (bump_1 - bump_2); thickness carries the matching geostrophic anomaly
    auto grad = [&](const Vec2& x) -> Vec2 { return ic.amplitude * (b1.grad(x) - b2.grad(x)); };
    s.u = velocity_from_streamfunction(m, grad);
    double f0 = p.f2.values.sum() / m.geom.domain_area();
    double gain = f0 / p.g;
    s.h = reduce_scalar(
        m, [&](const Vec2& x) { return ic.H0 + gain * ic.amplitude * (b1.value(x) - b2.value(x)); }, 2,
        Grid::Twisted);
    if (ic.preset == "uniform-pv") {
      Eigen::VectorXd f2 = ic.q0 * (md.R.mat * s.h.values) - md.ops.D2.mat * s.u.values;
      out.f2 = Cochain(straight(2), f2);
    }
  } else if (ic.preset == "geostrophic-balance") {
    double f0 = constant_f(m, p);
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Eigen::VectorXd psi(m.topo.ntv());
    for (int i = 0; i < psi.size(); ++i) psi[i] = ic.amplitude * U(rng);
    Eigen::VectorXd ut = md.ops.Dt1.mat * psi;
    s.u.values = ut.cwiseQuotient(md.ops.hodge.H1.mat.diagonal());
    Eigen::VectorXd h0 = -(f0 / p.g) * (md.R.mat.transpose() * psi);
    Eigen::VectorXd area = Eigen::Map<const Eigen::VectorXd>(m.geom.tcell_area.data(), m.topo.nv);
    s.h.values = area.cwiseProduct(Eigen::VectorXd::Constant(m.topo.nv, ic.H0) + h0);
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown initial condition preset '" + ic.preset + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// output

void write_diagnostics_header(std::ostream& os) {
  os << "step,time,mass,circulation,energy,potential_enstrophy,dH_dt,dPE_dt,min_h,max_u\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& r) {
  os << std::setprecision(17) << r.step << "," << r.time << "," << r.d.mass << "," << r.d.circulation << ","
     << r.d.energy << "," << r.d.potential_enstrophy << "," << r.dH_dt << "," << r.dPE_dt << "," << r.d.min_h << ","
     << r.d.max_u << "\n";
}

void write_snapshot(const std::string& path, const MeshPair& m, const ModelState& s) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write snapshot " + path);
  os << std::setprecision(17) << "# time " << s.time << "\n";
  write_field_table(os, m, s.h, "h");
  write_field_table(os, m, s.u, "u");
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

ModelState read_snapshot(const std::string& path, const MeshPair& m) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open snapshot " + path);
  ModelState s;
  s.h = Cochain::zeros(m, twisted(2));
  s.u = Cochain::zeros(m, straight(1, Flavor::Circulation));
  Cochain* cur = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# time ", 0) == 0) {
      s.time = std::stod(line.substr(7));
    } else if (line.rfind("# h:", 0) == 0) {
      cur = &s.h;
    } else if (line.rfind("# u:", 0) == 0) {
      cur = &s.u;
    } else if (cur && !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) {
      std::istringstream ls(line);
      int id;
      double x, y, raw;
      if (!(ls >> id >> x >> y >> raw) || id < 0 || id >= cur->values.size())
        throw Error(ErrorKind::IoError, path + ": bad row '" + line + "'");
      cur->values[id] = raw;
    }
  }
  return s;
}

void write_vtk(const std::string& path, const MeshPair& m, const ModelState& s) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  // thickness lives on the twisted cells, so the dual polygons are written
  std::vector<std::vector<Vec2>> polys;
  size_t npts = 0;
  for (int v = 0; v < m.topo.nv; ++v) {
    polys.push_back(tcell_polygon(m, v));
    npts += polys.back().size();
  }
  os << std::setprecision(17);
  os << "# vtk DataFile Version 3.0\nthickness on twisted cells, t = " << s.time << "\nASCII\nDATASET POLYDATA\n";
  os << "POINTS " << npts << " double\n";
  for (auto& p : polys)
    for (auto& x : p) os << x[0] << " " << x[1] << " 0\n";
  os << "POLYGONS " << polys.size() << " " << npts + polys.size() << "\n";
  size_t k = 0;
  for (auto& p : polys) {
    os << p.size();
    for (size_t i = 0; i < p.size(); ++i) os << " " << k++;
    os << "\n";
  }
  os << "CELL_DATA " << polys.size() << "\nSCALARS h double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < m.topo.nv; ++v) os << s.h.values[v] / m.geom.tcell_area[v] << "\n";
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------

RunSummary run_simulation(const RunConfig& cfg, std::ostream& log) {
  MeshPair mesh = mesh_from_spec(cfg.mesh);
  validate_config(cfg, mesh);
  Model md = build_model(mesh, cfg.scheme);
  PhysicsParams p = make_physics(md, cfg);
  InitialCondition ic = initial_condition(cfg.ic, md, p);
  if (ic.f2) p = make_physics(md.ops, p.g, *ic.f2, p.hs2);

  const bool linear = cfg.model == "linear";
  TendencyFn rhs = [&](const ModelState& s) {
    return linear ? linearized_tendencies(md, s, p, cfg.ic.H0) : tendencies(md, s, p);
  };

  RunSummary sum;
  {
    Tendencies t0 = rhs(ic.state);
    double su = ic.state.u.values.cwiseAbs().maxCoeff(), sh = ic.state.h.values.cwiseAbs().maxCoeff();
    sum.tendency_norm_u = t0.du.values.cwiseAbs().maxCoeff() / std::max(su, 1e-300);
    sum.tendency_norm_h = t0.dh.values.cwiseAbs().maxCoeff() / std::max(sh, 1e-300);
  }
  log << std::setprecision(6) << "mesh " << cfg.mesh << " (" << mesh.topo.nv << " vertices, " << mesh.topo.ne
      << " edges, " << mesh.topo.nc << " cells)\n";
  log << "scheme " << (cfg.scheme.preset.empty() ? "custom" : cfg.scheme.preset) << " " << describe(cfg.scheme)
      << ", model " << cfg.model << ", integrator " << to_string(cfg.integrator.kind) << " dt " << cfg.integrator.dt
      << "\n";
  log << std::setprecision(3) << "initial tendency norms (max-norm relative to state): dh " << sum.tendency_norm_h
      << ", du " << sum.tendency_norm_u << "\n";

  std::ofstream csv;
  if (!cfg.output.dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output.dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + cfg.output.dir + ": " + ec.message());
    sum.csv_path = (std::filesystem::path(cfg.output.dir) / "diagnostics.csv").string();
    csv.open(sum.csv_path);
    if (!csv) throw Error(ErrorKind::IoError, "cannot write " + sum.csv_path);
    write_diagnostics_header(csv);
  }

  RunCallbacks cb;
  cb.cadence = cfg.output.cadence;
  cb.on_output = [&](int n, const ModelState& s) {
    DiagnosticsRow row;
    row.step = n;
    row.time = s.time;
    row.d = diagnostics(md, s, p);
    if (!linear) {
      InvariantRates r = invariant_rates(md, s, p, rhs(s));
      row.dH_dt = r.dH;
      row.dPE_dt = r.dPE;
    }
    if (n == 0) sum.initial = row.d;
    sum.final = row.d;
    if (csv.is_open()) write_diagnostics_row(csv, row);
    if (!cfg.output.dir.empty()) {
      std::ostringstream name;
      name << std::setw(6) << std::setfill('0') << n;
      auto base = std::filesystem::path(cfg.output.dir);
      if (cfg.output.snapshots) write_snapshot((base / ("snapshot_" + name.str() + ".txt")).string(), mesh, s);
      if (cfg.output.vtk) write_vtk((base / ("h_" + name.str() + ".vtk")).string(), mesh, s);
    }
  };
  Trajectory tr = run(ic.state, cfg.integrator, cfg.steps, rhs, cb);
  sum.steps = tr.steps;
  if (tr.steps % cfg.output.cadence != 0) sum.final = diagnostics(md, tr.final_state, p);
  log << std::setprecision(17) << "steps " << tr.steps << ", final time " << tr.final_state.time << "\n";
  auto rel = [](double a, double b) { return b != 0 ? (a - b) / std::abs(b) : a - b; };
  log << std::setprecision(3) << "relative change: mass " << rel(sum.final.mass, sum.initial.mass) << ", energy "
      << rel(sum.final.energy, sum.initial.energy) << ", potential enstrophy "
      << rel(sum.final.potential_enstrophy, sum.initial.potential_enstrophy) << "\n";
  return sum;
}

}  // namespace trisk
