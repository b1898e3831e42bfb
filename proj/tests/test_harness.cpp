#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trisk/convergence.hpp"
#include "trisk/error.hpp"
#include "trisk/harness.hpp"

using namespace trisk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("trisk_test_" + name);
  fs::remove_all(p);
  return p;
}

int count_lines(const fs::path& p) {
  std::ifstream is(p);
  int n = 0;
  for (std::string line; std::getline(is, line);) ++n;
  return n;
}

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

TEST_CASE("config parsing") {
  RunConfig c = parse_config(R"({
    "mesh": {"generator": "trihex", "n": 4, "spacing": 0.5},
    "scheme": "trsk2010-pe",
    "physics": {"g": 2.0, "coriolis": 0.3},
    "initial_condition": {"preset": "gaussian-hill", "amplitude": 0.1},
    "integrator": {"kind": "implicit-midpoint", "dt": 0.01},
    "steps": 12
  })");
  CHECK(c.mesh == "trihex:4:0.5");
  CHECK(c.scheme.q == QVariant::PE);
  CHECK(c.g == 2.0);
  CHECK(c.coriolis.f0 == 0.3);
  CHECK(c.integrator.kind == IntegratorKind::ImplicitMidpoint);
  CHECK(c.steps == 12);

  CHECK(kind_of([] { parse_config(R"({"mesh": "quad:4", "bogus": 1})"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { parse_config(R"({"physics": {"gravity": 1}})"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { parse_config("{not json"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { load_config("/nonexistent/cfg.json"); }) == ErrorKind::IoError);
}

TEST_CASE("config validation") {
  RunConfig c = parse_config(R"({"mesh": "trihex:4", "scheme": "al81"})");
  CHECK(kind_of([&] { validate_config(c, mesh_from_spec(c.mesh)); }) == ErrorKind::ConfigError);
}

TEST_CASE("run writes one diagnostics row per output") {
  fs::path dir = scratch("run");
  RunConfig c = parse_config(R"({
    "mesh": "quad:6", "physics": {"g": 1, "coriolis": 0.5},
    "initial_condition": {"preset": "gaussian-hill", "amplitude": 0.05, "width": 0.2},
    "integrator": {"dt": 0.05}, "steps": 10,
    "output": {"cadence": 2, "snapshots": true, "vtk": true}
  })");
  c.output.dir = dir.string();
  std::ostringstream log;
  RunSummary s = run_simulation(c, log);
  CHECK(s.steps == 10);
  CHECK(count_lines(dir / "diagnostics.csv") == 1 + 6);
  CHECK(fs::exists(dir / "snapshot_000010.txt"));
  CHECK(fs::exists(dir / "h_000000.vtk"));
  CHECK(std::abs(s.final.mass - s.initial.mass) <= 1e-14 * s.initial.mass);

  // snapshot round trip
  MeshPair m = mesh_from_spec(c.mesh);
  ModelState st = read_snapshot((dir / "snapshot_000010.txt").string(), m);
  CHECK(st.time == doctest::Approx(0.5));
  CHECK(st.h.values.sum() == doctest::Approx(s.final.mass).epsilon(1e-15));

  // identical config, identical numbers
  fs::path dir2 = scratch("run2");
  c.output.dir = dir2.string();
  std::ostringstream log2;
  RunSummary s2 = run_simulation(c, log2);
  CHECK(s2.final.energy == s.final.energy);
  std::ifstream a(dir / "diagnostics.csv"), b(dir2 / "diagnostics.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("geostrophic initial condition is steady") {
  RunConfig c = parse_config(R"({
    "mesh": "trihex:4", "model": "linear", "physics": {"g": 1, "coriolis": 1},
    "initial_condition": {"preset": "geostrophic-balance", "amplitude": 0.01, "seed": 4}
  })");
  Model md = build_model(mesh_from_spec(c.mesh), c.scheme);
  PhysicsParams p = make_physics(md, c);
  InitialCondition ic = initial_condition(c.ic, md, p);
  Tendencies t = linearized_tendencies(md, ic.state, p, c.ic.H0);
  CHECK(t.dh.values.cwiseAbs().maxCoeff() <= 1e-12 * ic.state.h.values.cwiseAbs().maxCoeff());
  CHECK(t.du.values.cwiseAbs().maxCoeff() <= 1e-12 * ic.state.u.values.cwiseAbs().maxCoeff());
  CHECK(ic.state.u.values.cwiseAbs().maxCoeff() > 0);
}

TEST_CASE("periodic bump") {
  MeshPair m = build_periodic_quad(4, 0.5);
  PeriodicBump b{LatticeFrame(m.geom), 0.5, 0.5, 0.3};
  CHECK(b.value(Vec2(1.0, 1.0)) == doctest::Approx(1.0));
  CHECK(b.value(Vec2(0.2, 0.7)) == doctest::Approx(b.value(Vec2(2.2, 2.7))));
  double eps = 1e-6;
  Vec2 x(0.7, 1.3);
  Vec2 fd((b.value(x + Vec2(eps, 0)) - b.value(x - Vec2(eps, 0))) / (2 * eps),
          (b.value(x + Vec2(0, eps)) - b.value(x - Vec2(0, eps))) / (2 * eps));
  CHECK((b.grad(x) - fd).norm() < 1e-8);
}

TEST_CASE("convergence study argument errors") {
  CHECK(kind_of([] { convergence_study("div", "quad", {8}); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { convergence_study("div", "hex", {8, 16}); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { convergence_study("lap", "quad", {8, 16}); }) == ErrorKind::InvalidParameter);
  ConvergenceReport r = convergence_study("perp", "trihex", {8, 16});
  CHECK(r.rows.size() == 2);
  CHECK(r.rows[1].l2 < r.rows[0].l2);
}
