#include <doctest.h>

#include <cmath>

#include "trisk/error.hpp"
#include "trisk/timestep.hpp"

using namespace trisk;

namespace {

/// Harmonic oscillator packed into (u, h): du = -h, dh = u.
TendencyFn oscillator() {
  return [](const ModelState& s) {
    Tendencies t;
    t.du = Cochain(s.u.type, -s.h.values);
    t.dh = Cochain(s.h.type, s.u.values);
    return t;
  };
}

ModelState unit_state() {
  ModelState s;
  s.u = Cochain(straight(1, Flavor::Circulation), Eigen::VectorXd::Constant(1, 1.0));
  s.h = Cochain(twisted(2), Eigen::VectorXd::Constant(1, 0.0));
  return s;
}

double error_after(IntegratorKind k, double dt) {
  IntegratorConfig cfg{k, dt};
  int n = static_cast<int>(std::lround(1.0 / dt));
  Trajectory tr = run(unit_state(), cfg, n, oscillator());
  return std::abs(tr.final_state.u.values[0] - std::cos(1.0));
}

}  // namespace

TEST_CASE("integrator orders on an oscillator") {
  double r4 = std::log2(error_after(IntegratorKind::RK4, 0.1) / error_after(IntegratorKind::RK4, 0.05));
  CHECK(r4 == doctest::Approx(4.0).epsilon(0.05));
  double r2 = std::log2(error_after(IntegratorKind::ImplicitMidpoint, 0.1) /
                        error_after(IntegratorKind::ImplicitMidpoint, 0.05));
  CHECK(r2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("implicit midpoint preserves a quadratic invariant") {
  IntegratorConfig cfg{IntegratorKind::ImplicitMidpoint, 0.3};
  Trajectory tr = run(unit_state(), cfg, 100, oscillator());
  double r2 = tr.final_state.u.values.squaredNorm() + tr.final_state.h.values.squaredNorm();
  CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(last_midpoint_iterations() > 0);
  CHECK(tr.final_state.time == doctest::Approx(30.0));
}

TEST_CASE("zero steps and output cadence") {
  IntegratorConfig cfg{IntegratorKind::RK4, 0.1};
  std::vector<int> seen;
  RunCallbacks cb{3, [&](int k, const ModelState&) { seen.push_back(k); }};
  Trajectory t0 = run(unit_state(), cfg, 0, oscillator(), cb);
  CHECK(t0.steps == 0);
  CHECK(t0.final_state.u.values == unit_state().u.values);
  CHECK(seen == std::vector<int>{0});
  seen.clear();
  run(unit_state(), cfg, 7, oscillator(), cb);
  CHECK(seen == std::vector<int>{0, 3, 6});
}

TEST_CASE("parse integrator names") {
  CHECK(parse_integrator("rk4") == IntegratorKind::RK4);
  CHECK(parse_integrator("implicit-midpoint") == IntegratorKind::ImplicitMidpoint);
  try {
    parse_integrator("euler");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("midpoint divergence is reported") {
  // du = u^2 blows up; a huge step cannot converge
  TendencyFn rhs = [](const ModelState& s) {
    Tendencies t;
    t.du = Cochain(s.u.type, s.u.values.cwiseAbs2());
    t.dh = Cochain(s.h.type, Eigen::VectorXd::Zero(1));
    return t;
  };
  IntegratorConfig cfg{IntegratorKind::ImplicitMidpoint, 10.0, 1e-13, 30};
  try {
    run(unit_state(), cfg, 3, rhs);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IntegratorDivergence);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}
