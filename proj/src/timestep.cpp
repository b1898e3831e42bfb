#include "trisk/timestep.hpp"

#include <sstream>

#include "trisk/error.hpp"

namespace trisk {

namespace {

thread_local int g_last_iterations = 0;

ModelState axpy(const ModelState& s, double a, const Tendencies& t) {
  ModelState out = s;
  out.u.values += a * t.du.values;
  out.h.values += a * t.dh.values;
  return out;
}

double rel_change(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  double diff = (a - b).cwiseAbs().maxCoeff();
  return scale > 0 ? diff / scale : diff;
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0)) throw Error(ErrorKind::InvalidParameter, "dt must be positive");
  if (!(cfg.tol > 0)) throw Error(ErrorKind::InvalidParameter, "midpoint tolerance must be positive");
  if (cfg.max_iter < 1) throw Error(ErrorKind::InvalidParameter, "midpoint max_iter must be at least 1");
}

ModelState rk4(const ModelState& s, double dt, const TendencyFn& f) {
  Tendencies k1 = f(s);
  Tendencies k2 = f(axpy(s, 0.5 * dt, k1));
  Tendencies k3 = f(axpy(s, 0.5 * dt, k2));
  Tendencies k4 = f(axpy(s, dt, k3));
  ModelState out = s;
  out.u.values += dt / 6.0 * (k1.du.values + 2.0 * k2.du.values + 2.0 * k3.du.values + k4.du.values);
  out.h.values += dt / 6.0 * (k1.dh.values + 2.0 * k2.dh.values + 2.0 * k3.dh.values + k4.dh.values);
  out.time = s.time + dt;
  return out;
}

ModelState midpoint(const ModelState& s, const IntegratorConfig& cfg, const TendencyFn& f) {
  ModelState next = axpy(s, cfg.dt, f(s));
  std::vector<double> history;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    ModelState mid = s;
    mid.u.values = 0.5 * (s.u.values + next.u.values);
    mid.h.values = 0.5 * (s.h.values + next.h.values);
    mid.time = s.time + 0.5 * cfg.dt;
    ModelState cand = axpy(s, cfg.dt, f(mid));
    double r = std::max(rel_change(cand.u.values, next.u.values), rel_change(cand.h.values, next.h.values));
    history.push_back(r);
    next = std::move(cand);
    if (r < cfg.tol) {
      g_last_iterations = it;
      next.time = s.time + cfg.dt;
      return next;
    }
  }
  std::ostringstream os;
  os << "implicit midpoint did not reach tolerance " << cfg.tol << " in " << cfg.max_iter << " iterations; residuals";
  size_t from = history.size() > 10 ? history.size() - 10 : 0;
  if (from > 0) os << " (last 10)";
  os << ":";
  for (size_t i = from; i < history.size(); ++i) os << " " << history[i];
  throw Error(ErrorKind::IntegratorDivergence, os.str());
}

}  // namespace

const char* to_string(IntegratorKind k) { return k == IntegratorKind::RK4 ? "rk4" : "implicit-midpoint"; }

IntegratorKind parse_integrator(const std::string& s) {
  if (s == "rk4") return IntegratorKind::RK4;
  if (s == "implicit-midpoint") return IntegratorKind::ImplicitMidpoint;
  throw Error(ErrorKind::InvalidParameter, "unknown integrator '" + s + "' (rk4 | implicit-midpoint)");
}

int last_midpoint_iterations() { return g_last_iterations; }

ModelState step(const ModelState& s, const IntegratorConfig& cfg, const TendencyFn& rhs) {
  validate(cfg);
  if (cfg.kind == IntegratorKind::RK4) {
    g_last_iterations = 0;
    return rk4(s, cfg.dt, rhs);
  }
  return midpoint(s, cfg, rhs);
}

Trajectory run(const ModelState& s0, const IntegratorConfig& cfg, int n_steps, const TendencyFn& rhs,
               const RunCallbacks& cb) {
  validate(cfg);
  if (n_steps < 0) throw Error(ErrorKind::InvalidParameter, "number of steps must be non-negative");
  if (cb.cadence < 1) throw Error(ErrorKind::InvalidParameter, "output cadence must be at least 1");
  Trajectory tr;
  tr.final_state = s0;
  auto emit = [&](int n) {
    if (cb.on_output) cb.on_output(n, tr.final_state);
    tr.output_times.push_back(tr.final_state.time);
  };
  emit(0);
  for (int n = 1; n <= n_steps; ++n) {
    try {
      tr.final_state = step(tr.final_state, cfg, rhs);
    } catch (const Error& e) {
      std::string msg = e.what();
      auto colon = msg.find(": ");
      throw Error(e.kind(), "step " + std::to_string(n) + ": " + msg.substr(colon == std::string::npos ? 0 : colon + 2));
    }
    tr.steps = n;
    if (n % cb.cadence == 0) emit(n);
  }
  return tr;
}

}  // namespace trisk
