#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trisk/swe.hpp"

namespace trisk {

enum class IntegratorKind { RK4, ImplicitMidpoint };

const char* to_string(IntegratorKind k);
/// "rk4" or "implicit-midpoint"; throws invalid-parameter otherwise.
IntegratorKind parse_integrator(const std::string& s);

struct IntegratorConfig {
  IntegratorKind kind = IntegratorKind::RK4;
  double dt = 1.0;
  double tol = 1e-13;  // relative change between midpoint iterates
  int max_iter = 200;
};

using TendencyFn = std::function<Tendencies(const ModelState&)>;

/// Advances one step of size cfg.dt.
ModelState step(const ModelState& s, const IntegratorConfig& cfg, const TendencyFn& rhs);

/// Iteration count of the last implicit-midpoint step on this thread (0 for rk4).
int last_midpoint_iterations();

struct RunCallbacks {
  int cadence = 1;
  /// Called with (step index, state) at step 0 and every cadence steps.
  std::function<void(int, const ModelState&)> on_output;
};

struct Trajectory {
  ModelState final_state;
  int steps = 0;
  std::vector<double> output_times;
};

Trajectory run(const ModelState& s0, const IntegratorConfig& cfg, int n_steps, const TendencyFn& rhs,
               const RunCallbacks& cb = {});

}  // namespace trisk
