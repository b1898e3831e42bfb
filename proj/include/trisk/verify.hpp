#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trisk/harness.hpp"

namespace trisk {

/// One named property: pass when value <= tol. Diagnostic items are reported but never fail.
struct CheckResult {
  std::string group, name;
  double value = 0, tol = 0;
  bool pass = true;
  bool diagnostic = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int samples = 100;
  bool time_tests = true;
};

using Checks = std::vector<CheckResult>;

Checks verify_operators(const MeshPair& m, const VerifyOptions& o);
Checks verify_wedges(const MeshPair& m, const VerifyOptions& o);
Checks verify_rates(const MeshPair& m, const VerifyOptions& o);
/// Uniform-PV run: 100 rk4 steps with Q^TE at CFL 0.3.
Checks verify_uniform_pv(const MeshPair& m, const VerifyOptions& o, int steps = 100);
/// Discretely balanced linear state: zero tendency, then a 50-step run.
Checks verify_geostrophic(const MeshPair& m, const VerifyOptions& o, int steps = 50);
/// The straight and twisted mass-flux branches agree for a diagonal Hodge star.
Checks verify_flux_branches(const MeshPair& m, const VerifyOptions& o);
/// Full and partial Leibniz rules for every available Q variant.
Checks verify_leibniz(const MeshPair& m, const VerifyOptions& o);

Checks verify_all(const MeshPair& m, const VerifyOptions& o);

struct EnergyStudy {
  std::vector<double> dts, drifts;  // rk4
  double order = 0;                  // fitted over all three dts
  std::vector<double> midpoint_drifts;
  int midpoint_max_iterations = 0;
};

/// Vortex pair with Q^TE: rk4 energy drift for dt, dt/2, dt/4 over a fixed horizon and the
/// implicit-midpoint drift at the same step sizes.
EnergyStudy energy_time_study(const MeshPair& m, double dt, int steps, double midpoint_tol = 1e-13);

bool all_pass(const Checks& c);
void print_checks(std::ostream& os, const std::string& label, const Checks& c);

}  // namespace trisk
