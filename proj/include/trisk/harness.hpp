#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "trisk/swe.hpp"
#include "trisk/timestep.hpp"

namespace trisk {

/// Reciprocal-lattice phases: theta_i(x) = b_i·x with a_i·b_j = 2π δ_ij.
struct LatticeFrame {
  Vec2 b1, b2;
  explicit LatticeFrame(const MeshGeometry& g);
  std::array<double, 2> phases(const Vec2& x) const;
};

/// Smooth doubly periodic bump centred at lattice fractions (c1, c2).
struct PeriodicBump {
  LatticeFrame frame;
  double c1, c2, width;
  double value(const Vec2& x) const;
  Vec2 grad(const Vec2& x) const;
};

struct CoriolisConfig {
  std::string kind = "constant";  // constant | sinusoidal
  double f0 = 0, f1 = 0;          // f = f0 + f1 sin(theta_2)
};

struct TopographyConfig {
  std::string kind = "none";  // none | gaussian
  double amplitude = 0, width = 0.3;
  std::array<double, 2> center{0.5, 0.5};
};

struct InitialConditionConfig {
  std::string preset = "rest";  // rest | gaussian-hill | vortex-pair | geostrophic-balance | uniform-pv
  double H0 = 1.0;
  double amplitude = 0.0;
  double width = 0.3;
  std::array<double, 2> center{0.5, 0.5};
  std::array<double, 2> center2{0.25, 0.5};
  double q0 = 1.0;
  std::uint64_t seed = 1;
};

struct OutputConfig {
  std::string dir;  // empty: no files
  int cadence = 1;
  bool snapshots = false;
  bool vtk = false;
};

struct RunConfig {
  std::string mesh = "quad:8";
  SchemeConfig scheme = scheme_preset("trsk2010-te");
  std::string model = "nonlinear";  // nonlinear | linear
  double g = 1.0;
  CoriolisConfig coriolis;
  TopographyConfig topography;
  InitialConditionConfig ic;
  IntegratorConfig integrator;
  int steps = 0;
  OutputConfig output;
};

/// Parses JSON text; unknown keys and bad values raise config-error.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Rejects combinations the mesh cannot support (e.g. DBL off the uniform quad).
void validate_config(const RunConfig& cfg, const MeshPair& m);

PhysicsParams make_physics(const Model& md, const RunConfig& cfg);

struct InitialCondition {
  ModelState state;
  std::optional<Cochain> f2;  // replaces the Coriolis form (uniform-pv)
};

InitialCondition initial_condition(const InitialConditionConfig& ic, const Model& md, const PhysicsParams& p);

// ---- output

struct DiagnosticsRow {
  int step = 0;
  double time = 0;
  Diagnostics d;
  double dH_dt = 0, dPE_dt = 0;
};

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& r);
void write_snapshot(const std::string& path, const MeshPair& m, const ModelState& s);
/// Reads back the raw h̃ and u values written by write_snapshot.
ModelState read_snapshot(const std::string& path, const MeshPair& m);
void write_vtk(const std::string& path, const MeshPair& m, const ModelState& s);

struct RunSummary {
  Diagnostics initial, final;
  double tendency_norm_h = 0, tendency_norm_u = 0;  // relative, at t = 0
  int steps = 0;
  std::string csv_path;
};

RunSummary run_simulation(const RunConfig& cfg, std::ostream& log);

}  // namespace trisk
