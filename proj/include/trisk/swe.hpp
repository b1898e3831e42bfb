#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trisk/cochain.hpp"
#include "trisk/dec_ops.hpp"
#include "trisk/wedge.hpp"

namespace trisk {

/// Gravity, Coriolis and topography; f̃⁰ and h_s⁰ are derived through the Hodge stars.
struct PhysicsParams {
  double g = 9.80616;
  Cochain f2;   // straight 2-form
  Cochain hs2;  // twisted 2-form
  Cochain ft0;  // H2 f2
  Cochain hs0;  // H̄2 hs2
};

PhysicsParams make_physics(const DecOperators& ops, double g, Cochain f2, Cochain hs2);
/// Constant f0 and flat bottom.
PhysicsParams make_physics(const MeshPair& m, const DecOperators& ops, double g, double f0);

struct ModelState {
  Cochain u;  // straight circulation (relative velocity)
  Cochain h;  // twisted 2-form (thickness)
  double time = 0;
};

struct SchemeConfig {
  RKind r = RKind::Metric;
  QVariant q = QVariant::TE;
  TKind t = TKind::Metric;
  std::string hodge = "voronoi";
  std::string preset;
};

const std::vector<std::string>& preset_names();
/// Throws invalid-parameter for an unknown name.
SchemeConfig scheme_preset(const std::string& name);
std::string describe(const SchemeConfig& s);

/// Every operator the dynamics needs, assembled once per (mesh, scheme).
struct Model {
  MeshPair mesh;
  SchemeConfig scheme;
  DecOperators ops;
  RWedge R;
  SpMat W;
  QOperator Q;
  TWedge T;
};

Model build_model(const MeshPair& m, const SchemeConfig& s);

double hamiltonian(const Model& md, const ModelState& s, const PhysicsParams& p);

struct FunctionalDerivatives {
  Cochain F;  // twisted flux
  Cochain B;  // straight 0-form
};

FunctionalDerivatives functional_derivatives(const Model& md, const ModelState& s, const PhysicsParams& p);

/// q̃⁰ = (D2u + f)/(R h̃); throws pv-singularity listing cells with R h̃ ≤ 0.
Cochain diagnose_pv(const Model& md, const ModelState& s, const PhysicsParams& p);

struct Tendencies {
  Cochain dh;  // twisted 2-form
  Cochain du;  // straight circulation
};

Tendencies tendencies(const Model& md, const ModelState& s, const PhysicsParams& p);
Tendencies linearized_tendencies(const Model& md, const ModelState& s, const PhysicsParams& p, double H0);

struct InvariantRates {
  double dM = 0, dH = 0, dPE = 0, dC = 0;
  /// Magnitudes the mass and circulation rates should be compared against.
  double mass_scale = 0, circ_scale = 0;
};

InvariantRates invariant_rates(const Model& md, const ModelState& s, const PhysicsParams& p, const Tendencies& t);

struct Diagnostics {
  double mass = 0, circulation = 0, energy = 0, potential_enstrophy = 0;
  double min_h = 0, max_h = 0, max_u = 0;
};

Diagnostics diagnostics(const Model& md, const ModelState& s, const PhysicsParams& p);

/// Compensated sum (Neumaier).
double stable_sum(const Eigen::VectorXd& v);

}  // namespace trisk
