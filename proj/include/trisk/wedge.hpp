#pragma once

#include <memory>
#include <string>
#include <vector>

#include "trisk/cochain.hpp"
#include "trisk/dec_ops.hpp"

namespace trisk {

enum class RKind { Metric, Combinatorial };
enum class TKind { Metric, Combinatorial };
enum class QVariant { TE, PE, DBL, ACCUR };

const char* to_string(RKind k);
const char* to_string(TKind k);
const char* to_string(QVariant v);

/// Sparse bilinear map out[t] += w * a[i] * b[j].
struct WedgeTensor {
  struct Entry {
    int t, a, b;
    double w;
  };
  std::vector<Entry> entries;
  FormType a_type, b_type, out_type;
  int out_size = 0;

  Cochain apply(const Cochain& a, const Cochain& b) const;
  /// Adjoint in the first slot: out[a] += w * z[t] * y[b].
  Eigen::VectorXd adjoint_a(const Eigen::VectorXd& z, const Eigen::VectorXd& y, int a_size) const;
  /// Adjoint in the second slot: out[b] += w * z[t] * x[a].
  Eigen::VectorXd adjoint_b(const Eigen::VectorXd& z, const Eigen::VectorXd& x, int b_size) const;
};

/// R in single-q form: (R h)_c = sum_c̃ R_{c̃,c} h_c̃, wedge(q, h)_c = q_c (R h)_c.
struct RWedge {
  RKind kind = RKind::Metric;
  SpMat mat;            // nc x nv
  WedgeTensor tensor;   // (c, ṽ = c, c̃)
  /// Per-corner coefficients aligned with vert_cells: corner[v][k] = R_{c̃(v), vert_cells[v][k]}.
  std::vector<std::vector<double>> corner;
};

RWedge build_R_metric(const MeshPair& m);
RWedge build_R_combinatorial(const MeshPair& m);
RWedge build_R(const MeshPair& m, RKind kind);

/// Antisymmetric W with R D̄2 = D2 W; throws construction-failure otherwise.
SpMat build_W_from_R(const MeshPair& m, const RWedge& R, const DecOperators& ops);

Cochain apply_R_weighted(const RWedge& R, const Cochain& q, const Cochain& h);

/// The nonlinear PV-flux operator Q(q, x̃): twisted 0-form × twisted flux → straight circulation.
class QOperator {
 public:
  QOperator(QVariant v, const MeshPair& m, const RWedge& R, SpMat W);

  QVariant variant() const { return variant_; }
  const SpMat& W() const { return W_; }

  Cochain apply(const Cochain& q, const Cochain& x) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& q, const Eigen::VectorXd& x) const;
  /// Assembled matrix of x̃ ↦ Q(q, x̃).
  SpMat matrix(const Eigen::VectorXd& q) const;

  /// DBL coefficient table (e, ẽ, ṽ, value); empty for other variants.
  const std::vector<WedgeTensor::Entry>& dbl_entries() const { return dbl_; }

 private:
  Eigen::VectorXd edge_average(const Eigen::VectorXd& q) const;

  QVariant variant_;
  SpMat W_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<WedgeTensor::Entry> dbl_;
};

/// True when the DBL tensor can be built for this mesh and R.
bool dbl_supported(const MeshPair& m, const RWedge& R, std::string* why = nullptr);

/// Solves the local constraint system for the DBL coefficients on a uniform
/// quad mesh. Entries are (e, ẽ, ṽ, value).
std::vector<WedgeTensor::Entry> build_dbl_tensor(const MeshPair& m, const RWedge& R);

/// KE wedge coefficients 𝔗_{c̃,e,ẽ}; per edge, one value for each endpoint's twisted cell.
struct TWedge {
  TKind kind = TKind::Metric;
  std::vector<std::array<double, 2>> coef;  // aligned with edge_verts
  std::vector<std::array<int, 2>> edge_verts;
  int nv = 0;
};

TWedge build_T(const MeshPair& m, TKind kind);

/// (out)_c̃ = sum_{ẽ∈EC(c̃)} 𝔗 u_e ũ_ẽ
Cochain ke_wedge(const TWedge& T, const Cochain& u, const Cochain& ut);
/// Straight branch: (out)_e = sum_{c̃∈CE(e)} 𝔗 h_{v(c̃)} u_e, as a straight edge cochain.
Cochain massflux_adjoint_straight(const TWedge& T, const Cochain& h0, const Cochain& u);
/// Twisted branch: (out)_ẽ = sum 𝔗 h_{v(c̃)} ũ_ẽ, a twisted flux.
Cochain massflux_adjoint_twisted(const TWedge& T, const Cochain& h0, const Cochain& ut);

}  // namespace trisk
