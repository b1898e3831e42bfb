#pragma once

#include <Eigen/SparseCore>

#include "trisk/cochain.hpp"
#include "trisk/mesh.hpp"

namespace trisk {

using SpMat = Eigen::SparseMatrix<double>;

/// Sparse matrix with typed domain and codomain; apply() rejects mistyped input.
struct SparseLinearOp {
  SpMat mat;
  FormType domain, codomain;

  Cochain apply(const Cochain& x) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const { return mat * x; }
};

SparseLinearOp transpose_op(const SparseLinearOp& X);

/// Coboundary operator D_k on the given grid (k = 1, 2).
SparseLinearOp build_d(const MeshPair& m, int k, Grid grid);

struct HodgeSet {
  SparseLinearOp H1;   // straight circulation -> twisted flux, A_ẽ/A_e
  SparseLinearOp Ht2;  // twisted 2 -> straight 0, 1/A_c̃
  SparseLinearOp H2;   // straight 2 -> twisted 0, 1/A_c
};

struct InverseHodges {
  SparseLinearOp Ht1;  // -H1^{-1}
  SparseLinearOp H0;   // Ht2^{-1}
  SparseLinearOp Ht0;  // H2^{-1}
};

HodgeSet build_hodge_voronoi(const MeshPair& m);
InverseHodges derive_inverse_hodges(const HodgeSet& h);

/// Everything assembled once per mesh.
struct DecOperators {
  SparseLinearOp D1, D2, Dt1, Dt2;
  HodgeSet hodge;
  InverseHodges inv;
};

DecOperators build_dec_operators(const MeshPair& m);

double inner_product(const DecOperators& ops, const Cochain& a, const Cochain& b);

struct TransposeReport {
  double dt2_vs_d1 = 0;  // max |D̄2 + D1ᵀ|
  double d2_vs_dt1 = 0;  // max |D2 − D̄1ᵀ|
  double max() const { return std::max(dt2_vs_d1, d2_vs_dt1); }
};

TransposeReport check_transpose_duality(const DecOperators& ops);

/// Largest absolute entry of a sparse matrix (0 for an empty matrix).
double max_abs(const SpMat& a);

}  // namespace trisk
