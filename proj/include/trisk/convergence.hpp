#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trisk/mesh.hpp"

namespace trisk {

struct ConvergenceRow {
  int n = 0;
  double h = 0;  // edge length
  double l2 = 0, linf = 0;
  double order_l2 = 0, order_linf = 0;  // against the previous row; 0 on the first
};

struct ConvergenceReport {
  std::string op, family;
  std::vector<ConvergenceRow> rows;
};

/// div, curl, grad, perp, R, KE, quadrature.
const std::vector<std::string>& convergence_operators();

/// Unit-area periodic family: quad(N, 1/N) or trihex(N, 1/N).
MeshPair family_mesh(const std::string& family, int n);

/// Error of one discrete operator against its vector-calculus oracle on smooth
/// trigonometric fields. Needs at least two resolutions.
ConvergenceReport convergence_study(const std::string& op, const std::string& family, const std::vector<int>& sizes);

void print_report(std::ostream& os, const ConvergenceReport& r);

}  // namespace trisk
