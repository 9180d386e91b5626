#pragma once

#include <vector>

#include "approxrank/matrix.hpp"

namespace approxrank {

enum class Relation { LessEq, Equal, GreaterEq };

// One entry of a symmetric coefficient matrix, upper triangle (row <= col).
// A triplet (r, c, v) with r < c stands for both symmetric positions.
struct SdpCoeff {
  int row;
  int col;
  double value;
};

struct ScalarCoeff {
  int index;
  double value;
};

// <F, Z> + sum(scalar_coeffs . u)  REL  bound
struct SdpConstraint {
  std::vector<SdpCoeff> z_coeffs;
  std::vector<ScalarCoeff> scalar_coeffs;
  Relation rel = Relation::Equal;
  double bound = 0.0;
};

// One symmetric PSD matrix variable Z of dimension block_dim, plus free
// auxiliary scalars u.  Objective: minimize scalar_objective . u.
struct SdpProblem {
  int block_dim = 0;
  int num_scalars = 0;
  std::vector<double> scalar_objective;
  // Optional cost on Z itself: minimize <z_objective, Z> + scalar part.
  std::vector<SdpCoeff> z_objective;
  std::vector<SdpConstraint> constraints;
  // Starting point Z = init_scale * I (0 selects a heuristic).
  double init_scale = 0.0;
  // Optional strictly feasible start.  When initial_z is set (and the
  // implied slacks are strictly positive) the primal residuals start at
  // zero and stay there, which is what lets tight tolerances converge.
  RealMatrix initial_z;
  std::vector<double> initial_scalars;
  int max_iterations = 200;
};

struct SdpSolution {
  RealMatrix z;
  std::vector<double> scalars;
  double objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;  // objective - dual_objective
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double min_eigenvalue = 0.0;  // of z
  // Multiplier per constraint.  Convention: dual objective = sum y_i bound_i;
  // y <= 0 on LessEq rows and y >= 0 on GreaterEq rows at optimality.
  std::vector<double> dual;
  // Dual slack matrix C - sum y_i F_i, PSD at optimality.
  RealMatrix dual_slack;
  int iterations = 0;
};

// Primal-dual interior point with Nesterov-Todd scaling and a dense
// Cholesky of the Schur complement.  Infeasible start from a multiple of
// the identity.  Throws Infeasible / Unbounded / NumericalFailure.
SdpSolution solve_sdp(const SdpProblem& p, double tol = 1e-8);

}  // namespace approxrank
