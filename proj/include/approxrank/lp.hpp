#pragma once

#include <vector>

#include "approxrank/matrix.hpp"

namespace approxrank {

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Standard form: minimize c.x subject to E x = b, x >= 0.
struct LpProblem {
  RealMatrix e;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> dual;  // one multiplier per row, sign matching E x = b
  double max_infeasibility = 0.0;
  int iterations = 0;
};

// Revised simplex (dense, explicit basis inverse, Dantzig pricing with a
// Bland fallback against cycling).  Columns may be appended between calls
// to optimize(); the basis is kept, so reoptimization after adding columns
// continues from the previous vertex.
class SimplexSolver {
 public:
  explicit SimplexSolver(std::vector<double> rhs, double tol = 1e-9);

  // Appends a column; returns its variable index.
  int add_column(const std::vector<double>& coeffs, double cost);
  int num_columns() const { return static_cast<int>(costs_.size()); }

  LpSolution optimize();

 private:
  struct PivotResult {
    bool moved = false;
    bool unbounded = false;
  };

  void ensure_artificials();
  void refactorize();
  std::vector<double> compute_duals(bool phase_one) const;
  PivotResult pivot_step(bool phase_one, bool bland, double enter_tol);
  int run_simplex(bool phase_one);
  void drive_out_artificials();

  int rows_;
  double tol_;
  std::vector<double> rhs_;                 // flipped so that rhs >= 0
  std::vector<double> row_sign_;            // + or - 1 per row, original orientation
  std::vector<std::vector<double>> cols_;   // column-major coefficients (flipped rows)
  std::vector<double> costs_;
  int first_artificial_ = -1;
  std::vector<int> basis_;                  // column index per row
  std::vector<char> in_basis_;
  RealMatrix binv_;
  std::vector<double> xb_;
  bool basis_ready_ = false;
  int iterations_ = 0;
};

LpSolution solve_lp(const LpProblem& p, double tol = 1e-9);

}  // namespace approxrank
