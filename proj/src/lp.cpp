#include "approxrank/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "approxrank/errors.hpp"

namespace approxrank {

namespace {

constexpr int kRefactorEvery = 64;
constexpr int kStallLimit = 400;

// Gauss-Jordan inverse with partial pivoting; false on singularity.
bool invert(const RealMatrix& a, RealMatrix& out) {
  const int n = a.rows;
  RealMatrix w = a;
  out = RealMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(w(i, col)) > std::fabs(w(piv, col))) piv = i;
    if (std::fabs(w(piv, col)) < 1e-12) return false;
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(out(piv, j), out(col, j));
      }
    }
    const double inv_p = 1.0 / w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) *= inv_p;
      out(col, j) *= inv_p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = w(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        w(i, j) -= f * w(col, j);
        out(i, j) -= f * out(col, j);
      }
    }
  }
  return true;
}

}  // namespace

SimplexSolver::SimplexSolver(std::vector<double> rhs, double tol)
    : rows_(static_cast<int>(rhs.size())), tol_(tol), rhs_(std::move(rhs)) {
  row_sign_.assign(rows_, 1.0);
  for (int i = 0; i < rows_; ++i) {
    if (rhs_[i] < 0.0) {
      rhs_[i] = -rhs_[i];
      row_sign_[i] = -1.0;
    }
  }
}

int SimplexSolver::add_column(const std::vector<double>& coeffs, double cost) {
  if (static_cast<int>(coeffs.size()) != rows_)
    throw ShapeMismatch("simplex: column length does not match row count");
  std::vector<double> col(coeffs);
  for (int i = 0; i < rows_; ++i) col[i] *= row_sign_[i];
  if (first_artificial_ >= 0) {
    // keep artificial columns at the tail
    cols_.insert(cols_.begin() + first_artificial_, std::move(col));
    costs_.insert(costs_.begin() + first_artificial_, cost);
    in_basis_.insert(in_basis_.begin() + first_artificial_, 0);
    for (int& b : basis_)
      if (b >= first_artificial_) ++b;
    return first_artificial_++;
  }
  cols_.push_back(std::move(col));
  costs_.push_back(cost);
  in_basis_.push_back(0);
  return static_cast<int>(costs_.size()) - 1;
}

void SimplexSolver::ensure_artificials() {
  if (first_artificial_ >= 0) return;
  first_artificial_ = static_cast<int>(costs_.size());
  for (int i = 0; i < rows_; ++i) {
    std::vector<double> col(rows_, 0.0);
    col[i] = 1.0;
    cols_.push_back(std::move(col));
    costs_.push_back(0.0);
    in_basis_.push_back(0);
  }
}

void SimplexSolver::refactorize() {
  RealMatrix b(rows_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int i = 0; i < rows_; ++i) b(i, r) = cols_[basis_[r]][i];
  if (!invert(b, binv_)) throw NumericalFailure("simplex: basis matrix became singular");
  xb_.assign(rows_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < rows_; ++j) xb_[i] += binv_(i, j) * rhs_[j];
}

std::vector<double> SimplexSolver::compute_duals(bool phase_one) const {
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    const double cb = phase_one ? (basis_[r] >= first_artificial_ ? 1.0 : 0.0)
                                : costs_[basis_[r]];
    if (cb == 0.0) continue;
    for (int j = 0; j < rows_; ++j) y[j] += cb * binv_(r, j);
  }
  return y;
}

SimplexSolver::PivotResult SimplexSolver::pivot_step(bool phase_one, bool bland,
                                                     double enter_tol) {
  const std::vector<double> y = compute_duals(phase_one);

  // Artificial columns never enter; they only start basic in phase 1.
  int entering = -1;
  double best = -enter_tol;
  for (int j = 0; j < first_artificial_; ++j) {
    if (in_basis_[j]) continue;
    double red = phase_one ? 0.0 : costs_[j];
    const std::vector<double>& a = cols_[j];
    for (int i = 0; i < rows_; ++i) red -= y[i] * a[i];
    if (red < best) {
      best = red;
      entering = j;
      if (bland) break;  // least-index rule
    }
  }
  if (entering < 0) return {false, false};

  // Direction w = Binv * a_entering.
  std::vector<double> w(rows_, 0.0);
  const std::vector<double>& a = cols_[entering];
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < rows_; ++j) s += binv_(i, j) * a[j];
    w[i] = s;
  }

  int leaving = -1;
  if (!phase_one) {
    // A basic artificial sits at zero; never let it move off zero.  Pivot it
    // out degenerately whenever the direction touches its row.
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] >= first_artificial_ && std::fabs(w[i]) > tol_) {
        leaving = i;
        break;
      }
    }
  }
  if (leaving < 0) {
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows_; ++i) {
      if (w[i] <= tol_) continue;
      const double ratio = std::max(xb_[i], 0.0) / w[i];
      if (leaving < 0 || ratio < best_ratio - 1e-12) {
        best_ratio = ratio;
        leaving = i;
      } else if (ratio <= best_ratio + 1e-12) {
        // Tie: prefer evicting artificials, then the smaller column index.
        const bool cand_art = basis_[i] >= first_artificial_;
        const bool cur_art = basis_[leaving] >= first_artificial_;
        if (cand_art && !cur_art)
          leaving = i;
        else if (cand_art == cur_art && basis_[i] < basis_[leaving])
          leaving = i;
      }
    }
  }
  if (leaving < 0) return {false, true};

  // Eta update of the basis inverse and the basic solution.
  const double piv = w[leaving];
  for (int j = 0; j < rows_; ++j) binv_(leaving, j) /= piv;
  xb_[leaving] /= piv;
  for (int i = 0; i < rows_; ++i) {
    if (i == leaving || w[i] == 0.0) continue;
    const double f = w[i];
    for (int j = 0; j < rows_; ++j) binv_(i, j) -= f * binv_(leaving, j);
    xb_[i] -= f * xb_[leaving];
  }
  in_basis_[basis_[leaving]] = 0;
  in_basis_[entering] = 1;
  basis_[leaving] = entering;
  return {true, false};
}

int SimplexSolver::run_simplex(bool phase_one) {
  int stall = 0;
  bool bland = false;
  double enter_tol = tol_;
  double last_obj = std::numeric_limits<double>::infinity();
  while (true) {
    if (iterations_ > 0 && iterations_ % kRefactorEvery == 0) refactorize();
    const PivotResult step = pivot_step(phase_one, bland, enter_tol);
    if (step.unbounded) return 1;
    if (!step.moved) return 0;
    ++iterations_;

    double obj = 0.0;
    for (int r = 0; r < rows_; ++r) {
      const double cb = phase_one ? (basis_[r] >= first_artificial_ ? 1.0 : 0.0)
                                  : costs_[basis_[r]];
      obj += cb * std::max(xb_[r], 0.0);
    }
    // Degenerate plateaus escalate: least-index pricing, then a coarser
    // entering tolerance, then stop at the plateau vertex.  Rounding jitter
    // below the relative threshold does not count as progress.
    if (obj < last_obj - (1e-12 + 1e-10 * std::fabs(last_obj))) {
      stall = 0;
    } else {
      ++stall;
      if (stall == kStallLimit) {
        bland = true;
        refactorize();
      } else if (stall == 3 * kStallLimit) {
        enter_tol = std::max(100.0 * tol_, 1e-7);
      } else if (stall >= 5 * kStallLimit) {
        return 0;
      }
    }
    last_obj = obj;
    if (std::getenv("APPROXRANK_LP_TRACE") && iterations_ % 2000 == 0)
      std::fprintf(stderr, "lp it %d phase%d obj %.12f stall %d bland %d cols %zu\n",
                   iterations_, phase_one ? 1 : 2, obj, stall, (int)bland, costs_.size());
    if (iterations_ > 200000) throw NumericalFailure("simplex: iteration cap exceeded");
  }
}

void SimplexSolver::drive_out_artificials() {
  for (int r = 0; r < rows_; ++r) {
    if (basis_[r] < first_artificial_) continue;
    int replacement = -1;
    for (int j = 0; j < first_artificial_; ++j) {
      if (in_basis_[j]) continue;
      double wr = 0.0;
      for (int k = 0; k < rows_; ++k) wr += binv_(r, k) * cols_[j][k];
      if (std::fabs(wr) > 1e-7) {
        replacement = j;
        break;
      }
    }
    if (replacement < 0) continue;  // dependent row; artificial stays basic at zero
    std::vector<double> w(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int k = 0; k < rows_; ++k) s += binv_(i, k) * cols_[replacement][k];
      w[i] = s;
    }
    const double piv = w[r];
    for (int j = 0; j < rows_; ++j) binv_(r, j) /= piv;
    xb_[r] /= piv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || w[i] == 0.0) continue;
      for (int j = 0; j < rows_; ++j) binv_(i, j) -= w[i] * binv_(r, j);
      xb_[i] -= w[i] * xb_[r];
    }
    in_basis_[basis_[r]] = 0;
    in_basis_[replacement] = 1;
    basis_[r] = replacement;
  }
}

LpSolution SimplexSolver::optimize() {
  LpSolution sol;
  if (!basis_ready_) {
    ensure_artificials();
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) {
      basis_[i] = first_artificial_ + i;
      in_basis_[first_artificial_ + i] = 1;
    }
    refactorize();
    run_simplex(true);
    double phase1 = 0.0;
    double rhs_max = 0.0;
    for (double b : rhs_) rhs_max = std::max(rhs_max, b);
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] >= first_artificial_) phase1 += std::max(xb_[r], 0.0);
    if (phase1 > 1e-7 * (1.0 + rhs_max)) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();
    basis_ready_ = true;
  } else {
    refactorize();
  }

  if (run_simplex(false) == 1) {
    sol.status = LpStatus::Unbounded;
    sol.iterations = iterations_;
    return sol;
  }

  refactorize();
  const int num_user_cols = first_artificial_;
  sol.status = LpStatus::Optimal;
  sol.x.assign(num_user_cols, 0.0);
  for (int r = 0; r < rows_; ++r)
    if (basis_[r] < num_user_cols) sol.x[basis_[r]] = std::max(xb_[r], 0.0);
  sol.objective = 0.0;
  for (int j = 0; j < num_user_cols; ++j)
    if (sol.x[j] != 0.0) sol.objective += costs_[j] * sol.x[j];

  const std::vector<double> y = compute_duals(false);
  sol.dual.assign(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) sol.dual[i] = y[i] * row_sign_[i];
  sol.iterations = iterations_;

  // Feasibility residual of the reported point (flipped system).
  std::vector<double> ax(rows_, 0.0);
  for (int j = 0; j < num_user_cols; ++j) {
    if (sol.x[j] == 0.0) continue;
    for (int i = 0; i < rows_; ++i) ax[i] += cols_[j][i] * sol.x[j];
  }
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i) worst = std::max(worst, std::fabs(ax[i] - rhs_[i]));
  sol.max_infeasibility = worst;
  return sol;
}

LpSolution solve_lp(const LpProblem& p, double tol) {
  const int rows = static_cast<int>(p.b.size());
  if (p.e.rows != rows) throw ShapeMismatch("solve_lp: rhs length does not match E");
  if (static_cast<int>(p.c.size()) != p.e.cols)
    throw ShapeMismatch("solve_lp: cost length does not match E");
  SimplexSolver solver(p.b, tol);
  std::vector<double> col(rows);
  for (int j = 0; j < p.e.cols; ++j) {
    for (int i = 0; i < rows; ++i) col[i] = p.e(i, j);
    solver.add_column(col, p.c[j]);
  }
  return solver.optimize();
}

}  // namespace approxrank
