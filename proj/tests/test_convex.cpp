#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/lp.hpp"
#include "approxrank/rng.hpp"
#include "approxrank/sdp.hpp"
#include "helpers.hpp"

using namespace approxrank;
using namespace approxrank::testutil;

namespace {

// Brute-force LP oracle: enumerate all basis subsets and take the best
// feasible vertex.  Only valid when the optimum is attained at a vertex.
double vertex_enumeration_min(const LpProblem& p) {
  const int rows = static_cast<int>(p.b.size());
  const int cols = p.e.cols;
  std::vector<int> idx(cols);
  for (int i = 0; i < cols; ++i) idx[i] = i;
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> comb(rows);
  auto consider = [&](const std::vector<int>& basis) {
    RealMatrix bmat(rows, rows);
    for (int c = 0; c < rows; ++c)
      for (int r = 0; r < rows; ++r) bmat(r, c) = p.e(r, basis[c]);
    // solve bmat xb = b by Gaussian elimination
    RealMatrix aug = bmat;
    std::vector<double> rhs(p.b);
    for (int col = 0; col < rows; ++col) {
      int piv = col;
      for (int r = col + 1; r < rows; ++r)
        if (std::fabs(aug(r, col)) > std::fabs(aug(piv, col))) piv = r;
      if (std::fabs(aug(piv, col)) < 1e-10) return;
      for (int c = 0; c < rows; ++c) std::swap(aug(piv, c), aug(col, c));
      std::swap(rhs[piv], rhs[col]);
      for (int r = 0; r < rows; ++r) {
        if (r == col) continue;
        const double f = aug(r, col) / aug(col, col);
        if (f == 0.0) continue;
        for (int c = 0; c < rows; ++c) aug(r, c) -= f * aug(col, c);
        rhs[r] -= f * rhs[col];
      }
    }
    double obj = 0.0;
    for (int c = 0; c < rows; ++c) {
      const double xv = rhs[c] / aug(c, c);
      if (xv < -1e-9) return;
      obj += p.c[basis[c]] * xv;
    }
    best = std::min(best, obj);
  };

  // all size-`rows` subsets of columns
  std::vector<int> stack;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(stack.size()) == rows) {
      consider(stack);
      return;
    }
    for (int i = start; i < cols; ++i) {
      stack.push_back(i);
      rec(i + 1);
      stack.pop_back();
    }
  };
  rec(0);
  return best;
}

SdpProblem two_by_two_program(double offdiag) {
  // minimize t subject to [[t, c],[c, t]] psd
  SdpProblem p;
  p.block_dim = 2;
  p.num_scalars = 1;
  p.scalar_objective = {1.0};
  SdpConstraint c11;
  c11.z_coeffs.push_back({0, 0, 1.0});
  c11.scalar_coeffs.push_back({0, -1.0});
  c11.rel = Relation::Equal;
  c11.bound = 0.0;
  SdpConstraint c22 = c11;
  c22.z_coeffs[0] = {1, 1, 1.0};
  SdpConstraint c12;
  c12.z_coeffs.push_back({0, 1, 0.5});
  c12.rel = Relation::Equal;
  c12.bound = offdiag;
  p.constraints = {c11, c22, c12};
  return p;
}

// The gamma2 program in the form the norms layer uses: equal diagonal
// entries (their common value plays the role of t), objective the average
// diagonal entry, and a strictly feasible start.
SdpProblem gamma2_program(const RealMatrix& a) {
  const int m = a.rows, n = a.cols, d = m + n;
  SdpProblem p;
  p.block_dim = d;
  p.init_scale = 2.0 * (1.0 + max_abs(a)) * std::max(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      SdpConstraint c;
      c.z_coeffs.push_back({i, m + j, 0.5});
      c.rel = Relation::Equal;
      c.bound = a(i, j);
      p.constraints.push_back(c);
    }
  for (int k = 1; k < d; ++k) {
    SdpConstraint c;
    c.z_coeffs.push_back({0, 0, -1.0});
    c.z_coeffs.push_back({k, k, 1.0});
    c.rel = Relation::Equal;
    c.bound = 0.0;
    p.constraints.push_back(c);
  }
  for (int k = 0; k < d; ++k) p.z_objective.push_back({k, k, 1.0 / d});
  p.initial_z = p.init_scale * RealMatrix::identity(d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      p.initial_z(i, m + j) = a(i, j);
      p.initial_z(m + j, i) = a(i, j);
    }
  return p;
}

}  // namespace

TEST_CASE("lp: single variable pinned") {
  LpProblem p;
  p.e = RealMatrix(1, 1);
  p.e(0, 0) = 1.0;
  p.b = {1.0};
  p.c = {1.0};
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lp: two variables on a segment") {
  LpProblem p;
  p.e = RealMatrix(1, 2, 1.0);
  p.b = {2.0};
  p.c = {1.0, 1.0};
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("lp: infeasible and unbounded detection") {
  LpProblem bad;
  bad.e = RealMatrix(1, 2, 1.0);
  bad.b = {-1.0};
  bad.c = {1.0, 1.0};
  // x + y = -1 is hopeless for x, y >= 0 after the sign flip turns it into
  // -x - y = 1.
  CHECK(solve_lp(bad).status == LpStatus::Infeasible);

  LpProblem ray;
  ray.e = RealMatrix(1, 2);
  ray.e(0, 0) = 1.0;
  ray.e(0, 1) = -1.0;
  ray.b = {0.0};
  ray.c = {-1.0, 0.0};
  CHECK(solve_lp(ray).status == LpStatus::Unbounded);
}

TEST_CASE("lp: matches exhaustive vertex enumeration") {
  Rng rng(911);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + static_cast<int>(rng.next_below(4));
    const int cols = rows + 1 + static_cast<int>(rng.next_below(6 - rows));
    LpProblem p;
    p.e = RealMatrix(rows, cols);
    for (double& v : p.e.data) v = rng.next_gaussian();
    // rhs from a known nonnegative point keeps the instance feasible
    std::vector<double> x0(cols);
    for (double& v : x0) v = rng.next_double();
    p.b.assign(rows, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) p.b[i] += p.e(i, j) * x0[j];
    p.c.assign(cols, 0.0);
    for (double& v : p.c) v = rng.next_double();  // nonnegative costs: bounded

    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    const double oracle = vertex_enumeration_min(p);
    CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-8));
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("lp: duals satisfy strong duality and feasibility") {
  Rng rng(912);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 2, cols = 5;
    LpProblem p;
    p.e = RealMatrix(rows, cols);
    for (double& v : p.e.data) v = rng.next_gaussian();
    std::vector<double> x0(cols);
    for (double& v : x0) v = rng.next_double() + 0.1;
    p.b.assign(rows, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) p.b[i] += p.e(i, j) * x0[j];
    p.c.assign(cols, 1.0);

    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    double dual_obj = 0.0;
    for (int i = 0; i < rows; ++i) dual_obj += s.dual[i] * p.b[i];
    CHECK(dual_obj == doctest::Approx(s.objective).epsilon(1e-8));
    for (int j = 0; j < cols; ++j) {
      double red = p.c[j];
      for (int i = 0; i < rows; ++i) red -= s.dual[i] * p.e(i, j);
      CHECK(red >= -1e-8);
    }
    CHECK(s.max_infeasibility <= 1e-8);
  }
}

TEST_CASE("sdp: 2x2 psd completion forces t = |offdiag|") {
  const SdpSolution one = solve_sdp(two_by_two_program(1.0));
  CHECK(one.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::fabs(one.duality_gap) <= 1e-6);
  const SdpSolution zero = solve_sdp(two_by_two_program(0.0));
  CHECK(std::fabs(zero.objective) <= 1e-6);
}

TEST_CASE("sdp: gamma2 program value for the 2x2 sign kernel is sqrt(2)") {
  const SdpSolution sol = solve_sdp(gamma2_program(h2()), 1e-9);
  CHECK(sol.objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  // dual certificate: multipliers on the diagonal rows recover u = v =
  // (1/sqrt2, 1/sqrt2) and trace_norm(H/2) = sqrt(2)
  CHECK(sol.dual_objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("sdp: solution quality invariants on random gamma2 programs") {
  Rng rng(913);
  const double tol = 1e-8;
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(4));
    const int n = 2 + static_cast<int>(rng.next_below(4));
    const SignMatrix a = random_sign_matrix(m, n, rng);
    const SdpSolution sol = solve_sdp(gamma2_program(a.to_real()), tol);
    CHECK(std::fabs(sol.objective - sol.dual_objective) <=
          tol * 10 * (1.0 + std::fabs(sol.objective)));
    CHECK(sol.min_eigenvalue >= -10.0 * tol);
    CHECK(sol.primal_infeasibility <= 10 * tol);
    // off-diagonal block reproduces A
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(sol.z(i, m + j) == doctest::Approx(a.sign(i, j)).epsilon(1e-6));
  }
}

TEST_CASE("sdp: infeasible and unbounded programs are flagged") {
  SdpProblem infeasible;
  infeasible.block_dim = 2;
  infeasible.num_scalars = 0;
  SdpConstraint c;
  c.z_coeffs.push_back({0, 0, 1.0});
  c.rel = Relation::Equal;
  c.bound = -1.0;  // a psd matrix cannot have a negative diagonal entry
  infeasible.constraints = {c};
  CHECK_THROWS_AS(solve_sdp(infeasible, 1e-8), NumericalError);

  SdpProblem unbounded;
  unbounded.block_dim = 2;
  unbounded.num_scalars = 1;
  unbounded.scalar_objective = {1.0};
  SdpConstraint d;
  d.z_coeffs.push_back({0, 0, 1.0});
  d.scalar_coeffs.push_back({0, 1.0});
  d.rel = Relation::LessEq;  // Z11 + t <= 0 lets t fall without limit
  d.bound = 0.0;
  unbounded.constraints = {d};
  CHECK_THROWS_AS(solve_sdp(unbounded, 1e-8), NumericalError);
}

TEST_CASE("sdp: iteration cap reports numerical failure") {
  SdpProblem p = two_by_two_program(1.0);
  p.max_iterations = 2;
  CHECK_THROWS_AS(solve_sdp(p, 1e-12), NumericalFailure);
}
