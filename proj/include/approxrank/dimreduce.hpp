#pragma once

#include <cstdint>
#include <vector>

#include "approxrank/factorize.hpp"
#include "approxrank/matrix.hpp"

namespace approxrank {

// Parameters of one dimension-reduction attempt.
struct ReductionPlan {
  double t = 0.5;          // additive sup-norm error target, 0 < t < 1
  int k_prime = 1;         // target inner dimension
  int max_trials = 64;     // per-trial failure odds < 1/2 leave < 2^-64 overall
  std::uint64_t seed = 0;

  ReductionPlan(double t_, int k_prime_, std::uint64_t seed_, int max_trials_ = 64);
};

// The random matrix actually used, for reproducibility audits.
struct ProjectionSketch {
  RealMatrix r;  // k x k', entries +-1/sqrt(k')
  std::uint64_t seed = 0;
  int trial = 0;
};

// ceil(2 nu_alpha^2 ln(4mn) / t^2): the inner dimension at which a single
// random sketch misses an entry with probability below 1/(2mn).
int plan_k_prime(double nu_alpha, int m, int n, double t);

// Rank bound published alongside the plan: ceil(4 gamma^2 ln(4mn) / t^2).
int plan_k_prime_gamma(double gamma_alpha, int m, int n, double t);

// 2 exp(-t^2 / (2 sum a_i^2)); the degenerate all-zero case returns 0 for
// t > 0 and the bound value 2 at t = 0.
double hoeffding_tail(const std::vector<double>& coeffs, double t);

// Skip rule: projecting helps only below the trivial dimensions.
bool projection_skipped(const ReductionPlan& plan, int inner_dim, int m, int n);

// X1 = R^T X, Y1 = R^T Y for the plan's sketch at the given trial index.
std::pair<Factorization, ProjectionSketch> project(const Factorization& f,
                                                   const ReductionPlan& plan, int trial = 0);

struct LasVegasResult {
  Factorization factorization;
  ProjectionSketch sketch;
  double achieved_error = 0.0;
  int trials = 0;
};

// Retries fresh sketches until || X1^T Y1 - target ||_max <= plan.t; throws
// TrialsExhausted (carrying the best error seen) after plan.max_trials.
LasVegasResult project_las_vegas(const Factorization& f, const RealMatrix& target,
                                 const ReductionPlan& plan);

// M / (1 - t) after checking the sign-agreement margin A . M >= 1 - t.
RealMatrix rescale_to_band(const RealMatrix& m, const SignMatrix& a, double t);

}  // namespace approxrank
