#include "approxrank/dimreduce.hpp"

#include <cmath>

#include "approxrank/errors.hpp"
#include "approxrank/rng.hpp"

namespace approxrank {

ReductionPlan::ReductionPlan(double t_, int k_prime_, std::uint64_t seed_, int max_trials_)
    : t(t_), k_prime(k_prime_), max_trials(max_trials_), seed(seed_) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("ReductionPlan: t must lie in (0,1)");
  if (k_prime < 1) throw ValidationError("ReductionPlan: k_prime must be >= 1");
  if (max_trials < 1) throw ValidationError("ReductionPlan: max_trials must be >= 1");
}

int plan_k_prime(double nu_alpha, int m, int n, double t) {
  if (!(nu_alpha >= 1.0)) throw ValidationError("plan_k_prime: nu_alpha must be >= 1");
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("plan_k_prime: t must lie in (0,1)");
  return static_cast<int>(
      std::ceil(2.0 * nu_alpha * nu_alpha * std::log(4.0 * m * n) / (t * t)));
}

int plan_k_prime_gamma(double gamma_alpha, int m, int n, double t) {
  if (!(gamma_alpha >= 0.0)) throw ValidationError("plan_k_prime_gamma: negative gamma");
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("plan_k_prime_gamma: t must lie in (0,1)");
  return static_cast<int>(
      std::ceil(4.0 * gamma_alpha * gamma_alpha * std::log(4.0 * m * n) / (t * t)));
}

double hoeffding_tail(const std::vector<double>& coeffs, double t) {
  if (t < 0.0) throw ValidationError("hoeffding_tail: t must be nonnegative");
  if (t == 0.0) return 2.0;
  double sum_sq = 0.0;
  for (double a : coeffs) sum_sq += a * a;
  if (sum_sq == 0.0) return 0.0;  // the sum is identically zero
  return 2.0 * std::exp(-t * t / (2.0 * sum_sq));
}

bool projection_skipped(const ReductionPlan& plan, int inner_dim, int m, int n) {
  return plan.k_prime >= inner_dim || plan.k_prime >= std::min(m, n);
}

std::pair<Factorization, ProjectionSketch> project(const Factorization& f,
                                                   const ReductionPlan& plan, int trial) {
  const int k = f.inner_dim();
  const int kp = plan.k_prime;
  ProjectionSketch sketch;
  sketch.seed = plan.seed;
  sketch.trial = trial;
  sketch.r = RealMatrix(k, kp);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kp));
  Rng rng = Rng(plan.seed).split(static_cast<std::uint64_t>(trial));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < kp; ++j) sketch.r(i, j) = rng.next_sign() * scale;

  Factorization out;
  out.x = transpose(sketch.r) * f.x;
  out.y = transpose(sketch.r) * f.y;
  out.col_bound = column_norm_bound(out.x, out.y);
  return {std::move(out), std::move(sketch)};
}

LasVegasResult project_las_vegas(const Factorization& f, const RealMatrix& target,
                                 const ReductionPlan& plan) {
  if (max_abs_diff(f.product(), target) > 1e-6)
    throw ValidationError("project_las_vegas: factorization does not reproduce the target");

  double best_error = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < plan.max_trials; ++trial) {
    auto [fact, sketch] = project(f, plan, trial);
    const double err = max_abs_diff(fact.product(), target);
    if (err <= plan.t) {
      LasVegasResult result;
      result.factorization = std::move(fact);
      result.sketch = std::move(sketch);
      result.achieved_error = err;
      result.trials = trial + 1;
      return result;
    }
    best_error = std::min(best_error, err);
  }
  throw TrialsExhausted("project_las_vegas: no sketch met the error target", plan.max_trials,
                        best_error);
}

RealMatrix rescale_to_band(const RealMatrix& m, const SignMatrix& a, double t) {
  if (m.rows != a.rows || m.cols != a.cols)
    throw ShapeMismatch("rescale_to_band: shapes differ");
  if (!(t >= 0.0 && t < 1.0)) throw ValidationError("rescale_to_band: t must lie in [0,1)");
  std::vector<std::pair<int, int>> bad;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (a.sign(i, j) * m(i, j) < 1.0 - t - 1e-12) bad.emplace_back(i, j);
  if (!bad.empty())
    throw SignViolation("rescale_to_band: entries below the 1 - t margin", std::move(bad));
  if (t == 0.0) return m;
  return (1.0 / (1.0 - t)) * m;
}

}  // namespace approxrank
