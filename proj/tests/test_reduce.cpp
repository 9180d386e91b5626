#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "approxrank/dimreduce.hpp"
#include "approxrank/errors.hpp"
#include "approxrank/factorize.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/norms.hpp"
#include "approxrank/polyreduce.hpp"
#include "approxrank/rng.hpp"
#include "helpers.hpp"

using namespace approxrank;
using namespace approxrank::testutil;

TEST_CASE("plan_k_prime evaluates the sketch-dimension formula") {
  // 2 * 4 * ln(64) / 0.25 = 133.08...
  CHECK(plan_k_prime(2.0, 4, 4, 0.5) == 134);
  const int base = plan_k_prime(1.0, 1, 1, 0.3);
  CHECK(base == static_cast<int>(std::ceil(2.0 * std::log(4.0) / 0.09)));
  // halving t quadruples k' up to ceiling effects
  const int fine = plan_k_prime(1.5, 6, 7, 0.2);
  const int coarse = plan_k_prime(1.5, 6, 7, 0.4);
  CHECK(fine >= 4 * coarse - 4);
  CHECK(fine <= 4 * coarse + 4);
  CHECK_THROWS_AS(plan_k_prime(0.5, 4, 4, 0.5), ValidationError);
  CHECK_THROWS_AS(plan_k_prime(2.0, 4, 4, 1.5), ValidationError);
}

TEST_CASE("hoeffding tail bound") {
  CHECK(hoeffding_tail({1.0, 1.0}, 2.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(hoeffding_tail({3.0, -1.0, 0.5}, 0.0) == 2.0);
  CHECK(hoeffding_tail({0.0}, 1.0) == 0.0);
  CHECK_THROWS_AS(hoeffding_tail({1.0}, -1.0), ValidationError);
}

TEST_CASE("planned k_prime pushes the tail bound below 1/(2mn)") {
  // A sketch entry deviates by a sign combination whose squared coefficient
  // mass is at most nu^2 / k'; at the planned k' the tail bound must drop
  // below the union-bound budget of one entry.
  Rng rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    const double nu_val = 1.0 + 3.0 * rng.next_double();
    const int m = 2 + static_cast<int>(rng.next_below(7));
    const int n = 2 + static_cast<int>(rng.next_below(7));
    const double t = 0.2 + 0.6 * rng.next_double();
    const int kp = plan_k_prime(nu_val, m, n, t);
    const std::vector<double> coeffs(kp, nu_val / kp);  // sum of squares = nu^2 / k'
    CHECK(hoeffding_tail(coeffs, t) <= 1.0 / (2.0 * m * n) + 1e-12);
  }
}

TEST_CASE("projection at k = k_prime = 1 is exact") {
  Factorization f;
  f.x = RealMatrix(1, 2);
  f.y = RealMatrix(1, 2);
  f.x(0, 0) = 0.3;
  f.x(0, 1) = -1.2;
  f.y(0, 0) = 2.0;
  f.y(0, 1) = 0.7;
  f.col_bound = column_norm_bound(f.x, f.y);
  const ReductionPlan plan(0.5, 1, 77);
  const auto [g, sketch] = project(f, plan);
  CHECK(max_abs_diff(g.product(), f.product()) <= 1e-15);
  CHECK(std::fabs(std::fabs(sketch.r(0, 0)) - 1.0) <= 1e-15);

  const LasVegasResult lv = project_las_vegas(f, f.product(), plan);
  CHECK(lv.trials == 1);
  CHECK(lv.achieved_error <= 1e-15);
}

TEST_CASE("las vegas rejects a factorization that misses its target") {
  Factorization f;
  f.x = RealMatrix(1, 2, 1.0);
  f.y = RealMatrix(1, 2, 1.0);
  const ReductionPlan plan(0.5, 1, 3);
  CHECK_THROWS_AS(project_las_vegas(f, RealMatrix(2, 2, 0.0), plan), ValidationError);
}

TEST_CASE("projection of the zero factorization is zero") {
  Factorization f;
  f.x = RealMatrix(3, 2, 0.0);
  f.y = RealMatrix(3, 2, 0.0);
  const ReductionPlan plan(0.5, 2, 5);
  const auto [g, sketch] = project(f, plan);
  CHECK(max_abs(g.product()) == 0.0);
}

TEST_CASE("sketch entries have magnitude exactly 1/sqrt(k_prime)") {
  const NormCertificate cert = nu(h2());
  const Factorization f = layered_from_nu(cert).induced();
  const ReductionPlan plan(0.9, 3, 123);
  const auto [g, sketch] = project(f, plan);
  const double want = 1.0 / std::sqrt(3.0);
  for (double v : sketch.r.data) CHECK(std::fabs(v) == doctest::Approx(want).epsilon(1e-15));
  CHECK(numerical_rank(g.product()) <= 3);
}

TEST_CASE("projected product has rank at most k_prime") {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const SignMatrix a = random_sign_matrix(4, 4, rng);
    const Factorization f = layered_from_nu(nu(a.to_real())).induced();
    const int kp = 1 + static_cast<int>(rng.next_below(3));
    const ReductionPlan plan(0.9, kp, rng.next_u64());
    const auto [g, sketch] = project(f, plan, trial);
    CHECK(numerical_rank(g.product()) <= kp);
    CHECK(g.x.rows == kp);
  }
}

TEST_CASE("las vegas verification succeeds at the planned dimension") {
  Rng rng(42);
  int total_trials = 0;
  for (int i = 0; i < 5; ++i) {
    const SignMatrix a = random_sign_matrix(4, 4, rng);
    const NormCertificate cert = nu(a.to_real());
    const Factorization f = layered_from_nu(cert).induced();
    const double t = 0.5;
    const int kp = plan_k_prime(std::max(cert.value, 1.0), 4, 4, t);
    const ReductionPlan plan(t, kp, 1000 + i);
    const LasVegasResult lv = project_las_vegas(f, a.to_real(), plan);
    CHECK(lv.achieved_error <= t);
    total_trials += lv.trials;
  }
  CHECK(total_trials <= 5 * 8);  // far fewer retries than the 1/2 bound suggests
}

TEST_CASE("las vegas exhausts trials on an impossible target") {
  Rng rng(43);
  const RealMatrix m = random_rank_r(3, 3, 3, rng);
  const SvdResult s = svd(m);
  Factorization f;  // exact rank-3 factorization through the svd
  f.x = RealMatrix(3, 3);
  f.y = RealMatrix(3, 3);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      f.x(k, j) = s.u(j, k) * s.singular_values[k];
      f.y(k, j) = s.v(j, k);
    }
  REQUIRE(max_abs_diff(f.product(), m) <= 1e-9);
  const ReductionPlan plan(1e-9, 1, 7, 6);
  CHECK_THROWS_AS(project_las_vegas(f, m, plan), TrialsExhausted);
  try {
    project_las_vegas(f, m, plan);
  } catch (const TrialsExhausted& e) {
    CHECK(e.trials_run == 6);
    CHECK(e.best_error > 1e-9);
  }
}

TEST_CASE("sketches are unbiased: empirical mean within three standard errors") {
  const NormCertificate cert = nu(h2());
  const Factorization f = layered_from_nu(cert).induced();
  const RealMatrix exact = f.product();
  const int kp = 3;
  const int reps = 10000;
  RealMatrix mean(2, 2);
  RealMatrix second(2, 2);
  for (int rep = 0; rep < reps; ++rep) {
    const ReductionPlan plan(0.9, kp, 555);
    const auto [g, sketch] = project(f, plan, rep);
    const RealMatrix prod = g.product();
    for (std::size_t k = 0; k < prod.data.size(); ++k) {
      mean.data[k] += prod.data[k] / reps;
      second.data[k] += prod.data[k] * prod.data[k] / reps;
    }
  }
  for (std::size_t k = 0; k < mean.data.size(); ++k) {
    const double var = std::max(second.data[k] - mean.data[k] * mean.data[k], 0.0);
    const double se = std::sqrt(var / reps);
    CHECK(std::fabs(mean.data[k] - exact.data[k]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("skip rule matches the trivial-rank comparison") {
  const ReductionPlan plan(0.5, 10, 1);
  CHECK(projection_skipped(plan, 10, 20, 20));   // k' >= inner dim
  CHECK(projection_skipped(plan, 20, 10, 20));   // k' >= min(m, n)
  CHECK_FALSE(projection_skipped(plan, 20, 11, 20));
}

TEST_CASE("rescale_to_band") {
  const SignMatrix a = h2_sign();
  const RealMatrix m = h2();
  CHECK(max_abs_diff(rescale_to_band(m, a, 0.0), m) == 0.0);
  CHECK(max_abs_diff(rescale_to_band(m, a, 0.5), 2.0 * m) == 0.0);

  RealMatrix band = m;  // A o band within [1 - t, ...]
  band(0, 0) = 0.8;
  const RealMatrix out = rescale_to_band(band, a, 0.25);
  double lo = 1e300;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) lo = std::min(lo, a.sign(i, j) * out(i, j));
  CHECK(lo >= 1.0 - 1e-12);

  RealMatrix bad = m;
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(rescale_to_band(bad, a, 0.25), SignViolation);
  try {
    rescale_to_band(bad, a, 0.25);
  } catch (const SignViolation& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0] == std::pair<int, int>{0, 0});
  }
}

TEST_CASE("make_poly pins the cubic coefficients") {
  const PolySpec one = make_poly(1.0);
  CHECK(one.a3 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(one.a1 == doctest::Approx(13.0 / 12.0).epsilon(1e-15));
  CHECK(one.eval(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.eval(3.0) == doctest::Approx(1.0).epsilon(1e-12));

  const PolySpec tiny = make_poly(1e-9);
  CHECK(tiny.a3 == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(tiny.a1 == doctest::Approx(1.5).epsilon(1e-8));

  CHECK_THROWS_AS(make_poly(0.0), NonPositiveEpsilon);
  CHECK_THROWS_AS(make_poly(-0.1), NonPositiveEpsilon);
}

TEST_CASE("poly peak value stays below 1 + epsilon") {
  const PolySpec one = make_poly(1.0);
  const double peak = poly_max_on_band(one);
  CHECK(peak == doctest::Approx(1.5034).epsilon(1e-4));
  CHECK(peak <= 2.0);
  // closed form against direct evaluation at the stationary point
  const double x_star = std::sqrt((1.0 + one.a3) / (3.0 * one.a3));
  CHECK(x_star == doctest::Approx(2.0817).epsilon(1e-4));
  CHECK(peak == doctest::Approx(one.eval(x_star)).epsilon(1e-10));

  CHECK(poly_max_on_band(make_poly(0.1)) <= 1.1 + 1e-12);
  for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0})
    CHECK(poly_max_on_band(make_poly(eps)) <= 1.0 + eps + 1e-12);
}

TEST_CASE("poly maps the wide band into the narrow band") {
  for (double eps : {0.05, 0.25, 1.0, 2.0}) {
    const PolySpec spec = make_poly(eps);
    for (int g = 0; g <= 200; ++g) {
      const double x = 1.0 + 2.0 * eps * g / 200.0;
      const double px = spec.eval(x);
      CHECK(px >= 1.0 - 1e-12);
      CHECK(px <= 1.0 + eps + 1e-12);
    }
  }
}

TEST_CASE("apply_poly on matrices") {
  const PolySpec spec = make_poly(0.5);
  RealMatrix m(1, 3);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;  // 1 + 2 eps
  m(0, 2) = -2.0;
  const RealMatrix out = apply_poly(m, spec);
  CHECK(out(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));

  Rng rng(44);
  const RealMatrix r = random_rank_r(4, 5, 2, rng);
  const RealMatrix pos = apply_poly(r, spec);
  const RealMatrix neg = apply_poly(-1.0 * r, spec);
  CHECK(max_abs_diff(neg, -1.0 * pos) == 0.0);  // odd symmetry, exact
}

TEST_CASE("rank bookkeeping through the cubic") {
  CHECK(rank_bound_after_poly(1).tight == 2);
  CHECK(rank_bound_after_poly(2).tight == 10);
  CHECK(rank_bound_after_poly(2).cubic == 16);
  CHECK(rank_bound_after_poly(3).tight == 30);
  CHECK(rank_bound_after_poly(3).cubic == 54);
  CHECK_THROWS_AS(rank_bound_after_poly(0), ValidationError);

  Rng rng(45);
  const PolySpec spec = make_poly(0.7);
  for (int r = 1; r <= 3; ++r) {
    for (int trial = 0; trial < 10; ++trial) {
      const RealMatrix m = random_rank_r(6, 6, r, rng);
      CHECK(numerical_rank(apply_poly(m, spec)) <= rank_bound_after_poly(r).tight);
    }
  }
}
