// Acceptance suite: every release-gating property in one binary, one
// pass/fail line per criterion.  Exits nonzero if anything fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "approxrank/dimreduce.hpp"
#include "approxrank/errors.hpp"
#include "approxrank/factorize.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/norms.hpp"
#include "approxrank/oracle.hpp"
#include "approxrank/pipeline.hpp"
#include "approxrank/polyreduce.hpp"
#include "approxrank/rng.hpp"
#include "helpers.hpp"

using namespace approxrank;
using namespace approxrank::testutil;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string what)
      : number_(number), what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}

  void fail(const std::string& detail) {
    ok_ = false;
    if (details_.size() < 4) details_.push_back(detail);
    ++fail_count_;
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok_ ? "PASS" : "FAIL", number_,
                what_.c_str(), secs);
    if (!ok_) {
      for (const std::string& d : details_) std::printf("       %s\n", d.c_str());
      if (fail_count_ > static_cast<int>(details_.size()))
        std::printf("       ... and %d more failures\n",
                    fail_count_ - static_cast<int>(details_.size()));
      ++failures;
    }
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string what_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  int fail_count_ = 0;
  std::vector<std::string> details_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

void criterion1_norm_exactness() {
  Criterion c(1, "gamma2(J) = 1 for m,n <= 8; gamma2(H2) = sqrt2; nu(H2) = 2");
  for (int m = 1; m <= 8; ++m) {
    for (int n = 1; n <= 8; ++n) {
      const NormCertificate cert = gamma2(RealMatrix::ones(m, n), 1e-9);
      if (std::fabs(cert.value - 1.0) > 1e-6)
        c.fail(fmt("gamma2(J_%dx%d) = %.9f", m, n, cert.value));
    }
  }

  const NormCertificate g = gamma2(h2(), 1e-9);
  if (std::fabs(g.value - std::sqrt(2.0)) > 1e-4)
    c.fail(fmt("gamma2(H2) = %.9f", g.value));
  // independent dual check: trace norm of A o v u^T through the svd
  RealMatrix witness(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) witness(i, j) = h2()(i, j) * g.dual_v[i] * g.dual_u[j];
  if (trace_norm(witness) < g.value - 1e-4) c.fail("gamma2(H2) dual witness too weak");
  const Factorization& f = *g.factorization;
  if (f.max_col_norm_x() * f.max_col_norm_y() > g.value + 1e-4 ||
      max_abs_diff(f.product(), h2()) > 1e-6)
    c.fail("gamma2(H2) primal witness invalid");

  const NormCertificate v = nu(h2());
  if (std::fabs(v.value - 2.0) > 1e-6) c.fail(fmt("nu(H2) = %.9f", v.value));
  // independent dual check: atom feasibility and matching objective
  double dual_obj = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) dual_obj += h2()(i, j) * (*v.dual_matrix)(i, j);
  for (const SignMatrix& t : enumerate_atoms(2, 2)) {
    double inner = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) inner += t.sign(i, j) * (*v.dual_matrix)(i, j);
    if (std::fabs(inner) > 1.0 + 1e-8) c.fail("nu(H2) dual witness infeasible");
  }
  if (std::fabs(dual_obj - 2.0) > 1e-6) c.fail(fmt("nu(H2) dual objective %.9f", dual_obj));
  c.finish();
}

void criterion2_grothendieck_sandwich() {
  Criterion c(2, "gamma2 <= nu <= 1.7822 gamma2 + 1e-4 on all 512 3x3 sign matrices");
  for (int bits = 0; bits < 512; ++bits) {
    const SignMatrix a = sign_matrix_from_bits(3, 3, bits);
    const double g = gamma2(a.to_real(), 1e-9).value;
    const double v = nu(a.to_real()).value;
    if (g > v + 1e-6) c.fail(fmt("bits %d: gamma2 %.9f > nu %.9f", bits, g, v));
    if (v > 1.7822 * g + 1e-4)
      c.fail(fmt("bits %d: nu %.9f > 1.7822 * %.9f + 1e-4", bits, v, g));
  }
  c.finish();
}

void criterion3_rank_lower_bound() {
  Criterion c(3, "numerical_rank(A) >= gamma2(A)^2 - 1e-4 on 100 random 8x8 sign matrices");
  Rng rng(880011);
  for (int trial = 0; trial < 100; ++trial) {
    const SignMatrix a = random_sign_matrix(8, 8, rng);
    const double g = gamma2(a.to_real(), 1e-8).value;
    const int rank = numerical_rank(a.to_real());
    if (rank < g * g - 1e-4)
      c.fail(fmt("trial %d: rank %d < gamma2^2 %.9f", trial, rank, g * g));
  }
  c.finish();
}

void criterion4_poly_band() {
  Criterion c(4, "cubic maps [1,1+2e] into [1,1+e]; endpoint and peak identities");
  for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
    const PolySpec spec = make_poly(eps);
    if (std::fabs(spec.eval(1.0) - 1.0) > 1e-12) c.fail(fmt("p(1) != 1 at eps %.2f", eps));
    if (std::fabs(spec.eval(1.0 + 2.0 * eps) - 1.0) > 1e-12)
      c.fail(fmt("p(1+2e) != 1 at eps %.2f", eps));
    for (int gp = 0; gp < 1000; ++gp) {
      const double x = 1.0 + 2.0 * eps * gp / 999.0;
      const double px = spec.eval(x);
      if (px < 1.0 - 1e-12 || px > 1.0 + eps + 1e-12)
        c.fail(fmt("eps %.2f: p(%.6f) = %.15f leaves the band", eps, x, px));
    }
    const double closed = (2.0 / (3.0 * std::sqrt(3.0))) * std::pow(1.0 + spec.a3, 1.5) /
                          std::sqrt(spec.a3);
    const double x_star = std::sqrt((1.0 + spec.a3) / (3.0 * spec.a3));
    if (std::fabs(spec.eval(x_star) - closed) > 1e-10)
      c.fail(fmt("eps %.2f: stationary value mismatch", eps));
    if (std::fabs(poly_max_on_band(spec) - closed) > 1e-10)
      c.fail(fmt("eps %.2f: poly_max_on_band mismatch", eps));
  }
  c.finish();
}

void criterion5_rank_bookkeeping() {
  Criterion c(5, "numerical_rank(p(M)) <= r + r^3 for random rank-r matrices, 100 seeds");
  Rng rng(880055);
  const PolySpec spec = make_poly(1.0);
  for (int seed_idx = 0; seed_idx < 100; ++seed_idx) {
    const int r = 1 + seed_idx % 3;
    const int m = 4 + static_cast<int>(rng.next_below(5));
    const int n = 4 + static_cast<int>(rng.next_below(5));
    const RealMatrix mat = random_rank_r(m, n, r, rng);
    const int got = numerical_rank(apply_poly(mat, spec));
    const std::int64_t bound = rank_bound_after_poly(r).tight;
    if (got > bound) c.fail(fmt("seed %d: rank %d > bound %lld", seed_idx, got, (long long)bound));
  }
  c.finish();
}

void criterion6_concentration() {
  Criterion c(6, "single-trial sketch failure rate < 0.5 at the planned k' (20 matrices x 200 seeds)");
  Rng rng(880066);
  for (int idx = 0; idx < 20; ++idx) {
    const SignMatrix a = random_sign_matrix(4, 4, rng);
    const NormCertificate cert = nu(a.to_real());
    const LayeredFactorization lf = layered_from_nu(cert);
    const Factorization f = lf.induced();
    const double t = 0.5;
    const int kp = plan_k_prime(std::max(cert.value, 1.0), 4, 4, t);
    int fail_count = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const ReductionPlan plan(t, kp, 9000 + idx);
      const auto [g, sketch] = project(f, plan, trial);
      if (max_abs_diff(g.product(), a.to_real()) > t) ++fail_count;
    }
    if (fail_count >= 100)
      c.fail(fmt("matrix %d: %d/200 single trials failed at k'=%d", idx, fail_count, kp));
  }
  c.finish();
}

void criterion7_end_to_end_band() {
  Criterion c(7, "pipeline band J <= A o B <= alpha J and rank >= lower on 100 8x8 x alpha {2,3,5}");
  Rng rng(880077);
  for (int trial = 0; trial < 100; ++trial) {
    const SignMatrix a = random_sign_matrix(8, 8, rng);
    for (double alpha : {2.0, 3.0, 5.0}) {
      try {
        const ApproxResult res =
            approximate_rank_pipeline(a, alpha, 7000 + 3 * trial + (int)alpha);
        const BandReport band = verify_band(a, res.b, alpha, 1e-8);
        if (!band.pass)
          c.fail(fmt("trial %d alpha %.0f: band [%.12f, %.12f]", trial, alpha, band.band_min,
                     band.band_max));
        if (res.rank < res.lower_bound - 1e-6)
          c.fail(fmt("trial %d alpha %.0f: rank %d < lower %.9f", trial, alpha, res.rank,
                     res.lower_bound));
      } catch (const std::exception& e) {
        c.fail(fmt("trial %d alpha %.0f: %s", trial, alpha, e.what()));
      }
    }
  }
  c.finish();
}

void criterion8_oracle_agreement() {
  Criterion c(8, "rank-one detection exact on all 256 2x4 patterns; pipeline rank-1 on those");
  int flagged = 0;
  for (int bits = 0; bits < 256; ++bits) {
    const SignMatrix a = sign_matrix_from_bits(2, 4, bits);
    const bool one = is_rank_alpha_one(a, 3.0);
    const bool truly_one = numerical_rank(a.to_real()) == 1;
    if (one != truly_one) c.fail(fmt("bits %d: oracle %d vs rank-one %d", bits, one, truly_one));
    if (!one) continue;
    ++flagged;
    try {
      const ApproxResult res = approximate_rank_pipeline(a, 3.0, 1000 + bits);
      if (res.rank != 1) c.fail(fmt("bits %d: pipeline rank %d != 1", bits, res.rank));
    } catch (const std::exception& e) {
      c.fail(fmt("bits %d: pipeline failed: %s", bits, e.what()));
    }
  }
  if (flagged != 32) c.fail(fmt("expected 32 rank-one patterns, found %d", flagged));
  c.finish();
}

void criterion9_determinism() {
  Criterion c(9, "same input, alpha, seed produce byte-identical reports");
  Rng rng(880099);
  for (int trial = 0; trial < 3; ++trial) {
    const SignMatrix a = random_sign_matrix(8, 8, rng);
    const ApproxResult r1 = approximate_rank_pipeline(a, 3.0, 424242);
    const ApproxResult r2 = approximate_rank_pipeline(a, 3.0, 424242);
    if (report_json(r1) != report_json(r2)) c.fail(fmt("trial %d: reports differ", trial));
    if (max_abs_diff(r1.b, r2.b) != 0.0) c.fail(fmt("trial %d: approximants differ", trial));
  }
  c.finish();
}

}  // namespace

int main() {
  criterion1_norm_exactness();
  criterion2_grothendieck_sandwich();
  criterion3_rank_lower_bound();
  criterion4_poly_band();
  criterion5_rank_bookkeeping();
  criterion6_concentration();
  criterion7_end_to_end_band();
  criterion8_oracle_agreement();
  criterion9_determinism();
  if (failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
