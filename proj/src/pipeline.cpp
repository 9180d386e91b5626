#include "approxrank/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "approxrank/dimreduce.hpp"
#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/oracle.hpp"
#include "approxrank/polyreduce.hpp"

namespace approxrank {

namespace {

class StageClock {
 public:
  explicit StageClock(bool enabled) : enabled_(enabled) {}

  template <typename Fn>
  auto run(const std::string& stage, std::map<std::string, double>& sink, Fn&& fn) {
    if (!enabled_) return fn();
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    const auto stop = std::chrono::steady_clock::now();
    sink[stage] = std::chrono::duration<double, std::milli>(stop - start).count();
    return result;
  }

 private:
  bool enabled_;
};

double band_minimum(const SignMatrix& a, const RealMatrix& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) lo = std::min(lo, a.sign(i, j) * m(i, j));
  return lo;
}

double band_maximum(const SignMatrix& a, const RealMatrix& m) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) hi = std::max(hi, a.sign(i, j) * m(i, j));
  return hi;
}

std::int64_t saturating_cubic_bound(std::int64_t r) {
  if (r > 1000000) return static_cast<std::int64_t>(1) << 62;
  return r + r * r * r;
}

}  // namespace

double theorem1_upper_bound(double gamma_primal_end, double alpha, int m, int n) {
  const double ratio = alpha / (alpha - 1.0);
  const double log_term = std::log(4.0 * m * n);
  return 8192.0 * std::pow(ratio, 6.0) * std::pow(log_term, 3.0) *
         std::pow(gamma_primal_end, 6.0);
}

ApproxResult approximate_rank_pipeline(const SignMatrix& a, double alpha, std::uint64_t seed,
                                       const PipelineConfig& config) {
  if (!(alpha > 1.0)) throw ValidationError("pipeline: alpha must exceed 1");
  const int m = a.rows, n = a.cols;

  ApproxResult res;
  res.input_rows = m;
  res.input_cols = n;
  res.input_hash = content_hash(a);
  res.alpha = alpha;
  res.seed = seed;
  res.has_timings = config.with_timings;
  StageClock clock(config.with_timings);

  // Stage 1: band SDP with certificate.  A request below the solver's
  // conditioning floor is retried one notch looser; the certificate ends
  // stay valid at either tolerance and the band is re-measured downstream.
  const ApproxBand band(alpha);
  auto cert_and_witness = clock.run("gamma2_alpha", res.timings_ms, [&] {
    try {
      return gamma2_alpha(a, band, config.tol);
    } catch (const NumericalError&) {
      const double looser = std::max(10.0 * config.tol, 1e-8);
      try {
        return gamma2_alpha(a, band, looser);
      } catch (NumericalError& e) {
        throw NumericalFailure(std::string("pipeline stage gamma2_alpha: ") + e.what());
      }
    }
  });
  const NormCertificate& cert = cert_and_witness.first;
  const RealMatrix& a_prime = cert_and_witness.second;
  res.gamma2_alpha_value = cert.value;
  res.gamma2_alpha_gap = cert.gap;

  // Stage 2: explicit factorization (already extracted from the Gram matrix).
  const Factorization& fact = *cert.factorization;

  // Stage 3: the composition's error budget.
  const double t = (alpha - 1.0) / (2.0 * alpha);
  res.t = t;

  // Stage 4: inner-dimension plan from the band nu, exact when enumerable.
  double nu_quantity;
  if (m + n - 1 <= 15) {
    const NormCertificate nu_cert = clock.run("nu_alpha", res.timings_ms, [&] {
      try {
        return nu_alpha(a, band);
      } catch (NumericalError& e) {
        throw NumericalFailure(std::string("pipeline stage nu_alpha: ") + e.what());
      }
    });
    nu_quantity = nu_cert.value;
    res.nu_exact = true;
  } else {
    nu_quantity = nu_upper_bound(cert.value);
    res.nu_exact = false;
  }
  res.nu_value = nu_quantity;
  const int k_plan = plan_k_prime(std::max(nu_quantity, 1.0), m, n, t);
  const int k_used = config.force_k.value_or(k_plan);
  res.k_prime = k_used;

  // Stage 5: Las Vegas projection, unless k' cannot beat the trivial rank.
  const ReductionPlan plan(t, std::max(k_used, 1), seed, config.max_trials);
  res.skipped = config.force_k ? false : projection_skipped(plan, fact.inner_dim(), m, n);
  RealMatrix current(m, n);
  std::int64_t rank_chain;
  if (!res.skipped) {
    const LasVegasResult lv = clock.run("reduction", res.timings_ms, [&] {
      try {
        return project_las_vegas(fact, a_prime, plan);
      } catch (TrialsExhausted& e) {
        throw TrialsExhausted(std::string("pipeline stage reduction: ") + e.what(),
                              e.trials_run, e.best_error);
      }
    });
    current = lv.factorization.product();
    res.trials = lv.trials;
    res.achieved_error = lv.achieved_error;
    rank_chain = std::min<std::int64_t>(k_used, std::min(m, n));
  } else {
    current = a_prime;
    res.trials = 0;
    res.achieved_error = 0.0;
    rank_chain = std::min(m, n);
  }

  // Stage 6: push the lower band edge back to 1.
  const double measured_min = band_minimum(a, current);
  if (measured_min <= 0.0) {
    std::vector<std::pair<int, int>> bad;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (a.sign(i, j) * current(i, j) <= 0.0) bad.emplace_back(i, j);
    throw SignViolation("pipeline stage rescale: sign agreement lost", std::move(bad));
  }
  const double margin = std::max(0.0, 1.0 - measured_min);
  current = rescale_to_band(current, a, margin);

  // Stage 7: entrywise cubic, iterated if rescaling overshot the 2 alpha - 1
  // band, then one pass at the target epsilon.
  const double eps_target = alpha - 1.0;
  int poly_iterations = 0;
  current = clock.run("poly", res.timings_ms, [&] {
    RealMatrix w = std::move(current);
    for (int guard = 0; guard < 64; ++guard) {
      const double upper = band_maximum(a, w);
      if (upper > 1.0 + 2.0 * eps_target + 1e-12) {
        const PolySpec wide = make_poly((upper - 1.0) / 2.0);
        w = apply_poly(w, wide);
        ++poly_iterations;
        rank_chain = saturating_cubic_bound(rank_chain);
        continue;
      }
      const PolySpec spec = make_poly(eps_target);
      res.poly_epsilon = spec.epsilon;
      res.poly_a1 = spec.a1;
      res.poly_a3 = spec.a3;
      w = apply_poly(w, spec);
      ++poly_iterations;
      rank_chain = saturating_cubic_bound(rank_chain);
      return w;
    }
    throw NumericalFailure("pipeline stage poly: band did not contract");
  });
  res.poly_iterations = poly_iterations;
  res.rank_bound = rank_chain;

  // Stage 8: verify and assemble.
  res.band_min = band_minimum(a, current);
  res.band_max = band_maximum(a, current);
  if (res.band_min < 1.0 - 1e-8 || res.band_max > alpha + 1e-8)
    throw NumericalFailure("pipeline stage verify: output band violated");
  res.rank = numerical_rank(current);
  res.lower_bound = cert.lower * cert.lower / (alpha * alpha);
  res.theorem1_upper = theorem1_upper_bound(cert.upper, alpha, m, n);
  res.b = std::move(current);
  return res;
}

std::pair<double, double> theorem1_bounds(const SignMatrix& a, double alpha, double tol) {
  if (!(alpha > 1.0)) throw ValidationError("theorem1_bounds: alpha must exceed 1");
  const NormCertificate cert = gamma2_alpha(a, ApproxBand(alpha), tol).first;
  const double lower = cert.lower * cert.lower / (alpha * alpha);
  const double upper = theorem1_upper_bound(cert.upper, alpha, a.rows, a.cols);
  return {lower, upper};
}

std::string report_json(const ApproxResult& r) {
  nlohmann::json j;
  j["input"] = {{"m", r.input_rows}, {"n", r.input_cols}, {"hash", r.input_hash}};
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["gamma2_alpha"] = {{"value", r.gamma2_alpha_value}, {"gap", r.gamma2_alpha_gap}};
  if (r.nu_exact)
    j["nu"] = {{"value", r.nu_value}};
  else
    j["nu"] = {{"upper_bound_used", r.nu_value}};
  j["reduction"] = {{"t", r.t},
                    {"k_prime", r.k_prime},
                    {"skipped", r.skipped},
                    {"trials", r.trials},
                    {"achieved_error", r.achieved_error}};
  j["poly"] = {{"epsilon", r.poly_epsilon},
               {"a1", r.poly_a1},
               {"a3", r.poly_a3},
               {"iterations", r.poly_iterations}};
  j["result"] = {{"rank", r.rank}, {"band_min", r.band_min}, {"band_max", r.band_max}};
  j["bounds"] = {{"lower", r.lower_bound}, {"theorem1_upper", r.theorem1_upper}};
  if (r.has_timings) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
    j["timings"] = t;
  } else {
    j["timings"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace approxrank
