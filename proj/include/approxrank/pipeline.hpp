#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "approxrank/matrix.hpp"
#include "approxrank/norms.hpp"

namespace approxrank {

struct PipelineConfig {
  double tol = 1e-9;  // band-certificate tolerance for the SDP stage
  int max_trials = 64;
  std::optional<int> force_k;  // run the projection at this k' even when the cap would skip it
  bool with_timings = false;
};

// Everything the end-to-end run produces: the approximant, the measured
// band, and both ends of the rank sandwich.
struct ApproxResult {
  RealMatrix b;
  int input_rows = 0;
  int input_cols = 0;
  std::string input_hash;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  double gamma2_alpha_value = 0.0;
  double gamma2_alpha_gap = 0.0;

  double nu_value = 0.0;  // exact band nu, or the 2 gamma2_alpha bound
  bool nu_exact = false;

  double t = 0.0;
  int k_prime = 0;
  bool skipped = true;
  int trials = 0;
  double achieved_error = 0.0;

  double poly_epsilon = 0.0;
  double poly_a1 = 0.0;
  double poly_a3 = 0.0;
  int poly_iterations = 0;

  int rank = 0;
  double band_min = 0.0;
  double band_max = 0.0;
  std::int64_t rank_bound = 0;  // k' pushed through the cubic bookkeeping

  double lower_bound = 0.0;     // certified (gamma2_alpha lower end)^2 / alpha^2
  double theorem1_upper = 0.0;  // 8192 a^6/(a-1)^6 ln^3(4mn) (primal end)^6

  std::map<std::string, double> timings_ms;  // populated only on request
  bool has_timings = false;
};

// Full run: band SDP, Gram factorization, random projection with Las Vegas
// verification (skipped when k' cannot beat the trivial rank), rescale, and
// the entrywise cubic with epsilon = alpha - 1.
ApproxResult approximate_rank_pipeline(const SignMatrix& a, double alpha, std::uint64_t seed,
                                       const PipelineConfig& config = {});

// Both closed-form ends of the rank sandwich, evaluated from one band
// certificate: lower from its dual end, upper from its primal end.
std::pair<double, double> theorem1_bounds(const SignMatrix& a, double alpha, double tol = 1e-8);

double theorem1_upper_bound(double gamma_primal_end, double alpha, int m, int n);

// Canonical machine-readable report; byte-stable for fixed inputs.
std::string report_json(const ApproxResult& r);

}  // namespace approxrank
