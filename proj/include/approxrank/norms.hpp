#pragma once

#include <optional>
#include <vector>

#include "approxrank/factorize.hpp"
#include "approxrank/matrix.hpp"

namespace approxrank {

// Band constraint J <= A . A' <= alpha J around a sign matrix.
struct ApproxBand {
  double alpha;

  explicit ApproxBand(double a);
};

// Interval bounds for Grothendieck's constant; the upper end is a safe
// published bound.
struct GrothendieckConstants {
  static constexpr double k_lo = 1.67;
  static constexpr double k_hi = 1.7822;
};

// A norm value bracketed by an independently checkable witness pair:
// lower comes from a dual witness, upper from a primal one.
struct NormCertificate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;  // upper - lower, >= -1e-8

  // gamma2-style primal witness.
  std::optional<Factorization> factorization;
  // gamma2 dual witness: unit vectors with trace_norm(A . v u^T) = lower.
  std::vector<double> dual_u;  // length n
  std::vector<double> dual_v;  // length m
  // nu dual witness W: |x^T W y| <= 1 on sign vectors, <A, W> = value.
  std::optional<RealMatrix> dual_matrix;
  // Exact nu decomposition (one term per nonzero LP coefficient).
  std::optional<std::vector<Layer>> decomposition;

  double solver_gap = 0.0;
  int iterations = 0;
};

// gamma2 via the SDP: minimize t with Z psd, off-diagonal block A, diagonal
// entries <= t.  Dual witness recovered from the multipliers on the diagonal
// constraints; certificate bounds are verified independently of the solver.
NormCertificate gamma2(const RealMatrix& a, double tol = 1e-8);

// gamma2 restricted to the alpha-band around a sign matrix; also returns the
// witness matrix A'.
std::pair<NormCertificate, RealMatrix> gamma2_alpha(const SignMatrix& a, const ApproxBand& band,
                                                    double tol = 1e-8);

// Exact nu on small instances: LP over all rank-one sign atoms.
// Requires 2^(m+n-1) <= 2^15, else TooLarge.
NormCertificate nu(const RealMatrix& a);

// Exact nu over the alpha-band (column generation over the same atoms; the
// optimality certificate covers every atom).  Same size gate as nu.
NormCertificate nu_alpha(const SignMatrix& a, const ApproxBand& band);

// The factor-2 bound nu <= 2 gamma2 used by the planning step.
double nu_upper_bound(double g2);

// Tighter bound via the Grothendieck constant interval.
double nu_upper_bound_grothendieck(double g2);

// (gamma2^alpha)^2 / alpha^2 evaluated at the certified dual (lower) end,
// so the bound stays valid under solver tolerance.
double rank_lower_bound(const SignMatrix& a, const ApproxBand& band, double tol = 1e-8);

}  // namespace approxrank
