#pragma once

#include <cstdint>

#include "approxrank/matrix.hpp"

namespace approxrank {

// Odd cubic p(x) = a1 x - a3 x^3 that maps [1, 1+2e] into [1, 1+e].
struct PolySpec {
  double epsilon = 0.0;
  double a1 = 0.0;
  double a3 = 0.0;

  double eval(double x) const { return a1 * x - a3 * x * x * x; }
};

// a3 = 1/(2 + 6e + 4e^2), a1 = 1 + a3.  Throws NonPositiveEpsilon.
PolySpec make_poly(double epsilon);

// Peak of p on [1, 1+2e]: (2 / 3 sqrt 3) (1+a3)^{3/2} / sqrt(a3) at the
// stationary point, which always lies inside the interval.
double poly_max_on_band(const PolySpec& spec);

// a1 M - a3 M^{.3} entrywise.
RealMatrix apply_poly(const RealMatrix& m, const PolySpec& spec);

struct RankBound {
  std::int64_t tight = 0;  // r + r^3
  std::int64_t cubic = 0;  // 2 r^3, the coarser two-term form
};

// Rank bookkeeping for the odd cubic: rank r in, at most r + r^3 out.
RankBound rank_bound_after_poly(int r);

}  // namespace approxrank
