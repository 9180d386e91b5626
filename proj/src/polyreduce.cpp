#include "approxrank/polyreduce.hpp"

#include <cmath>

#include "approxrank/errors.hpp"

namespace approxrank {

PolySpec make_poly(double epsilon) {
  if (!(epsilon > 0.0)) throw NonPositiveEpsilon("make_poly: epsilon must be positive");
  PolySpec spec;
  spec.epsilon = epsilon;
  spec.a3 = 1.0 / (2.0 + 6.0 * epsilon + 4.0 * epsilon * epsilon);
  spec.a1 = 1.0 + spec.a3;
  return spec;
}

double poly_max_on_band(const PolySpec& spec) {
  const double x_star = std::sqrt((1.0 + spec.a3) / (3.0 * spec.a3));
  if (x_star >= 1.0 && x_star <= 1.0 + 2.0 * spec.epsilon) {
    return (2.0 / (3.0 * std::sqrt(3.0))) * std::pow(1.0 + spec.a3, 1.5) / std::sqrt(spec.a3);
  }
  return std::max(spec.eval(1.0), spec.eval(1.0 + 2.0 * spec.epsilon));
}

RealMatrix apply_poly(const RealMatrix& m, const PolySpec& spec) {
  check_finite(m, "apply_poly");
  RealMatrix out = m;
  for (double& v : out.data) v = spec.a1 * v - spec.a3 * v * v * v;
  return out;
}

RankBound rank_bound_after_poly(int r) {
  if (r < 1) throw ValidationError("rank_bound_after_poly: rank must be >= 1");
  const std::int64_t r64 = r;
  return {r64 + r64 * r64 * r64, 2 * r64 * r64 * r64};
}

}  // namespace approxrank
