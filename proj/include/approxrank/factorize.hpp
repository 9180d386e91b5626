#pragma once

#include <cstdint>
#include <vector>

#include "approxrank/matrix.hpp"

namespace approxrank {

struct NormCertificate;  // norms.hpp

// Pair (X, Y) with X^T Y realizing a target matrix.  X is k x m, Y is k x n.
struct Factorization {
  RealMatrix x;
  RealMatrix y;
  double col_bound = 0.0;  // max column l2 norm across X and Y

  int inner_dim() const { return x.rows; }
  RealMatrix product() const;
  double max_col_norm_x() const;
  double max_col_norm_y() const;
};

// One rank-one sign layer: coeff * sign * (x y^T) with coeff = beta >= 0.
struct Layer {
  double beta = 0.0;
  int sign = 1;
  std::vector<std::int8_t> x;  // length m, entries +-1
  std::vector<std::int8_t> y;  // length n
};

// Factorization whose rows have uniform magnitude sqrt(beta_i); the induced
// X, Y realize the target with column norms sqrt(sum beta_i) everywhere.
struct LayeredFactorization {
  int rows_m = 0;
  int cols_n = 0;
  std::vector<Layer> layers;

  double total_weight() const;
  Factorization induced() const;
  RealMatrix reconstruct() const;
};

double column_norm_bound(const RealMatrix& x, const RealMatrix& y);

// Square root of a PSD Gram matrix split into the two factor blocks.
// Z is (m+n) x (m+n); eigenvalues in [-10 tol, 0) are clipped to zero and
// anything below that raises NotPsd.
Factorization factor_from_gram(const RealMatrix& z, int m, int n, double tol);

// Turns the exact LP decomposition carried by a nu certificate into layers.
// Throws NotExact if the certificate does not carry one.
LayeredFactorization layered_from_nu(const NormCertificate& cert);

}  // namespace approxrank
