#pragma once

#include <vector>

#include "approxrank/matrix.hpp"

namespace approxrank {

// Thin SVD: M = U * diag(sigma) * V^T with U (m x k), V (n x k),
// k = min(m, n), singular values sorted nonincreasing, factors orthonormal.
struct SvdResult {
  std::vector<double> singular_values;
  RealMatrix u;
  RealMatrix v;

  RealMatrix reconstruct() const;
};

// One-sided Jacobi on the smaller Gram dimension.
SvdResult svd(const RealMatrix& m);

// Sum of singular values.
double trace_norm(const RealMatrix& m);

// Largest singular value.
double spectral_norm(const RealMatrix& m);

// Number of singular values strictly above tau * sigma_max.
// tau < 0 selects the default 1e-9 * max(rows, cols).
int numerical_rank(const RealMatrix& m, double tau = -1.0);

// Symmetric eigendecomposition A = Q * diag(lambda) * Q^T, eigenvalues
// sorted nonincreasing, Q orthonormal.  Cyclic Jacobi rotations.
struct EigResult {
  std::vector<double> eigenvalues;
  RealMatrix q;
};

EigResult eigen_symmetric(const RealMatrix& a);

// Cholesky factor L with A = L * L^T; returns false if a pivot is not
// strictly positive (matrix not positive definite to working precision).
bool cholesky(const RealMatrix& a, RealMatrix& l);

// Solves A x = b given the Cholesky factor L of A.
std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b);

}  // namespace approxrank
