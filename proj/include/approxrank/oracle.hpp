#pragma once

#include <tuple>
#include <vector>

#include "approxrank/matrix.hpp"

namespace approxrank {

// Rank-one sign matrices x y^T, one representative per {T, -T} pair
// (canonical form: x[0] = y[0] = +1).  Signed coefficients make the other
// member of each pair redundant.  Size gate: 2^(m+n-1) <= 2^15.
std::vector<SignMatrix> enumerate_atoms(int m, int n);

// True iff sign(A) equals +-(x y^T) for some atom, which happens exactly
// when the alpha-approximation rank of A is one.  Requires m, n <= 4.
bool is_rank_alpha_one(const SignMatrix& a, double alpha);

struct BandReport {
  double band_min = 0.0;
  double band_max = 0.0;
  bool pass = false;
  std::vector<std::tuple<int, int, double>> violations;  // (i, j, A[i,j]*B[i,j])
};

// Entrywise check of J <= A . B <= alpha J with slack tol.
BandReport verify_band(const SignMatrix& a, const RealMatrix& b, double alpha, double tol);

}  // namespace approxrank
