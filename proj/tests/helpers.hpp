#pragma once

#include <vector>

#include "approxrank/matrix.hpp"
#include "approxrank/rng.hpp"

namespace approxrank::testutil {

inline RealMatrix h2() {
  RealMatrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = -1;
  return m;
}

inline SignMatrix h2_sign() {
  SignMatrix m(2, 2);
  m.set(1, 1, -1);
  return m;
}

// Sylvester construction, n a power of two.
inline SignMatrix hadamard(int n) {
  SignMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.set(i, j, __builtin_popcount(i & j) % 2 ? -1 : 1);
  return m;
}

inline SignMatrix random_sign_matrix(int m, int n, Rng& rng) {
  SignMatrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a.set(i, j, rng.next_sign());
  return a;
}

inline RealMatrix random_rank_r(int m, int n, int r, Rng& rng) {
  RealMatrix x(m, r), y(r, n);
  for (double& v : x.data) v = rng.next_gaussian();
  for (double& v : y.data) v = rng.next_gaussian();
  return x * y;
}

inline RealMatrix random_integer_matrix(int m, int n, int lo, int hi, Rng& rng) {
  RealMatrix a(m, n);
  for (double& v : a.data)
    v = static_cast<double>(lo + static_cast<int>(rng.next_below(hi - lo + 1)));
  return a;
}

// All 512 3x3 sign matrices, index-encoded.
inline SignMatrix sign_matrix_from_bits(int m, int n, int bits) {
  SignMatrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a.set(i, j, (bits >> (i * n + j)) & 1 ? -1 : 1);
  return a;
}

}  // namespace approxrank::testutil
