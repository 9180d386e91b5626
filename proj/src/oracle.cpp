#include "approxrank/oracle.hpp"

#include <cmath>
#include <limits>

#include "approxrank/errors.hpp"

namespace approxrank {

std::vector<SignMatrix> enumerate_atoms(int m, int n) {
  if (m < 1 || n < 1) throw ValidationError("enumerate_atoms: dimensions must be positive");
  if (m + n - 1 > 15) throw TooLarge("enumerate_atoms: 2^(m+n-1) exceeds 2^15");
  const int nx = 1 << (m - 1);
  const int ny = 1 << (n - 1);
  std::vector<SignMatrix> atoms;
  atoms.reserve(static_cast<std::size_t>(nx) * ny);
  for (int xb = 0; xb < nx; ++xb) {
    std::vector<int> x(m, 1);
    for (int i = 1; i < m; ++i) x[i] = (xb >> (i - 1)) & 1 ? -1 : 1;
    for (int yb = 0; yb < ny; ++yb) {
      std::vector<int> y(n, 1);
      for (int j = 1; j < n; ++j) y[j] = (yb >> (j - 1)) & 1 ? -1 : 1;
      SignMatrix t(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) t.set(i, j, x[i] * y[j]);
      atoms.push_back(std::move(t));
    }
  }
  return atoms;
}

bool is_rank_alpha_one(const SignMatrix& a, double alpha) {
  if (a.rows > 4 || a.cols > 4) throw TooLarge("is_rank_alpha_one: requires m, n <= 4");
  if (!(alpha >= 1.0)) throw ValidationError("is_rank_alpha_one: alpha must be >= 1");
  // A rank-one matrix in the band has the sign pattern of A, and conversely
  // A itself witnesses rank one when its pattern is rank one.
  for (const SignMatrix& t : enumerate_atoms(a.rows, a.cols)) {
    bool plus = true, minus = true;
    for (int i = 0; i < a.rows && (plus || minus); ++i) {
      for (int j = 0; j < a.cols; ++j) {
        if (a.sign(i, j) != t.sign(i, j)) plus = false;
        if (a.sign(i, j) != -t.sign(i, j)) minus = false;
      }
    }
    if (plus || minus) return true;
  }
  return false;
}

BandReport verify_band(const SignMatrix& a, const RealMatrix& b, double alpha, double tol) {
  if (a.rows != b.rows || a.cols != b.cols) throw ShapeMismatch("verify_band: shapes differ");
  BandReport report;
  report.band_min = std::numeric_limits<double>::infinity();
  report.band_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) {
      const double v = a.sign(i, j) * b(i, j);
      report.band_min = std::min(report.band_min, v);
      report.band_max = std::max(report.band_max, v);
      if (v < 1.0 - tol || v > alpha + tol) report.violations.emplace_back(i, j, v);
    }
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace approxrank
