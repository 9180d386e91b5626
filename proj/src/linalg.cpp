#include "approxrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "approxrank/errors.hpp"

namespace approxrank {

RealMatrix SvdResult::reconstruct() const {
  const int k = static_cast<int>(singular_values.size());
  RealMatrix us = u;
  for (int i = 0; i < us.rows; ++i)
    for (int j = 0; j < k; ++j) us(i, j) *= singular_values[j];
  return us * transpose(v);
}

namespace {

constexpr int kMaxJacobiSweeps = 100;

// One-sided Jacobi on the columns of b (m x n, m >= n).  On return the
// columns of b are mutually orthogonal and v accumulates the right
// rotations.  Throws NumericalFailure if the sweep cap is hit.
void one_sided_jacobi(RealMatrix& b, RealMatrix& v) {
  const int m = b.rows;
  const int n = b.cols;
  const double eps = 1e-15;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    // Columns this far below the dominant one are numerically zero; pairs
    // touching them would only churn on rounding noise.
    double max_sq = 0.0;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += b(i, j) * b(i, j);
      max_sq = std::max(max_sq, s);
    }
    const double tiny_sq = max_sq * 1e-28 + 1e-280;
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < m; ++i) {
          const double bip = b(i, p), biq = b(i, q);
          app += bip * bip;
          aqq += biq * biq;
          apq += bip * biq;
        }
        if (app <= tiny_sq || aqq <= tiny_sq) continue;
        if (std::fabs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < m; ++i) {
          const double bip = b(i, p), biq = b(i, q);
          b(i, p) = c * bip - s * biq;
          b(i, q) = s * bip + c * biq;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalFailure("svd: Jacobi sweeps did not converge");
}

// Extends the first `known` orthonormal columns of u to a full orthonormal
// set by Gram-Schmidt against standard basis vectors.
void complete_orthonormal(RealMatrix& u, int known) {
  const int m = u.rows;
  const int k = u.cols;
  int next = known;
  for (int e = 0; e < m && next < k; ++e) {
    std::vector<double> cand(m, 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < next; ++j) {
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += cand[i] * u(i, j);
        for (int i = 0; i < m; ++i) cand[i] -= dot * u(i, j);
      }
    }
    double norm = 0.0;
    for (double x : cand) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (int i = 0; i < m; ++i) u(i, next) = cand[i] / norm;
    ++next;
  }
  if (next < k) throw NumericalFailure("svd: could not complete orthonormal basis");
}

}  // namespace

SvdResult svd(const RealMatrix& m_in) {
  check_finite(m_in, "svd");
  const bool swapped = m_in.rows < m_in.cols;
  RealMatrix b = swapped ? transpose(m_in) : m_in;
  const int m = b.rows;
  const int n = b.cols;

  RealMatrix v = RealMatrix::identity(n);
  one_sided_jacobi(b, v);

  std::vector<double> sigma(n);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    for (int i = 0; i < m; ++i) norm += b(i, j) * b(i, j);
    sigma[j] = std::sqrt(norm);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return sigma[a] > sigma[c]; });

  RealMatrix u(m, n);
  RealMatrix vs(n, n);
  std::vector<double> sorted(n);
  const double sigma_max = sigma.empty() ? 0.0 : sigma[order[0]];
  int known = 0;
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    sorted[j] = sigma[src];
    for (int i = 0; i < n; ++i) vs(i, j) = v(i, src);
    if (sigma[src] > sigma_max * 1e-14 && sigma[src] > 0.0) {
      for (int i = 0; i < m; ++i) u(i, j) = b(i, src) / sigma[src];
      known = j + 1;
    }
  }
  complete_orthonormal(u, known);

  SvdResult result;
  result.singular_values = std::move(sorted);
  if (swapped) {
    result.u = std::move(vs);
    result.v = std::move(u);
  } else {
    result.u = std::move(u);
    result.v = std::move(vs);
  }
  return result;
}

double trace_norm(const RealMatrix& m) {
  const SvdResult s = svd(m);
  double sum = 0.0;
  for (double x : s.singular_values) sum += x;
  return sum;
}

double spectral_norm(const RealMatrix& m) {
  const SvdResult s = svd(m);
  return s.singular_values.empty() ? 0.0 : s.singular_values.front();
}

int numerical_rank(const RealMatrix& m, double tau) {
  if (tau < 0.0) tau = 1e-9 * std::max(m.rows, m.cols);
  const SvdResult s = svd(m);
  if (s.singular_values.empty()) return 0;
  const double cutoff = tau * s.singular_values.front();
  int rank = 0;
  for (double x : s.singular_values)
    if (x > cutoff && x > 0.0) ++rank;
  return rank;
}

EigResult eigen_symmetric(const RealMatrix& a_in) {
  if (a_in.rows != a_in.cols) throw ShapeMismatch("eigen_symmetric: matrix not square");
  const int n = a_in.rows;
  RealMatrix a = a_in;
  RealMatrix q = RealMatrix::identity(n);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    double diag = 0.0;
    for (int p = 0; p < n; ++p) diag = std::max(diag, std::fabs(a(p, p)));
    if (off <= (1e-30 + 1e-28 * diag * diag)) break;
    if (sweep == kMaxJacobiSweeps - 1)
      throw NumericalFailure("eigen_symmetric: Jacobi sweeps did not converge");

    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apq = a(p, r);
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(r, r);
        if (std::fabs(apq) < 1e-16 * (std::fabs(app) + std::fabs(aqq))) continue;
        const double theta = (aqq - app) / (2.0 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, r);
          a(i, p) = c * aip - s * aiq;
          a(i, r) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(r, j);
          a(p, j) = c * apj - s * aqj;
          a(r, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const double qip = q(i, p), qiq = q(i, r);
          q(i, p) = c * qip - s * qiq;
          q(i, r) = s * qip + c * qiq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) > a(y, y); });

  EigResult result;
  result.eigenvalues.resize(n);
  result.q = RealMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    result.eigenvalues[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) result.q(i, j) = q(i, order[j]);
  }
  return result;
}

bool cholesky(const RealMatrix& a, RealMatrix& l) {
  if (a.rows != a.cols) throw ShapeMismatch("cholesky: matrix not square");
  const int n = a.rows;
  l = RealMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const RealMatrix& l, const std::vector<double>& b) {
  const int n = l.rows;
  std::vector<double> y(b);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

}  // namespace approxrank
