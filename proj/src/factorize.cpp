#include "approxrank/factorize.hpp"

#include <cmath>

#include "approxrank/errors.hpp"
#include "approxrank/linalg.hpp"
#include "approxrank/norms.hpp"

namespace approxrank {

RealMatrix Factorization::product() const { return transpose(x) * y; }

namespace {

double max_col_norm(const RealMatrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += m(i, j) * m(i, j);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace

double Factorization::max_col_norm_x() const { return max_col_norm(x); }
double Factorization::max_col_norm_y() const { return max_col_norm(y); }

double column_norm_bound(const RealMatrix& x, const RealMatrix& y) {
  return std::max(max_col_norm(x), max_col_norm(y));
}

double LayeredFactorization::total_weight() const {
  double sum = 0.0;
  for (const Layer& l : layers) sum += l.beta;
  return sum;
}

Factorization LayeredFactorization::induced() const {
  const int k = static_cast<int>(layers.size());
  Factorization f;
  f.x = RealMatrix(std::max(k, 1), rows_m);
  f.y = RealMatrix(std::max(k, 1), cols_n);
  for (int i = 0; i < k; ++i) {
    const Layer& l = layers[i];
    const double root = std::sqrt(l.beta);
    for (int j = 0; j < rows_m; ++j) f.x(i, j) = root * l.sign * l.x[j];
    for (int j = 0; j < cols_n; ++j) f.y(i, j) = root * l.y[j];
  }
  f.col_bound = column_norm_bound(f.x, f.y);
  return f;
}

RealMatrix LayeredFactorization::reconstruct() const {
  RealMatrix m(rows_m, cols_n);
  for (const Layer& l : layers)
    for (int i = 0; i < rows_m; ++i)
      for (int j = 0; j < cols_n; ++j) m(i, j) += l.beta * l.sign * l.x[i] * l.y[j];
  return m;
}

Factorization factor_from_gram(const RealMatrix& z, int m, int n, double tol) {
  if (z.rows != z.cols || z.rows != m + n)
    throw ShapeMismatch("factor_from_gram: Z must be (m+n) x (m+n)");
  const EigResult eig = eigen_symmetric(z);
  const int d = m + n;
  for (double lam : eig.eigenvalues)
    if (lam < -10.0 * tol) throw NotPsd("factor_from_gram: Gram matrix not PSD to tolerance");

  // Root = diag(sqrt(clipped eigenvalues)) * Q^T, so Root^T Root = Z.
  RealMatrix root(d, d);
  for (int k = 0; k < d; ++k) {
    const double lam = std::max(eig.eigenvalues[k], 0.0);
    const double r = std::sqrt(lam);
    for (int j = 0; j < d; ++j) root(k, j) = r * eig.q(j, k);
  }

  Factorization f;
  f.x = RealMatrix(d, m);
  f.y = RealMatrix(d, n);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < m; ++j) f.x(k, j) = root(k, j);
    for (int j = 0; j < n; ++j) f.y(k, j) = root(k, m + j);
  }
  f.col_bound = column_norm_bound(f.x, f.y);
  return f;
}

LayeredFactorization layered_from_nu(const NormCertificate& cert) {
  if (!cert.decomposition)
    throw NotExact("layered_from_nu: certificate carries no exact LP decomposition");
  LayeredFactorization lf;
  const std::vector<Layer>& terms = *cert.decomposition;
  if (terms.empty()) throw NotExact("layered_from_nu: empty decomposition");
  lf.rows_m = static_cast<int>(terms.front().x.size());
  lf.cols_n = static_cast<int>(terms.front().y.size());
  for (const Layer& t : terms)
    if (t.beta > 0.0) lf.layers.push_back(t);
  return lf;
}

}  // namespace approxrank
