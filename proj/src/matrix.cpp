#include "approxrank/matrix.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "approxrank/errors.hpp"

namespace approxrank {

RealMatrix::RealMatrix(int m, int n, double fill) : rows(m), cols(n) {
  if (m <= 0 || n <= 0) throw ValidationError("matrix dimensions must be positive");
  data.assign(static_cast<std::size_t>(m) * n, fill);
}

RealMatrix RealMatrix::identity(int n) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::ones(int m, int n) { return RealMatrix(m, n, 1.0); }

SignMatrix::SignMatrix(int m, int n) : rows(m), cols(n) {
  if (m <= 0 || n <= 0) throw ValidationError("matrix dimensions must be positive");
  entries.assign(static_cast<std::size_t>(m) * n, 1);
}

void SignMatrix::set(int i, int j, int s) {
  if (s != 1 && s != -1) throw ValidationError("sign matrix entries must be -1 or +1");
  entries[static_cast<std::size_t>(i) * cols + j] = static_cast<std::int8_t>(s);
}

RealMatrix SignMatrix::to_real() const {
  RealMatrix m(rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) m.data[k] = entries[k];
  return m;
}

RealMatrix transpose(const RealMatrix& m) {
  RealMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols != b.rows) throw ShapeMismatch("matrix product: inner dimensions differ");
  RealMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("matrix sum: shapes differ");
  RealMatrix c = a;
  for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] += b.data[k];
  return c;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("matrix difference: shapes differ");
  RealMatrix c = a;
  for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] -= b.data[k];
  return c;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix c = a;
  for (double& v : c.data) v *= s;
  return c;
}

RealMatrix entrywise_product(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("entrywise product: shapes differ");
  RealMatrix c = a;
  for (std::size_t k = 0; k < c.data.size(); ++k) c.data[k] *= b.data[k];
  return c;
}

RealMatrix entrywise_product(const SignMatrix& a, const RealMatrix& b) {
  return entrywise_product(a.to_real(), b);
}

RealMatrix entrywise_power(const RealMatrix& a, int s) {
  if (s < 1) throw ValidationError("entrywise power: exponent must be >= 1");
  RealMatrix c = a;
  for (double& v : c.data) {
    double p = v;
    for (int k = 1; k < s; ++k) p *= v;
    v = p;
  }
  return c;
}

double max_abs(const RealMatrix& m) {
  double best = 0.0;
  for (double v : m.data) best = std::max(best, std::fabs(v));
  return best;
}

double frobenius_norm(const RealMatrix& m) {
  double sum = 0.0;
  for (double v : m.data) sum += v * v;
  return std::sqrt(sum);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("max_abs_diff: shapes differ");
  double best = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k)
    best = std::max(best, std::fabs(a.data[k] - b.data[k]));
  return best;
}

void check_finite(const RealMatrix& m, const char* what) {
  for (double v : m.data)
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite entry");
}

namespace {

void read_header(std::istream& in, int& m, int& n) {
  if (!(in >> m >> n)) throw ValidationError("matrix file: missing 'm n' header");
  if (m <= 0 || n <= 0) throw ValidationError("matrix file: dimensions must be positive");
}

}  // namespace

RealMatrix read_real_matrix(std::istream& in) {
  int m = 0, n = 0;
  read_header(in, m, n);
  RealMatrix mat(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double v;
      if (!(in >> v)) throw ValidationError("matrix file: too few entries");
      if (!std::isfinite(v)) throw ValidationError("matrix file: non-finite entry");
      mat(i, j) = v;
    }
  }
  return mat;
}

SignMatrix read_sign_matrix(std::istream& in) {
  int m = 0, n = 0;
  read_header(in, m, n);
  SignMatrix mat(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) throw ValidationError("sign matrix file: too few entries");
      if (tok == "1")
        mat.set(i, j, 1);
      else if (tok == "-1")
        mat.set(i, j, -1);
      else
        throw ValidationError("sign matrix file: entry '" + tok + "' is not 1 or -1");
    }
  }
  return mat;
}

RealMatrix read_real_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_real_matrix(in);
}

SignMatrix read_sign_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_sign_matrix(in);
}

void write_real_matrix(std::ostream& out, const RealMatrix& m) {
  out << m.rows << ' ' << m.cols << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_sign_matrix(std::ostream& out, const SignMatrix& m) {
  out << m.rows << ' ' << m.cols << '\n';
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ' ';
      out << (m.sign(i, j) > 0 ? "1" : "-1");
    }
    out << '\n';
  }
}

void write_real_matrix_file(const std::string& path, const RealMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_real_matrix(out, m);
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* bytes, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

}  // namespace

std::string content_hash(const RealMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::int64_t dims[2] = {m.rows, m.cols};
  h = fnv1a(h, dims, sizeof(dims));
  for (double v : m.data) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h = fnv1a(h, &bits, sizeof(bits));
  }
  return hex64(h);
}

std::string content_hash(const SignMatrix& m) { return content_hash(m.to_real()); }

}  // namespace approxrank
