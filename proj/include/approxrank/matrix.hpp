#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace approxrank {

// Dense real matrix, row-major.
struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(int m, int n, double fill = 0.0);

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  bool same_shape(const RealMatrix& other) const {
    return rows == other.rows && cols == other.cols;
  }

  static RealMatrix identity(int n);
  static RealMatrix ones(int m, int n);
};

// Matrix with entries restricted to {-1, +1}.
struct SignMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int8_t> entries;

  SignMatrix() = default;
  SignMatrix(int m, int n);

  int sign(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
  void set(int i, int j, int s);

  RealMatrix to_real() const;
  bool operator==(const SignMatrix& other) const = default;
};

RealMatrix transpose(const RealMatrix& m);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);

// C[i,j] = A[i,j] * B[i,j].  Shapes must match.
RealMatrix entrywise_product(const RealMatrix& a, const RealMatrix& b);
RealMatrix entrywise_product(const SignMatrix& a, const RealMatrix& b);

// Entrywise s-th power, s >= 1.
RealMatrix entrywise_power(const RealMatrix& a, int s);

double max_abs(const RealMatrix& m);
double frobenius_norm(const RealMatrix& m);

// Largest entrywise |A[i,j] - B[i,j]|.
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

void check_finite(const RealMatrix& m, const char* what);

// Text format: first line "m n", then m rows of n whitespace-separated
// entries.  Sign matrices admit only the tokens "1" and "-1".
RealMatrix read_real_matrix(std::istream& in);
SignMatrix read_sign_matrix(std::istream& in);
RealMatrix read_real_matrix_file(const std::string& path);
SignMatrix read_sign_matrix_file(const std::string& path);
void write_real_matrix(std::ostream& out, const RealMatrix& m);
void write_sign_matrix(std::ostream& out, const SignMatrix& m);
void write_real_matrix_file(const std::string& path, const RealMatrix& m);

// FNV-1a over dimensions and entry bit patterns; stable across runs.
std::string content_hash(const RealMatrix& m);
std::string content_hash(const SignMatrix& m);

}  // namespace approxrank
