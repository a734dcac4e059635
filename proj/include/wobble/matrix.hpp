#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wobble {

inline constexpr double kTolEig = 1e-12;
inline constexpr double kTolPd = 1e-12;
inline constexpr double kTolBand = 1e-10;

// Row-major dense matrix; only what the whitening and assembly code needs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& x, const Matrix& y);

// Symmetric matrix stored as its packed upper triangle, so symmetry is
// structural rather than something callers have to maintain.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const std::vector<double>& d);
  // Rejects inputs whose (i,j) and (j,i) entries differ by more than tol.
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows, double tol = 1e-12);
  static SymMatrix from_dense(const Matrix& a, double tol = 1e-12);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }
  void set(int i, int j, double v) { data_[index(i, j)] = v; }

  Matrix dense() const;
  std::vector<std::vector<double>> rows() const;
  double max_abs() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  bool operator==(const SymMatrix& o) const = default;

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * dim_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }

  int dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix x, const SymMatrix& y);
SymMatrix operator-(SymMatrix x, const SymMatrix& y);
SymMatrix operator*(double s, SymMatrix x);

struct EigenDecomp {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns are eigenvectors
};

struct BandParams {
  int m = 1;
  double a = 1.0;
  double b = 2.0;
};

// Cyclic Jacobi with a fixed sweep order; eigenvectors are normalized so the
// first nonzero component is positive.
EigenDecomp eigen_decompose(const SymMatrix& a);

SymMatrix matrix_power(const SymMatrix& a, double r);

// (smallest, largest) eigenvalue.
std::pair<double, double> eta_bounds(const SymMatrix& a);

bool in_band(const SymMatrix& a, const BandParams& p);

bool entrywise_within(const SymMatrix& a, const SymMatrix& b, double eps);

// Largest |a_ij - b_ij|.
double max_entry_gap(const SymMatrix& a, const SymMatrix& b);

}  // namespace wobble
