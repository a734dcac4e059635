#include "wobble/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) fail(ErrorKind::DimensionMismatch, "negative matrix shape");
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) fail(ErrorKind::DimensionMismatch, "matrix product shape");
  Matrix z(x.rows(), y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < y.cols(); ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

SymMatrix::SymMatrix(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0) {
  if (dim < 1) fail(ErrorKind::DimensionMismatch, "SymMatrix dimension must be >= 1");
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix s(dim);
  for (int i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix s(static_cast<int>(d.size()));
  for (int i = 0; i < s.dim(); ++i) s.set(i, i, d[i]);
  return s;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows, double tol) {
  const int m = static_cast<int>(rows.size());
  SymMatrix s(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m) fail(ErrorKind::DimensionMismatch, "matrix is not square");
  }
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > tol) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << "," << j << ")";
        fail(ErrorKind::DimensionMismatch, os.str());
      }
      s.set(i, j, rows[i][j]);
    }
  return s;
}

SymMatrix SymMatrix::from_dense(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "matrix is not square");
  SymMatrix s(a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol * std::max(1.0, std::abs(a(i, j))))
        fail(ErrorKind::DimensionMismatch, "matrix is not symmetric");
      s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    }
  return s;
}

Matrix SymMatrix::dense() const {
  Matrix d(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) d(i, j) = (*this)(i, j);
  return d;
}

std::vector<std::vector<double>> SymMatrix::rows() const {
  std::vector<std::vector<double>> r(dim_, std::vector<double>(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r[i][j] = (*this)(i, j);
  return r;
}

double SymMatrix::max_abs() const {
  double mx = 0.0;
  for (double v : data_) mx = std::max(mx, std::abs(v));
  return mx;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim_ != dim_) fail(ErrorKind::DimensionMismatch, "SymMatrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim_ != dim_) fail(ErrorKind::DimensionMismatch, "SymMatrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

SymMatrix operator+(SymMatrix x, const SymMatrix& y) { return x += y; }
SymMatrix operator-(SymMatrix x, const SymMatrix& y) { return x -= y; }
SymMatrix operator*(double s, SymMatrix x) { return x *= s; }

namespace {

constexpr int kMaxSweeps = 100;

double off_norm2(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return s;
}

}  // namespace

EigenDecomp eigen_decompose(const SymMatrix& src) {
  const int m = src.dim();
  Matrix a = src.dense();
  Matrix v(m, m);
  for (int i = 0; i < m; ++i) v(i, i) = 1.0;

  double total = 0.0;
  for (double x : a.data()) total += x * x;
  const double target = kTolEig * kTolEig * std::max(total, 1e-300);

  int sweep = 0;
  while (off_norm2(a) > target) {
    if (++sweep > kMaxSweeps) fail(ErrorKind::NumericalFailure, "Jacobi iteration did not converge");
    for (int p = 0; p < m - 1; ++p)
      for (int q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Standard symmetric Schur rotation (Golub & Van Loan 8.5.2).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < m; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomp out{std::vector<double>(m), Matrix(m, m)};
  for (int c = 0; c < m; ++c) {
    const int src_col = order[c];
    out.values[c] = a(src_col, src_col);
    double sign = 1.0;
    for (int k = 0; k < m; ++k) {
      if (std::abs(v(k, src_col)) > 1e-14) {
        sign = v(k, src_col) > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (int k = 0; k < m; ++k) out.vectors(k, c) = sign * v(k, src_col);
  }
  return out;
}

SymMatrix matrix_power(const SymMatrix& a, double r) {
  const EigenDecomp e = eigen_decompose(a);
  const int m = a.dim();
  if (e.values.back() <= kTolPd) {
    std::ostringstream os;
    os << "smallest eigenvalue " << e.values.back() << " <= " << kTolPd;
    fail(ErrorKind::NotPositiveDefinite, os.str());
  }
  std::vector<double> d(m);
  for (int i = 0; i < m; ++i) d[i] = std::pow(e.values[i], r);
  SymMatrix out(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += e.vectors(i, k) * d[k] * e.vectors(j, k);
      out.set(i, j, s);
    }
  return out;
}

std::pair<double, double> eta_bounds(const SymMatrix& a) {
  const EigenDecomp e = eigen_decompose(a);
  const double lo = e.values.back(), hi = e.values.front();
  // For a positive semi-definite matrix every entry is bounded by the spectral radius.
  if (lo >= 0.0) {
    const double slack = 1e-10 * std::max(1.0, hi);
    if (a.max_abs() > hi + slack)
      fail(ErrorKind::InternalConsistency, "entry exceeds largest eigenvalue of a PSD matrix");
  }
  return {lo, hi};
}

bool in_band(const SymMatrix& a, const BandParams& p) {
  if (a.dim() != p.m) return false;
  const auto [lo, hi] = eta_bounds(a);
  return lo >= p.a - kTolBand && hi <= p.b + kTolBand;
}

double max_entry_gap(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "entrywise comparison of different sizes");
  double mx = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) mx = std::max(mx, std::abs(a(i, j) - b(i, j)));
  return mx;
}

bool entrywise_within(const SymMatrix& a, const SymMatrix& b, double eps) { return max_entry_gap(a, b) <= eps; }

}  // namespace wobble
