#include "wobble/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wobble/spectral.hpp"

namespace wobble::kernels {

namespace {

double fejer_chunk(int n, const std::vector<double>& phi, std::size_t lo, std::size_t hi) {
  const std::size_t p = phi.size() - 1;
  double s = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    const double w = (j == 0 || j == p) ? 1.0 : 2.0;
    s += w * fejer_kernel(n, std::numbers::pi * static_cast<double>(j) / static_cast<double>(p)) * phi[j];
  }
  return s;
}

std::size_t chunks(std::size_t len) { return (len + kChunk - 1) / kChunk; }

double cosine_point(double a0, const std::vector<double>& a, double x) {
  double s = a0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::cos(static_cast<double>(k + 1) * x);
  return s;
}

void outer_chunk(const std::vector<double>& rows, std::size_t d, std::size_t lo, std::size_t hi, double* acc) {
  for (std::size_t r = lo; r < hi; ++r) {
    const double* row = rows.data() + r * d;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) acc[i * d + j] += row[i] * row[j];
  }
}

}  // namespace

namespace serial {

double fejer_quadrature(int n, const std::vector<double>& phi_half) {
  const std::size_t len = phi_half.size();
  const std::size_t nc = chunks(len);
  double total = 0.0;
  for (std::size_t c = 0; c < nc; ++c)
    total += fejer_chunk(n, phi_half, c * kChunk, std::min(len, (c + 1) * kChunk));
  return total / (2.0 * static_cast<double>(len - 1));
}

std::vector<double> cosine_eval(double a0, const std::vector<double>& a, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = cosine_point(a0, a, x[i]);
  return out;
}

std::vector<double> outer_sum(const std::vector<double>& rows, std::size_t d) {
  const std::size_t n = d == 0 ? 0 : rows.size() / d;
  std::vector<double> total(d * d, 0.0), part(d * d);
  for (std::size_t c = 0; c < chunks(n); ++c) {
    std::fill(part.begin(), part.end(), 0.0);
    outer_chunk(rows, d, c * kChunk, std::min(n, (c + 1) * kChunk), part.data());
    for (std::size_t i = 0; i < d * d; ++i) total[i] += part[i];
  }
  return total;
}

}  // namespace serial

namespace omp {

double fejer_quadrature(int n, const std::vector<double>& phi_half) {
  const std::size_t len = phi_half.size();
  const long nc = static_cast<long>(chunks(len));
  std::vector<double> part(nc);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c)
    part[c] = fejer_chunk(n, phi_half, c * kChunk, std::min(len, (c + 1) * kChunk));
  double total = 0.0;
  for (double v : part) total += v;
  return total / (2.0 * static_cast<double>(len - 1));
}

std::vector<double> cosine_eval(double a0, const std::vector<double>& a, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = cosine_point(a0, a, x[i]);
  return out;
}

std::vector<double> outer_sum(const std::vector<double>& rows, std::size_t d) {
  const std::size_t n = d == 0 ? 0 : rows.size() / d;
  const long nc = static_cast<long>(chunks(n));
  std::vector<double> part(static_cast<std::size_t>(nc) * d * d, 0.0);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c)
    outer_chunk(rows, d, c * kChunk, std::min(n, (c + 1) * kChunk), part.data() + c * d * d);
  std::vector<double> total(d * d, 0.0);
  for (long c = 0; c < nc; ++c)
    for (std::size_t i = 0; i < d * d; ++i) total[i] += part[c * d * d + i];
  return total;
}

}  // namespace omp

}  // namespace wobble::kernels
