#pragma once

// Brute-force reference computations for the tests. Nothing here calls the
// library's numerical paths; everything is direct summation.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wobble/matrix.hpp"
#include "wobble/spectral.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double series_at(const wobble::CosineSeries& f, double lam) {
  double s = f.a0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) s += f.coeffs[k] * std::cos(static_cast<double>(k + 1) * lam);
  return s;
}

// F_n as its cosine sum 1 + 2 sum_{k<n} (1 - k/n) cos(k lam).
inline double fejer_sum(int n, double lam) {
  double s = 1.0;
  for (int k = 1; k < n; ++k) s += 2.0 * (1.0 - static_cast<double>(k) / n) * std::cos(k * lam);
  return s;
}

// (1/2pi) int_{-pi}^{pi} g, periodic trapezoid on `pts` nodes.
template <class G>
double mean_over_circle(G g, int pts) {
  double s = 0.0;
  for (int j = 0; j < pts; ++j) s += g(-kPi + 2.0 * kPi * j / pts);
  return s / pts;
}

inline double psi_by_quadrature(const wobble::CosineSeries& f, int pts = 4096) {
  double total = 0.0;
  for (int k = 1; k <= f.degree() + 2; ++k) {
    const double psik = 2.0 * mean_over_circle([&](double l) { return series_at(f, l) * std::cos(k * l); }, pts);
    total += k * psik * psik;
  }
  return total;
}

inline double fejer_integral(const wobble::CosineSeries& f, int n, int pts) {
  return mean_over_circle([&](double l) { return fejer_sum(n, l) * std::exp(series_at(f, l)); }, pts);
}

inline double autocov(const wobble::CosineSeries& f, int k, int pts) {
  return mean_over_circle([&](double l) { return std::cos(k * l) * std::exp(series_at(f, l)); }, pts);
}

// The six perturbation conclusions measured by brute force from f and h.
struct PerturbMeasure {
  double lo = 0.0, hi = 0.0;  // range of h on the grid
  double psi = 0.0;
  double center = 0.0;     // h(0)
  double l1 = 0.0;         // int |h - f| d lambda
  double fejer = 0.0;      // max_n |int F_n (e^h - e^f)| d lambda
  double fejer_neg = 0.0;  // same for e^-h, e^-f
};

inline PerturbMeasure measure_perturbation(const wobble::CosineSeries& f, const wobble::CosineSeries& h,
                                           int fejer_cap, int pts = 4096) {
  PerturbMeasure out;
  out.lo = 1e300;
  out.hi = -1e300;
  double l1 = 0.0;
  for (int j = 0; j < pts; ++j) {
    const double lam = -kPi + 2.0 * kPi * j / pts;
    const double v = series_at(h, lam);
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
    l1 += std::abs(v - series_at(f, lam));
  }
  out.l1 = l1 / pts * 2.0 * kPi;
  for (int k = 1; k <= h.degree(); ++k) out.psi += k * h.coeffs[k - 1] * h.coeffs[k - 1];
  out.center = series_at(h, 0.0);
  for (int n = 1; n <= fejer_cap; ++n) {
    out.fejer = std::max(out.fejer, 2.0 * kPi * std::abs(fejer_integral(h, n, pts) - fejer_integral(f, n, pts)));
    out.fejer_neg =
        std::max(out.fejer_neg, 2.0 * kPi * std::abs(fejer_integral(-h, n, pts) - fejer_integral(-f, n, pts)));
  }
  return out;
}

inline double harmonic(long long m) {
  double h = 0.0;
  for (long long k = 1; k <= m; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

inline wobble::CosineSeries random_series(std::mt19937_64& rng, int max_degree, double scale) {
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::uniform_real_distribution<double> u(-scale, scale);
  const int d = deg(rng);
  std::vector<double> a(d);
  for (int k = 0; k < d; ++k) a[k] = u(rng) / std::sqrt(static_cast<double>(k + 1));
  return wobble::CosineSeries(u(rng), a);
}

// Haar-ish orthogonal matrix by Gram-Schmidt on Gaussian columns.
inline wobble::Matrix random_orthogonal(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> z;
  wobble::Matrix q(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> v(m);
    for (double& x : v) x = z(rng);
    for (int p = 0; p < j; ++p) {
      double d = 0.0;
      for (int i = 0; i < m; ++i) d += v[i] * q(i, p);
      for (int i = 0; i < m; ++i) v[i] -= d * q(i, p);
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (int i = 0; i < m; ++i) q(i, j) = v[i] / n;
  }
  return q;
}

// R diag(eig) R^T with eigenvalues drawn from [lo, hi].
inline wobble::SymMatrix random_spd(std::mt19937_64& rng, int m, double lo, double hi,
                                    std::vector<double>* eig_out = nullptr) {
  std::uniform_real_distribution<double> u(lo, hi);
  const wobble::Matrix r = random_orthogonal(rng, m);
  std::vector<double> eig(m);
  for (double& e : eig) e = u(rng);
  wobble::SymMatrix a(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += r(i, k) * eig[k] * r(j, k);
      a.set(i, j, s);
    }
  if (eig_out) *eig_out = eig;
  return a;
}

inline double max_abs_diff(const wobble::Matrix& a, const wobble::Matrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace oracle
