#include "wobble/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "wobble/errors.hpp"
#include "wobble/fft.hpp"
#include "wobble/kernels.hpp"

namespace wobble {

CosineSeries::CosineSeries(double a0_, std::vector<double> coeffs_) : a0(a0_), coeffs(std::move(coeffs_)) { trim(); }

double CosineSeries::at_zero() const {
  double s = a0;
  for (double a : coeffs) s += a;
  return s;
}

void CosineSeries::trim() {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
}

CosineSeries operator+(const CosineSeries& f, const CosineSeries& g) {
  std::vector<double> c(std::max(f.coeffs.size(), g.coeffs.size()), 0.0);
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) c[k] += f.coeffs[k];
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) c[k] += g.coeffs[k];
  return CosineSeries(f.a0 + g.a0, std::move(c));
}

CosineSeries operator-(const CosineSeries& f) { return -1.0 * f; }

CosineSeries operator*(double s, const CosineSeries& f) {
  std::vector<double> c(f.coeffs);
  for (double& v : c) v *= s;
  return CosineSeries(s * f.a0, std::move(c));
}

double eval(const CosineSeries& f, double lambda) {
  double s = f.a0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) s += f.coeffs[k] * std::cos(static_cast<double>(k + 1) * lambda);
  return s;
}

double psi(const CosineSeries& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) s += static_cast<double>(k + 1) * f.coeffs[k] * f.coeffs[k];
  return s;
}

bool psi_subadditive_check(const CosineSeries& f, const CosineSeries& g) {
  return std::sqrt(psi(f + g)) <= std::sqrt(psi(f)) + std::sqrt(psi(g)) + 1e-12;
}

double fejer_kernel(int n, double lambda) {
  const double dn = n;
  if (std::abs(lambda) < 1e-8) return dn - dn * (dn * dn - 1.0) * lambda * lambda / 12.0;
  const double num = std::sin(dn * lambda / 2.0);
  const double den = std::sin(lambda / 2.0);
  return num * num / (den * den * dn);
}

GridSpec::GridSpec(std::size_t s) : size(s) {
  if (s < 4 || !std::has_single_bit(s)) {
    std::ostringstream os;
    os << "grid size " << s << " must be a power of two >= 4";
    fail(ErrorKind::Configuration, os.str());
  }
}

std::vector<double> eval_half_grid(const CosineSeries& f, const GridSpec& grid) {
  const std::size_t p = grid.half();
  if (f.coeffs.size() > p) {
    std::ostringstream os;
    os << "series degree " << f.coeffs.size() << " exceeds half grid " << p;
    fail(ErrorKind::Configuration, os.str());
  }
  std::vector<double> x(p + 1, 0.0);
  x[0] = f.a0;
  for (std::size_t k = 1; k <= f.coeffs.size(); ++k) x[k] = k == p ? f.coeffs[k - 1] : 0.5 * f.coeffs[k - 1];
  fft::dct1(x);
  return x;
}

namespace {

std::vector<double> exp_table(const CosineSeries& f, const GridSpec& grid) {
  std::vector<double> phi = eval_half_grid(f, grid);
  for (double& v : phi) v = std::exp(v);
  fft::dct1(phi);
  const double scale = 1.0 / static_cast<double>(grid.size);
  for (double& v : phi) v *= scale;
  return phi;
}

}  // namespace

AutocovarianceTable autocov_of_exp(const CosineSeries& f, const GridSpec& grid, std::size_t kmax) {
  if (grid.size < 4 * kmax) {
    std::ostringstream os;
    os << "grid size " << grid.size << " too small for kmax " << kmax;
    fail(ErrorKind::Configuration, os.str());
  }
  std::vector<double> r = exp_table(f, grid);
  r.resize(kmax + 1);
  return {std::move(r), grid.size};
}

AutocovarianceTable autocov_of_exp_adaptive(const CosineSeries& f, const GridSpec& start, std::size_t max_size,
                                            double tail_tol) {
  std::size_t size = std::max(start.size, std::bit_ceil(std::size_t{4} * std::max<std::size_t>(f.coeffs.size(), 1)));
  while (true) {
    if (size > max_size) {
      std::ostringstream os;
      os << "autocovariance tail does not decay within grid cap " << max_size;
      fail(ErrorKind::Configuration, os.str());
    }
    GridSpec grid(size);
    std::vector<double> r = exp_table(f, grid);
    const std::size_t p = grid.half();
    double tail = 0.0;
    for (std::size_t k = p / 2; k <= p; ++k) tail = std::max(tail, std::abs(r[k]));
    if (tail <= tail_tol * r[0]) {
      r.resize(p / 2 + 1);
      return {std::move(r), size};
    }
    size *= 2;
  }
}

AutocovarianceTable trim_table(const AutocovarianceTable& t, double rel) {
  AutocovarianceTable out = t;
  if (out.r.empty()) return out;
  const double cut = rel * std::abs(out.r[0]);
  std::size_t last = 0;
  for (std::size_t k = 0; k < out.r.size(); ++k)
    if (std::abs(out.r[k]) >= cut) last = k;
  out.r.resize(last + 1);
  return out;
}

double fejer_mean(const AutocovarianceTable& t, long long n) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "Fejer mean needs n >= 1");
  const double dn = static_cast<double>(n);
  double s = t.at(0);
  const long long top = std::min<long long>(n - 1, static_cast<long long>(t.r.size()) - 1);
  for (long long k = 1; k <= top; ++k) s += 2.0 * (1.0 - static_cast<double>(k) / dn) * t.r[k];
  return s;
}

double max_abs_fejer_mean(const AutocovarianceTable& t, long long n_max) {
  if (n_max < 1) return 0.0;
  const long long kk = static_cast<long long>(t.r.size()) - 1;
  const long long top = std::min(kk + 1, n_max);
  double a = t.at(0), b = 0.0, worst = 0.0;
  for (long long n = 1; n <= top; ++n) {
    if (n >= 2) {
      a += 2.0 * t.r[n - 1];
      b += 2.0 * static_cast<double>(n - 1) * t.r[n - 1];
    }
    worst = std::max(worst, std::abs(a - b / static_cast<double>(n)));
  }
  // Past the table a - b/n is monotone in n; the extremes sit at the ends.
  if (n_max > top) {
    worst = std::max(worst, std::abs(a - b / static_cast<double>(top + 1)));
    worst = std::max(worst, std::abs(a - b / static_cast<double>(n_max)));
  }
  return worst;
}

double fejer_integral_exp(const CosineSeries& f, long long n, const GridSpec& grid) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "Fejer integral needs n >= 1");
  const AutocovarianceTable t = autocov_of_exp(f, grid, static_cast<std::size_t>(n - 1));
  return fejer_mean(t, n);
}

double fejer_integral_direct(const CosineSeries& f, int n, const GridSpec& grid) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "Fejer integral needs n >= 1");
  if (grid.size < 4 * static_cast<std::size_t>(n)) fail(ErrorKind::Configuration, "grid too small for Fejer order");
  std::vector<double> phi = eval_half_grid(f, grid);
  for (double& v : phi) v = std::exp(v);
  return kernels::omp::fejer_quadrature(n, phi);
}

RankResult fejer_rank_certified(const CosineSeries& f, double eps, const GridSpec& grid, long long n_max,
                                double margin) {
  if (!(eps > 0.0)) fail(ErrorKind::Configuration, "Fejer rank needs eps > 0");
  if (n_max < 1) fail(ErrorKind::Configuration, "Fejer rank needs n_max >= 1");
  const AutocovarianceTable t = autocov_of_exp_adaptive(f, grid);
  const double e0 = std::exp(f.at_zero());
  const double thr = eps * (1.0 - margin);
  const long long kk = static_cast<long long>(t.r.size()) - 1;

  // Explicit scan over n = 1..min(K+1, n_max) with running prefix sums.
  const long long explicit_top = std::min(kk + 1, n_max);
  std::vector<double> dev(static_cast<std::size_t>(explicit_top) + 1, 0.0);
  double a = t.r[0], b = 0.0;
  long long last_bad = 0;
  for (long long n = 1; n <= explicit_top; ++n) {
    if (n >= 2) {
      a += 2.0 * t.r[n - 1];
      b += 2.0 * static_cast<double>(n - 1) * t.r[n - 1];
    }
    dev[n] = std::abs(e0 - (a - b / static_cast<double>(n)));
    if (dev[n] > thr) last_bad = n;
  }

  RankResult out;
  out.grid_size = t.grid_size;
  out.rank = last_bad + 1;

  // Beyond K+1 the prefix sums are frozen: deviation(n) = |(a - e0) - b/n|,
  // monotone in n, so the passing set is an interval ending at n_max.
  auto tail_dev = [&](long long n) { return std::abs((a - e0) - b / static_cast<double>(n)); };
  double worst_tail = 0.0;
  if (n_max > explicit_top) {
    const long long lo = explicit_top + 1;
    if (tail_dev(n_max) > thr) {
      std::ostringstream os;
      os << "no Fejer rank <= " << n_max << " at eps " << eps << " (deviation " << tail_dev(n_max) << ")";
      fail(ErrorKind::RankNotFound, os.str());
    }
    long long l = lo, h = n_max;
    while (l < h) {
      const long long mid = l + (h - l) / 2;
      if (tail_dev(mid) <= thr) h = mid;
      else l = mid + 1;
    }
    if (l > lo) out.rank = l;
    worst_tail = std::max(tail_dev(std::max(out.rank, lo)), tail_dev(n_max));
  } else if (out.rank > n_max) {
    std::ostringstream os;
    os << "no Fejer rank <= " << n_max << " at eps " << eps;
    fail(ErrorKind::RankNotFound, os.str());
  }

  double worst = worst_tail;
  for (long long n = out.rank; n <= explicit_top; ++n) worst = std::max(worst, dev[n]);
  out.worst_dev = worst;
  return out;
}

long long fejer_rank(const CosineSeries& f, double eps, const GridSpec& grid, long long n_max) {
  return fejer_rank_certified(f, eps, grid, n_max).rank;
}

}  // namespace wobble
