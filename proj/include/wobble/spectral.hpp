#pragma once

#include <cstddef>
#include <vector>

namespace wobble {

// f(lambda) = a0 + sum_{k>=1} coeffs[k-1] cos(k lambda), with trailing zeros trimmed.
struct CosineSeries {
  double a0 = 0.0;
  std::vector<double> coeffs;

  CosineSeries() = default;
  CosineSeries(double a0_, std::vector<double> coeffs_);

  int degree() const { return static_cast<int>(coeffs.size()); }
  double at_zero() const;
  void trim();

  bool operator==(const CosineSeries&) const = default;
};

CosineSeries operator+(const CosineSeries& f, const CosineSeries& g);
CosineSeries operator-(const CosineSeries& f);
CosineSeries operator*(double s, const CosineSeries& f);

double eval(const CosineSeries& f, double lambda);

// sum_k k a_k^2
double psi(const CosineSeries& f);
bool psi_subadditive_check(const CosineSeries& f, const CosineSeries& g);

double fejer_kernel(int n, double lambda);

// Uniform periodic grid of `size` points; the even integrands used here are
// handled on the half grid lambda_j = pi j / P, j = 0..P, P = size / 2.
struct GridSpec {
  std::size_t size = std::size_t{1} << 18;

  explicit GridSpec(std::size_t s = std::size_t{1} << 18);
  std::size_t half() const { return size / 2; }
};

// r[k] = (1/2pi) int e^{ik lambda} g(lambda) d lambda for k = 0..r.size()-1;
// entries past the end are treated as zero.
struct AutocovarianceTable {
  std::vector<double> r;
  std::size_t grid_size = 0;

  double at(std::size_t k) const { return k < r.size() ? r[k] : 0.0; }
};

// Values of f on the half grid, exact up to rounding (no aliasing: degree <= P).
std::vector<double> eval_half_grid(const CosineSeries& f, const GridSpec& grid);

AutocovarianceTable autocov_of_exp(const CosineSeries& f, const GridSpec& grid, std::size_t kmax);

// Doubles the grid (starting from `start`, at least 4x the degree) until the
// upper half of the computed table has decayed below tail_tol * r[0]; returns
// the certified lower half. Throws Configuration past max_size.
AutocovarianceTable autocov_of_exp_adaptive(const CosineSeries& f, const GridSpec& start,
                                            std::size_t max_size = std::size_t{1} << 24,
                                            double tail_tol = 1e-13);

// Drops the tail once |r[k]| < rel * r[0] for every later k.
AutocovarianceTable trim_table(const AutocovarianceTable& t, double rel);

// sum_{|k|<n} (1 - |k|/n) r[k]
double fejer_mean(const AutocovarianceTable& t, long long n);

// max over n = 1..n_max of |fejer_mean(t, n)|, exact over the whole range.
double max_abs_fejer_mean(const AutocovarianceTable& t, long long n_max);

double fejer_integral_exp(const CosineSeries& f, long long n, const GridSpec& grid);

// Same integral by direct quadrature of F_n e^f on the grid (independent path).
double fejer_integral_direct(const CosineSeries& f, int n, const GridSpec& grid);

struct RankResult {
  long long rank = 1;
  double worst_dev = 0.0;  // max deviation over the certified range [rank, n_max]
  std::size_t grid_size = 0;
};

// Smallest N <= n_max with |e^{f(0)} - fejer_mean(n)| <= eps (1 - margin) for
// every n in [N, n_max]. Past the end of the decayed table the deviation is
// d + B/n in closed form, so the whole range is certified, not sampled.
RankResult fejer_rank_certified(const CosineSeries& f, double eps, const GridSpec& grid, long long n_max,
                                double margin = 0.1);
long long fejer_rank(const CosineSeries& f, double eps, const GridSpec& grid, long long n_max);

}  // namespace wobble
