#include "wobble/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <random>

#include "wobble/errors.hpp"
#include "wobble/fft.hpp"
#include "wobble/kernels.hpp"

namespace wobble {

namespace {

constexpr double kTrimRel = 1e-12;
constexpr double kClipFail = 1e-6;

}  // namespace

ProcessSpec make_process(const BasisSet& basis, const std::vector<CosineSeries>& log_densities, const GridSpec& grid) {
  if (static_cast<int>(log_densities.size()) != basis.size())
    fail(ErrorKind::Assembly, "need one log-density per basis matrix");
  ProcessSpec spec;
  spec.m = basis.m;
  spec.basis = basis;
  spec.log_densities = log_densities;
  for (const SymMatrix& q : basis.q1) spec.sqrt_q1.push_back(matrix_power(q, 0.5));
  spec.autocov.resize(log_densities.size());
  const long n = static_cast<long>(log_densities.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i)
    spec.autocov[i] = trim_table(autocov_of_exp_adaptive(log_densities[i], grid), kTrimRel);

  const int L = basis.L();
  for (int l = 0; l < L; ++l)
    for (int p = 0; p < basis.m; ++p) spec.blocks.push_back({BlockKind::Lattice, l, p, l});
  for (int u = 0; u < basis.m; ++u) spec.blocks.push_back({BlockKind::Diagonal, u, -1, L + u});
  for (int t = 0; t < static_cast<int>(basis.pairs.size()); ++t)
    spec.blocks.push_back({BlockKind::Pair, t, -1, L + basis.m + t});
  return spec;
}

ProcessSpec make_process(const ConstructionResult& result, const GridSpec& grid) {
  return make_process(result.basis, result.levels.back().functions, grid);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t replicate, std::uint64_t block) {
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ stream);
  x = splitmix64(x ^ replicate);
  return splitmix64(x ^ block);
}

CirculantSampler::CirculantSampler(const AutocovarianceTable& table, long long n, std::size_t max_half,
                                   double tol_embed)
    : n_(n) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "path length must be >= 1");
  if (table.r.empty() || !(table.r[0] > 0.0)) fail(ErrorKind::PreconditionViolation, "autocovariance needs r[0] > 0");
  const double r0 = table.r[0];
  std::size_t half = std::bit_ceil(static_cast<std::size_t>(std::max<long long>({n, static_cast<long long>(table.r.size()), 2})));
  std::vector<double> lam;
  while (true) {
    lam.assign(half + 1, 0.0);
    for (std::size_t k = 0; k <= half && k < table.r.size(); ++k) lam[k] = table.r[k];
    fft::dct1(lam);
    const double lo = *std::min_element(lam.begin(), lam.end());
    if (lo >= -tol_embed * r0 || half * 2 > max_half) break;
    half *= 2;
  }
  half_ = half;
  const std::size_t size = 2 * half;
  scale_.resize(size);
  double clipped = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    double l = lam[j <= half ? j : size - j];
    if (l < 0) {
      clipped += -l;
      l = 0.0;
    }
    scale_[j] = std::sqrt(l / static_cast<double>(size));
  }
  clipped_ = clipped / static_cast<double>(size);
  if (clipped_ > kClipFail * r0)
    fail(ErrorKind::EmbeddingFailure, "circulant embedding clipped mass " + std::to_string(clipped_) + " exceeds 1e-6 r0");
}

std::vector<double> CirculantSampler::sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<std::complex<double>> y(scale_.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double a = z(rng);
    const double b = z(rng);
    y[j] = {scale_[j] * a, scale_[j] * b};
  }
  fft::dft_forward(y);
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (long long k = 0; k < n_; ++k) out[k] = y[k].real();
  return out;
}

std::vector<double> sample_block(const AutocovarianceTable& table, long long n, std::uint64_t seed) {
  return CirculantSampler(table, n).sample(seed);
}

Matrix assemble_path(const ProcessSpec& spec, const std::vector<std::vector<double>>& blocks) {
  if (blocks.size() != spec.blocks.size())
    fail(ErrorKind::Assembly, "expected " + std::to_string(spec.blocks.size()) + " block streams, got " +
                                  std::to_string(blocks.size()));
  const std::size_t n = blocks.empty() ? 0 : blocks[0].size();
  for (const auto& b : blocks)
    if (b.size() != n) fail(ErrorKind::Assembly, "block streams differ in length");
  const int m = spec.m;
  Matrix x(m, static_cast<int>(n));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const BlockSpec& bs = spec.blocks[b];
    const std::vector<double>& y = blocks[b];
    switch (bs.kind) {
      case BlockKind::Lattice:
        for (int i = 0; i < m; ++i) {
          const double w = spec.sqrt_q1[bs.index](i, bs.p);
          for (std::size_t k = 0; k < n; ++k) x(i, static_cast<int>(k)) += w * y[k];
        }
        break;
      case BlockKind::Diagonal:
        for (std::size_t k = 0; k < n; ++k) x(bs.index, static_cast<int>(k)) += y[k];
        break;
      case BlockKind::Pair: {
        const auto [u, v] = spec.basis.pairs[bs.index];
        for (std::size_t k = 0; k < n; ++k) {
          x(u, static_cast<int>(k)) += y[k];
          x(v, static_cast<int>(k)) += y[k];
        }
        break;
      }
    }
  }
  return x;
}

Matrix add_bernoulli_perturbation(const Matrix& path, double eps, std::uint64_t seed) {
  if (!(eps > 0.0)) fail(ErrorKind::PreconditionViolation, "Bernoulli perturbation needs eps > 0");
  const double s = std::sqrt(eps);
  std::mt19937_64 rng(seed);
  Matrix out = path;
  for (int k = 0; k < out.cols(); ++k)
    for (int i = 0; i < out.rows(); ++i) out(i, k) += (rng() >> 63) ? s : -s;
  return out;
}

EmpiricalCov empirical_partial_sum_cov(const ProcessSpec& spec, long long n, long long replicates,
                                       std::uint64_t master_seed, double bernoulli_eps,
                                       const std::vector<bool>& block_mask) {
  if (replicates < 100) fail(ErrorKind::PreconditionViolation, "need at least 100 replicates");
  const int m = spec.m;
  const std::size_t nb = spec.blocks.size();
  if (!block_mask.empty() && block_mask.size() != nb) fail(ErrorKind::Assembly, "block mask length");

  std::vector<CirculantSampler> samplers;
  samplers.reserve(spec.autocov.size());
  for (const auto& t : spec.autocov) samplers.emplace_back(t, n);
  EmpiricalCov out;
  out.replicates = replicates;
  out.n = n;
  for (const auto& s : samplers) out.max_clipped_mass = std::max(out.max_clipped_mass, s.clipped_mass());

  out.samples.assign(static_cast<std::size_t>(replicates) * m, 0.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (long long r = 0; r < replicates; ++r) {
    std::vector<std::vector<double>> streams(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      if (!block_mask.empty() && !block_mask[b]) {
        streams[b].assign(static_cast<std::size_t>(n), 0.0);
        continue;
      }
      streams[b] = samplers[spec.blocks[b].function].sample(derive_seed(master_seed, 0, r, b));
    }
    Matrix x = assemble_path(spec, streams);
    if (bernoulli_eps > 0.0) x = add_bernoulli_perturbation(x, bernoulli_eps, derive_seed(master_seed, 1, r, 0));
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (long long k = 0; k < n; ++k) s += x(i, static_cast<int>(k));
      out.samples[static_cast<std::size_t>(r) * m + i] = s * norm;
    }
  }

  const std::vector<double> sums = kernels::omp::outer_sum(out.samples, m);
  const double rd = static_cast<double>(replicates);
  out.cov = SymMatrix(m);
  out.se = SymMatrix(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double mean = sums[i * m + j] / rd;
      double ss = 0.0;
      for (long long r = 0; r < replicates; ++r) {
        const double d = out.samples[r * m + i] * out.samples[r * m + j] - mean;
        ss += d * d;
      }
      out.cov.set(i, j, mean);
      out.se.set(i, j, std::sqrt(ss / (rd - 1.0) / rd));
    }
  return out;
}

NormalityReport normality_diagnostic(const std::vector<double>& samples, int m, const SymMatrix& sigma, double power) {
  if (sigma.dim() != m) fail(ErrorKind::DimensionMismatch, "sigma dimension");
  const std::size_t reps = samples.size() / m;
  if (reps < 2) fail(ErrorKind::PreconditionViolation, "normality diagnostic needs samples");
  const SymMatrix w = matrix_power(sigma, power);
  std::vector<double> z(samples.size());
  for (std::size_t r = 0; r < reps; ++r)
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += w(i, j) * samples[r * m + j];
      z[r * m + i] = s;
    }
  const double rd = static_cast<double>(reps);
  const double se_mean = 1.0 / std::sqrt(rd), se_var = std::sqrt(2.0 / rd), se_skew = std::sqrt(6.0 / rd),
               se_kurt = std::sqrt(24.0 / rd);
  NormalityReport rep;
  for (int i = 0; i < m; ++i) {
    // Moments about zero, since the target law is centred.
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double v = z[r * m + i];
      m1 += v;
      m2 += v * v;
      m3 += v * v * v;
      m4 += v * v * v * v;
    }
    m1 /= rd;
    m2 /= rd;
    m3 /= rd;
    m4 /= rd;
    CoordinateStats cs{m1, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
    rep.coords.push_back(cs);
    const std::string tag = "[" + std::to_string(i) + "]";
    rep.checks.push_back(make_check("mean" + tag, std::abs(cs.mean), 4.0 * se_mean, 0.0));
    rep.checks.push_back(make_check("variance" + tag, std::abs(cs.variance - 1.0), 4.0 * se_var, 0.0));
    rep.checks.push_back(make_check("skewness" + tag, std::abs(cs.skewness), 4.0 * se_skew, 0.0));
    rep.checks.push_back(make_check("excess_kurtosis" + tag, std::abs(cs.excess_kurtosis), 4.0 * se_kurt, 0.0));
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double sij = 0, sii = 0, sjj = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        sij += z[r * m + i] * z[r * m + j];
        sii += z[r * m + i] * z[r * m + i];
        sjj += z[r * m + j] * z[r * m + j];
      }
      const double c = sij / std::sqrt(sii * sjj);
      rep.cross_corr.push_back(c);
      rep.checks.push_back(
          make_check("cross_corr[" + std::to_string(i) + "," + std::to_string(j) + "]", std::abs(c), 4.0 * se_mean, 0.0));
    }
  rep.pass = all_pass(rep.checks);
  return rep;
}

}  // namespace wobble
