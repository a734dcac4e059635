#pragma once

#include <cstdint>
#include <vector>

#include "wobble/checks.hpp"
#include "wobble/construction.hpp"
#include "wobble/matrix.hpp"
#include "wobble/spectral.hpp"

namespace wobble {

enum class BlockKind { Lattice, Diagonal, Pair };

// One scalar building block: (1,l,p), (2,u) or (3,(u,v)).
struct BlockSpec {
  BlockKind kind = BlockKind::Lattice;
  int index = 0;     // l, u, or pair index
  int p = -1;        // component of sqrt(Q_l) for lattice blocks
  int function = 0;  // index into the flattened function collection
};

struct ProcessSpec {
  int m = 0;
  BasisSet basis;
  std::vector<SymMatrix> sqrt_q1;
  std::vector<CosineSeries> log_densities;
  std::vector<AutocovarianceTable> autocov;  // trimmed at 1e-12 r[0]; zero beyond
  std::vector<BlockSpec> blocks;
};

ProcessSpec make_process(const BasisSet& basis, const std::vector<CosineSeries>& log_densities, const GridSpec& grid);
ProcessSpec make_process(const ConstructionResult& result, const GridSpec& grid);

std::uint64_t splitmix64(std::uint64_t x);
// Counter-based seed lineage: master -> (stream, replicate, block).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t replicate, std::uint64_t block);

// Circulant embedding of a stationary autocovariance for paths of length n.
class CirculantSampler {
 public:
  CirculantSampler(const AutocovarianceTable& table, long long n, std::size_t max_half = std::size_t{1} << 23,
                   double tol_embed = 1e-12);

  std::vector<double> sample(std::uint64_t seed) const;

  long long length() const { return n_; }
  std::size_t half() const { return half_; }
  double clipped_mass() const { return clipped_; }

 private:
  long long n_;
  std::size_t half_ = 0;
  std::vector<double> scale_;  // sqrt(lambda_j / 2P) over the 2P circulant eigenvalues
  double clipped_ = 0.0;
};

std::vector<double> sample_block(const AutocovarianceTable& table, long long n, std::uint64_t seed);

// m x N path from per-block scalar paths (one per spec.blocks entry).
Matrix assemble_path(const ProcessSpec& spec, const std::vector<std::vector<double>>& blocks);

struct EmpiricalCov {
  SymMatrix cov;
  SymMatrix se;
  long long replicates = 0;
  long long n = 0;
  std::vector<double> samples;  // replicates x m, normalized partial sums
  double max_clipped_mass = 0.0;
};

// block_mask (optional) keeps only the listed blocks, for component checks.
EmpiricalCov empirical_partial_sum_cov(const ProcessSpec& spec, long long n, long long replicates,
                                       std::uint64_t master_seed, double bernoulli_eps = 0.0,
                                       const std::vector<bool>& block_mask = {});

Matrix add_bernoulli_perturbation(const Matrix& path, double eps, std::uint64_t seed);

struct CoordinateStats {
  double mean = 0.0, variance = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
};

struct NormalityReport {
  std::vector<CoordinateStats> coords;
  std::vector<double> cross_corr;  // upper triangle, i < j
  std::vector<CheckRecord> checks;
  bool pass = false;
};

// samples: replicates x m. Whitens by sigma^power (power = -1/2 for the real
// diagnostic) and tests against N(0, I) at 4 Monte Carlo standard errors.
NormalityReport normality_diagnostic(const std::vector<double>& samples, int m, const SymMatrix& sigma,
                                     double power = -0.5);

}  // namespace wobble
