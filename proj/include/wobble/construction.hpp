#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wobble/checks.hpp"
#include "wobble/decomposition.hpp"
#include "wobble/errors.hpp"
#include "wobble/matrix.hpp"
#include "wobble/perturbation.hpp"
#include "wobble/spectral.hpp"

namespace wobble {

struct ConstructionConfig {
  BandParams band{2, 1.0, 2.0};
  double tau = 0.5;
  double delta = 8.0;
  std::vector<SymMatrix> targets;  // G_n = targets[(n - 1) mod size]
  int depth = 8;
  CoefficientScheme scheme;
  GridSpec grid{std::size_t{1} << 18};
  long long fejer_scan_cap = 1LL << 18;
  BasisMode basis_mode = BasisMode::Subset;
};

struct RecursionConstants {
  double gamma = 0.0;
  int L = 0;
  double upsilon1 = 0.0;
  double upsilon2 = 0.0;
  double delta_effective = 0.0;
  double theta_big = 0.0;
};

// Level n holds the collection C_n (flattened in basis order), the records of
// the perturbations that produced it, N_{n-1}, and - once computed - N_n.
struct LevelState {
  int n = 1;
  long long N_prev = 1;
  long long N = 0;
  std::vector<CosineSeries> functions;
  std::vector<PerturbResult> records;  // empty at n = 1
  std::vector<long long> ranks;        // Fejer rank of each e^f at 2^-n
  std::vector<CheckRecord> condition_c;
};

struct LevelReport {
  int n = 0;
  long long N = 0;
  std::vector<double> c, cstar, cgap;
  double c_bound = 0.0;
  SymMatrix target, gstar;
  double g_gap = 0.0;
  double g_bound = 0.0;
  double eig_ratio = 0.0;
  std::vector<CheckRecord> checks;
};

struct ConstructionFailure {
  int level = 0;
  ErrorKind kind = ErrorKind::ConstructionFailed;
  std::string message;
};

struct ConstructionResult {
  LatticeParams lattice;
  BasisSet basis;
  RecursionConstants constants;
  std::vector<CoeffArray> coeffs;   // c_n, n = 1..R
  std::vector<SymMatrix> targets;   // G_n, n = 1..R
  std::vector<LevelState> levels;   // C_1..C_depth_reached
  std::vector<CoeffArray> cstar;    // c*_n for levels with N_n
  std::vector<SymMatrix> gstar;     // G*_n
  std::vector<LevelReport> reports;
  std::optional<ConstructionFailure> failure;
  int depth = 0;

  bool complete() const { return !failure.has_value(); }
  bool all_pass() const;
};

RecursionConstants init_constants(const ConstructionConfig& cfg, const BasisSet& basis);

LevelState init_level(const ConstructionConfig& cfg, const BasisSet& basis);

// Level condition: strict (upsilon1, upsilon2) band on the grid and psi < delta.
std::vector<CheckRecord> condition_c(const CosineSeries& f, const RecursionConstants& k, const GridSpec& grid);

// Fills state.N and state.ranks, then builds C_{n+1} aimed at coeffs_next.
LevelState advance_level(LevelState& state, const ConstructionConfig& cfg, const RecursionConstants& k,
                         const CoeffArray& coeffs_next);

// Completes N_n for the last level without building another.
void close_level(LevelState& state, const ConstructionConfig& cfg);

ConstructionResult run_recursion(const ConstructionConfig& cfg);

// Recomputes c*, G* bounds and checks for every level with N_n.
void verify_construction(ConstructionResult& result);

// Test hook: shifts one starred coefficient of level n by twice its bound.
void inject_cstar_fault(ConstructionResult& result, int n, std::size_t entry = 0);

SymMatrix exact_block_cov(const ConstructionResult& result, int n);

}  // namespace wobble
