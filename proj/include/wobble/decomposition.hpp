#pragma once

#include <utility>
#include <vector>

#include "wobble/checks.hpp"
#include "wobble/matrix.hpp"

namespace wobble {

struct LatticeParams {
  BandParams band;
  double gamma = 0.0;  // a / (20 m^2)

  static LatticeParams make(const BandParams& band);
};

enum class BasisMode { Subset, Enumerate };

struct BasisSet {
  int m = 0;
  double gamma = 0.0;
  BandParams band;
  std::vector<SymMatrix> q1;
  std::vector<std::vector<long long>> q1_units;  // packed upper triangles in units of gamma
  std::vector<SymMatrix> q2;                     // e_u e_u^T
  std::vector<SymMatrix> q3;                     // 1s at (u,u),(u,v),(v,u),(v,v)
  std::vector<std::pair<int, int>> pairs;        // u < v, same order as q3

  int L() const { return static_cast<int>(q1.size()); }
  int size() const { return L() + m + static_cast<int>(pairs.size()); }
  // Index of the q1 matrix with the given lattice units, or -1.
  int find(const std::vector<long long>& units) const;
};

struct CoeffArray {
  std::vector<double> c1, c2, c3;

  // Flattened in basis order: c1..., c2..., c3...
  std::vector<double> flat() const;
  static CoeffArray unflat(const std::vector<double>& v, int L, int m);
};

// Entries of H in units of gamma, packed upper triangle.
std::vector<long long> lattice_units(const SymMatrix& g, const LatticeParams& lat);
SymMatrix round_to_H(const SymMatrix& g, const LatticeParams& lat);

long double enumeration_count(const LatticeParams& lat);

BasisSet build_basis(const std::vector<SymMatrix>& targets, const LatticeParams& lat, BasisMode mode,
                     double enumeration_cap = 1e6);

CoeffArray decompose(const SymMatrix& g, const BasisSet& basis, const LatticeParams& lat);

// sum c1 Q1 + sum c2 Q2 + sum c3 Q3
SymMatrix weighted_sum(const BasisSet& basis, const CoeffArray& c);

struct DecompositionReport {
  std::vector<CheckRecord> checks;
  double reconstruction_error = 0.0;
  bool all_pass = false;
};

DecompositionReport verify_decomposition(const SymMatrix& g, const BasisSet& basis, const CoeffArray& c);

}  // namespace wobble
