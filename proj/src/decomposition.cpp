#include "wobble/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

namespace {

constexpr double kBoundTol = 1e-12;
constexpr double kReconstructionTol = 1e-10;

// floor(x / gamma) with exact lattice points mapped to themselves, so that
// rounding noise in x / gamma never drops a value one cell down.
long long lattice_floor(double x, double gamma) {
  const double q = x / gamma;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-12 * std::max(1.0, std::abs(q))) return static_cast<long long>(r);
  return static_cast<long long>(std::floor(q));
}

SymMatrix from_units(const std::vector<long long>& units, int m, double gamma) {
  SymMatrix h(m);
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) h.set(i, j, static_cast<double>(units[idx++]) * gamma);
  return h;
}

void attach_correctors(BasisSet& basis) {
  const int m = basis.m;
  for (int u = 0; u < m; ++u) {
    SymMatrix q(m);
    q.set(u, u, 1.0);
    basis.q2.push_back(q);
  }
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) {
      SymMatrix q(m);
      q.set(u, u, 1.0);
      q.set(v, v, 1.0);
      q.set(u, v, 1.0);
      basis.q3.push_back(q);
      basis.pairs.emplace_back(u, v);
    }
}

}  // namespace

LatticeParams LatticeParams::make(const BandParams& band) {
  if (band.m < 1) fail(ErrorKind::Configuration, "m must be >= 1");
  if (!(band.a > 0.0 && band.a < band.b)) fail(ErrorKind::Configuration, "need 0 < a < b");
  return {band, band.a / (20.0 * band.m * band.m)};
}

int BasisSet::find(const std::vector<long long>& units) const {
  for (std::size_t i = 0; i < q1_units.size(); ++i)
    if (q1_units[i] == units) return static_cast<int>(i);
  return -1;
}

std::vector<double> CoeffArray::flat() const {
  std::vector<double> v(c1);
  v.insert(v.end(), c2.begin(), c2.end());
  v.insert(v.end(), c3.begin(), c3.end());
  return v;
}

CoeffArray CoeffArray::unflat(const std::vector<double>& v, int L, int m) {
  const std::size_t n3 = static_cast<std::size_t>(m) * (m - 1) / 2;
  if (v.size() != static_cast<std::size_t>(L + m) + n3) fail(ErrorKind::DimensionMismatch, "coefficient vector length");
  CoeffArray c;
  c.c1.assign(v.begin(), v.begin() + L);
  c.c2.assign(v.begin() + L, v.begin() + L + m);
  c.c3.assign(v.begin() + L + m, v.end());
  return c;
}

std::vector<long long> lattice_units(const SymMatrix& g, const LatticeParams& lat) {
  const int m = g.dim();
  std::vector<long long> units;
  units.reserve(static_cast<std::size_t>(m) * (m + 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const long long kappa = lattice_floor(g(i, j), lat.gamma);
      units.push_back(i == j ? kappa - 8LL * m : kappa - 3);
    }
  return units;
}

SymMatrix round_to_H(const SymMatrix& g, const LatticeParams& lat) {
  if (g.dim() != lat.band.m) fail(ErrorKind::DimensionMismatch, "target dimension differs from m");
  SymMatrix h = from_units(lattice_units(g, lat), g.dim(), lat.gamma);
  const BandParams loose{lat.band.m, lat.band.a / 2.0, 2.0 * lat.band.b};
  if (!in_band(h, loose)) fail(ErrorKind::InternalConsistency, "rounded matrix H left the band [a/2, 2b]");
  return h;
}

long double enumeration_count(const LatticeParams& lat) {
  const int m = lat.band.m;
  // Entries range over gamma Z in [-2b, 2b]; the nudge keeps exact multiples from flooring down.
  const long double span = std::floor(2.0L * lat.band.b / lat.gamma + 1e-9L);
  return std::pow(2.0L * span + 1.0L, static_cast<long double>(m) * (m + 1) / 2);
}

BasisSet build_basis(const std::vector<SymMatrix>& targets, const LatticeParams& lat, BasisMode mode,
                     double enumeration_cap) {
  BasisSet basis;
  basis.m = lat.band.m;
  basis.gamma = lat.gamma;
  basis.band = lat.band;
  const int m = basis.m;

  for (const SymMatrix& g : targets)
    if (!in_band(g, lat.band)) fail(ErrorKind::Configuration, "target outside the eigenvalue band [a, b]");

  if (mode == BasisMode::Subset) {
    for (const SymMatrix& g : targets) {
      round_to_H(g, lat);
      std::vector<long long> u = lattice_units(g, lat);
      if (basis.find(u) < 0) {
        basis.q1.push_back(from_units(u, m, lat.gamma));
        basis.q1_units.push_back(std::move(u));
      }
    }
  } else {
    const long double count = enumeration_count(lat);
    if (count > enumeration_cap) {
      std::ostringstream os;
      os << "full lattice has " << static_cast<double>(count) << " candidates (cap " << enumeration_cap << ")";
      fail(ErrorKind::EnumerationInfeasible, os.str());
    }
    const long long span = static_cast<long long>(std::floor(2.0 * lat.band.b / lat.gamma + 1e-9));
    const std::size_t nentries = static_cast<std::size_t>(m) * (m + 1) / 2;
    const BandParams loose{m, lat.band.a / 2.0, 2.0 * lat.band.b};
    std::vector<long long> units(nentries, -span);
    while (true) {
      SymMatrix q = from_units(units, m, lat.gamma);
      if (in_band(q, loose)) {
        basis.q1.push_back(q);
        basis.q1_units.push_back(units);
      }
      std::size_t k = 0;
      while (k < nentries && units[k] == span) units[k++] = -span;
      if (k == nentries) break;
      ++units[k];
    }
  }
  if (basis.q1.empty()) fail(ErrorKind::BasisIncomplete, "basis has no lattice matrices");
  attach_correctors(basis);
  return basis;
}

CoeffArray decompose(const SymMatrix& g, const BasisSet& basis, const LatticeParams& lat) {
  const int m = basis.m;
  const SymMatrix h = round_to_H(g, lat);
  const int lp = basis.find(lattice_units(g, lat));
  if (lp < 0) fail(ErrorKind::BasisIncomplete, "rounded matrix H is not in the basis");
  const int L = basis.L();
  const double floor1 = lat.gamma / (2.0 * lat.band.b * L);

  CoeffArray c;
  c.c1.assign(L, floor1);
  c.c1[lp] = 1.0;
  SymMatrix s(m);
  for (int l = 0; l < L; ++l)
    if (l != lp) s += c.c1[l] * basis.q1[l];

  c.c3.resize(basis.pairs.size());
  for (std::size_t p = 0; p < basis.pairs.size(); ++p) {
    const auto [u, v] = basis.pairs[p];
    c.c3[p] = (g(u, v) - h(u, v)) - s(u, v);
  }
  c.c2.resize(m);
  for (int u = 0; u < m; ++u) {
    double t = (g(u, u) - h(u, u)) - s(u, u);
    for (std::size_t p = 0; p < basis.pairs.size(); ++p)
      if (basis.pairs[p].first == u || basis.pairs[p].second == u) t -= c.c3[p];
    c.c2[u] = t;
  }

  const DecompositionReport rep = verify_decomposition(g, basis, c);
  if (!rep.all_pass) {
    std::string bad;
    for (const auto& r : rep.checks)
      if (!r.pass) bad += " " + r.name;
    fail(ErrorKind::InternalConsistency, "decomposition violates its bounds:" + bad);
  }
  return c;
}

SymMatrix weighted_sum(const BasisSet& basis, const CoeffArray& c) {
  SymMatrix out(basis.m);
  for (int l = 0; l < basis.L(); ++l) out += c.c1[l] * basis.q1[l];
  for (int u = 0; u < basis.m; ++u) out += c.c2[u] * basis.q2[u];
  for (std::size_t p = 0; p < basis.q3.size(); ++p) out += c.c3[p] * basis.q3[p];
  return out;
}

DecompositionReport verify_decomposition(const SymMatrix& g, const BasisSet& basis, const CoeffArray& c) {
  if (static_cast<int>(c.c1.size()) != basis.L() || static_cast<int>(c.c2.size()) != basis.m ||
      c.c3.size() != basis.pairs.size())
    fail(ErrorKind::DimensionMismatch, "coefficient array does not match the basis");
  const double gamma = basis.gamma;
  const int m = basis.m, L = basis.L();
  DecompositionReport rep;
  for (int l = 0; l < L; ++l)
    rep.checks.push_back(make_range_check("c1[" + std::to_string(l) + "]", c.c1[l],
                                          gamma / (2.0 * basis.band.b * L), 1.0, -kBoundTol));
  for (int u = 0; u < m; ++u)
    rep.checks.push_back(
        make_range_check("c2[" + std::to_string(u) + "]", c.c2[u], 2.0 * m * gamma, 10.0 * m * gamma, -kBoundTol));
  for (std::size_t p = 0; p < basis.pairs.size(); ++p)
    rep.checks.push_back(make_range_check(
        "c3[" + std::to_string(basis.pairs[p].first) + "," + std::to_string(basis.pairs[p].second) + "]", c.c3[p],
        2.0 * gamma, 5.0 * gamma, -kBoundTol));
  rep.reconstruction_error = max_entry_gap(weighted_sum(basis, c), g);
  rep.checks.push_back(make_check("reconstruction", rep.reconstruction_error, kReconstructionTol, 0.0));
  rep.all_pass = all_pass(rep.checks);
  return rep;
}

}  // namespace wobble
