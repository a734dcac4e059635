#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "wobble/decomposition.hpp"
#include "wobble/errors.hpp"

using namespace wobble;

namespace {

const BandParams kBand{2, 1.0, 2.0};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::NumericalFailure;
}

// Hand evaluation of the rounding rule with plain floor().
SymMatrix hand_round(const SymMatrix& g, double gamma) {
  const int m = g.dim();
  SymMatrix h(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double k = std::floor(g(i, j) / gamma);
      h.set(i, j, (i == j ? k - 8 * m : k - 3) * gamma);
    }
  return h;
}

}  // namespace

TEST_CASE("lattice params") {
  const LatticeParams lat = LatticeParams::make(kBand);
  CHECK(lat.gamma == 1.0 / 80.0);
  CHECK(LatticeParams::make({3, 1.0, 2.0}).gamma == 1.0 / 180.0);
  CHECK(kind_of([] { LatticeParams::make({2, 2.0, 1.0}); }) == ErrorKind::Configuration);
}

TEST_CASE("round_to_H on the identity") {
  const LatticeParams lat = LatticeParams::make(kBand);
  CHECK(lattice_units(SymMatrix::identity(2), lat) == std::vector<long long>{64, -3, 64});
  const SymMatrix h = round_to_H(SymMatrix::identity(2), lat);
  CHECK(h(0, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(h(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(h(0, 1) == doctest::Approx(-0.0375).epsilon(1e-15));
}

TEST_CASE("round_to_H: lattice points floor to themselves") {
  const LatticeParams lat = LatticeParams::make(kBand);
  const SymMatrix g = SymMatrix::from_rows({{1.5, 7 * lat.gamma}, {7 * lat.gamma, 1.25}});
  const auto units = lattice_units(g, lat);
  CHECK(units[0] == 120 - 16);
  CHECK(units[1] == 7 - 3);
  CHECK(units[2] == 100 - 16);
}

TEST_CASE("round_to_H: random targets") {
  std::mt19937_64 rng(41);
  for (int m : {2, 3}) {
    const BandParams band{m, 1.0, 2.0};
    const LatticeParams lat = LatticeParams::make(band);
    for (int i = 0; i < 100; ++i) {
      const SymMatrix g = oracle::random_spd(rng, m, 1.0, 2.0);
      const SymMatrix h = round_to_H(g, lat);
      CHECK(max_entry_gap(h, hand_round(g, lat.gamma)) < 1e-12);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
          const double q = h(r, c) / lat.gamma;
          CHECK(std::abs(q - std::round(q)) < 1e-9);
        }
      CHECK(in_band(h, {m, 0.5, 4.0}));
      // Diagonal shift 8 m gamma plus the floor remainder (< gamma).
      CHECK(max_entry_gap(g, h) < (8 * m + 1) * lat.gamma + 1e-12);
    }
  }
}

TEST_CASE("build_basis") {
  const LatticeParams lat = LatticeParams::make(kBand);
  const BasisSet b = build_basis({SymMatrix::identity(2)}, lat, BasisMode::Subset);
  CHECK(b.L() == 1);
  CHECK(b.size() == 1 + 2 + 1);
  CHECK(max_entry_gap(b.q1[0], round_to_H(SymMatrix::identity(2), lat)) == 0.0);
  CHECK(b.q2[0] == SymMatrix::diagonal({1.0, 0.0}));
  CHECK(b.q2[1] == SymMatrix::diagonal({0.0, 1.0}));
  CHECK(b.q3[0] == SymMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(b.pairs == std::vector<std::pair<int, int>>{{0, 1}});

  const SymMatrix near = SymMatrix::from_rows({{1.001, 0.0005}, {0.0005, 1.002}});
  CHECK(build_basis({SymMatrix::identity(2), near}, lat, BasisMode::Subset).L() == 1);
  const SymMatrix other = SymMatrix::from_rows({{1.5, 0.3}, {0.3, 1.2}});
  CHECK(build_basis({SymMatrix::identity(2), other}, lat, BasisMode::Subset).L() == 2);

  SUBCASE("pairs for m = 3") {
    const BasisSet b3 = build_basis({SymMatrix::identity(3)}, LatticeParams::make({3, 1.0, 2.0}), BasisMode::Subset);
    CHECK(b3.pairs == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(b3.q3[1](0, 2) == 1.0);
    CHECK(b3.q3[1](1, 1) == 0.0);
  }
  SUBCASE("enumeration is capped") {
    // (floor(4b / gamma) + 1)^3 = 641^3 candidates.
    CHECK(static_cast<double>(enumeration_count(lat)) == doctest::Approx(641.0 * 641.0 * 641.0));
    CHECK(kind_of([&] { build_basis({SymMatrix::identity(2)}, lat, BasisMode::Enumerate); }) ==
          ErrorKind::EnumerationInfeasible);
  }
  SUBCASE("enumeration on a micro instance") {
    // m = 1, a = 1, b = 1.2: gamma = 0.05, entries in [-2.4, 2.4] with value in [0.5, 2.4].
    const LatticeParams tiny = LatticeParams::make({1, 1.0, 1.2});
    const BasisSet e = build_basis({SymMatrix::identity(1)}, tiny, BasisMode::Enumerate);
    int expect = 0;
    for (int k = -48; k <= 48; ++k)
      if (k * tiny.gamma >= 0.5 - 1e-12 && k * tiny.gamma <= 2.4 + 1e-12) ++expect;
    CHECK(e.L() == expect);
    CHECK(e.find(lattice_units(SymMatrix::identity(1), tiny)) >= 0);
  }
  CHECK(kind_of([&] { build_basis({SymMatrix::diagonal({3.0, 1.0})}, lat, BasisMode::Subset); }) ==
        ErrorKind::Configuration);
}

TEST_CASE("decompose: the identity worked example") {
  const LatticeParams lat = LatticeParams::make(kBand);
  const double g = lat.gamma;
  const BasisSet b = build_basis({SymMatrix::identity(2)}, lat, BasisMode::Subset);
  const CoeffArray c = decompose(SymMatrix::identity(2), b, lat);
  CHECK(c.c1 == std::vector<double>{1.0});
  CHECK(std::abs(c.c3[0] - 3 * g) < 1e-12);
  CHECK(std::abs(c.c3[0] - 0.0375) < 1e-12);
  for (double v : c.c2) {
    CHECK(std::abs(v - 13 * g) < 1e-12);
    CHECK(std::abs(v - 0.1625) < 1e-12);
  }
  const DecompositionReport rep = verify_decomposition(SymMatrix::identity(2), b, c);
  CHECK(rep.all_pass);
  CHECK(rep.reconstruction_error < 1e-15);
  // c3 sits at 3 gamma in [2 gamma, 5 gamma]: slack gamma against the near edge.
  for (const auto& chk : rep.checks)
    if (chk.name == "c3[0,1]") CHECK(chk.slack == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("decompose: perturbed coefficients are flagged") {
  const LatticeParams lat = LatticeParams::make(kBand);
  const BasisSet b = build_basis({SymMatrix::identity(2)}, lat, BasisMode::Subset);
  CoeffArray c = decompose(SymMatrix::identity(2), b, lat);
  c.c2[0] += 20 * 2 * lat.gamma;
  const DecompositionReport rep = verify_decomposition(SymMatrix::identity(2), b, c);
  CHECK_FALSE(rep.all_pass);
  int failed = 0;
  for (const auto& chk : rep.checks)
    if (!chk.pass) {
      ++failed;
      CHECK((chk.name == "c2[0]" || chk.name == "reconstruction"));
    }
  CHECK(failed == 2);
}

TEST_CASE("decompose: random targets, subset basis") {
  std::mt19937_64 rng(43);
  for (int m : {2, 3}) {
    const BandParams band{m, 1.0, 2.0};
    const LatticeParams lat = LatticeParams::make(band);
    std::vector<SymMatrix> targets;
    for (int i = 0; i < 60; ++i) targets.push_back(oracle::random_spd(rng, m, 1.0, 2.0));
    const BasisSet b = build_basis(targets, lat, BasisMode::Subset);
    const int L = b.L();
    for (const auto& g : targets) {
      const CoeffArray c = decompose(g, b, lat);
      // Independent reconstruction by explicit loops.
      SymMatrix s(m);
      for (int l = 0; l < L; ++l) s += c.c1[l] * b.q1[l];
      for (int u = 0; u < m; ++u) s.at(u, u) += c.c2[u];
      for (std::size_t p = 0; p < b.pairs.size(); ++p) {
        const auto [u, v] = b.pairs[p];
        s.at(u, u) += c.c3[p];
        s.at(v, v) += c.c3[p];
        s.at(u, v) += c.c3[p];
      }
      CHECK(max_entry_gap(s, g) < 1e-12);
      int ones = 0;
      for (double v : c.c1) {
        if (v == 1.0) ++ones;
        else CHECK(v == doctest::Approx(lat.gamma / (2.0 * band.b * L)));
      }
      CHECK(ones == 1);
      for (double v : c.c2) CHECK((v >= 2 * m * lat.gamma && v <= 10 * m * lat.gamma));
      for (double v : c.c3) CHECK((v >= 2 * lat.gamma && v <= 5 * lat.gamma));
      CHECK(verify_decomposition(g, b, c).all_pass);
    }
  }
}

TEST_CASE("decompose: basis must contain H") {
  const LatticeParams lat = LatticeParams::make(kBand);
  const BasisSet b = build_basis({SymMatrix::identity(2)}, lat, BasisMode::Subset);
  CHECK(kind_of([&] { decompose(SymMatrix::from_rows({{1.5, 0.3}, {0.3, 1.2}}), b, lat); }) ==
        ErrorKind::BasisIncomplete);
}

TEST_CASE("coefficient flattening") {
  CoeffArray c{{1.0, 0.5}, {0.2, 0.3}, {0.04}};
  CHECK(c.flat() == std::vector<double>{1.0, 0.5, 0.2, 0.3, 0.04});
  const CoeffArray back = CoeffArray::unflat(c.flat(), 2, 2);
  CHECK(back.c1 == c.c1);
  CHECK(back.c2 == c.c2);
  CHECK(back.c3 == c.c3);
  CHECK(kind_of([&] { CoeffArray::unflat(c.flat(), 1, 2); }) == ErrorKind::DimensionMismatch);
}
