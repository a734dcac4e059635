#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "wobble/construction.hpp"
#include "wobble/errors.hpp"

using namespace wobble;

namespace {

ConstructionConfig identity_config(int depth) {
  ConstructionConfig cfg;
  cfg.targets = {SymMatrix::identity(2)};
  cfg.depth = depth;
  return cfg;
}

const ConstructionResult& depth5() {
  static const ConstructionResult res = run_recursion(identity_config(5));
  return res;
}

}  // namespace

TEST_CASE("init_constants") {
  const ConstructionConfig cfg = identity_config(3);
  const LatticeParams lat = LatticeParams::make(cfg.band);
  const BasisSet basis = build_basis(cfg.targets, lat, BasisMode::Subset);
  const RecursionConstants k = init_constants(cfg, basis);
  CHECK(k.L == 1);
  CHECK(k.gamma == 1.0 / 80.0);
  CHECK(k.upsilon1 == doctest::Approx(std::log(1.0 / 480.0)).epsilon(1e-15));
  CHECK(k.upsilon1 == doctest::Approx(-6.1738).epsilon(1e-4));
  CHECK(k.upsilon2 == std::log(2.0));
  CHECK(k.theta_big == 49.0);
  CHECK(k.delta_effective == cfg.delta);
  CHECK(k.upsilon1 < 0.0);
  CHECK(k.upsilon2 > 0.0);
}

TEST_CASE("init_level and the level condition") {
  const ConstructionConfig cfg = identity_config(3);
  const BasisSet basis = build_basis(cfg.targets, LatticeParams::make(cfg.band), BasisMode::Subset);
  const LevelState s = init_level(cfg, basis);
  CHECK(s.n == 1);
  CHECK(s.N_prev == 1);
  CHECK(s.functions.size() == static_cast<std::size_t>(basis.size()));
  const RecursionConstants k = init_constants(cfg, basis);
  for (const auto& f : s.functions) {
    CHECK(f == CosineSeries{});
    CHECK(psi(f) == 0.0);
    const auto cc = condition_c(f, k, cfg.grid);
    REQUIRE(cc.size() == 2);
    CHECK(all_pass(cc));
    CHECK(cc[0].slack == doctest::Approx(std::min(-k.upsilon1, k.upsilon2)));
  }
  CHECK_FALSE(all_pass(condition_c(CosineSeries(1.0, {}), k, cfg.grid)));
  CHECK_FALSE(all_pass(condition_c(CosineSeries(0.0, {0.1, 0.1, 0.1, 0.1, 1.3}), k, cfg.grid)));
}

TEST_CASE("advance_level from the flat collection") {
  const ConstructionConfig cfg = identity_config(3);
  const LatticeParams lat = LatticeParams::make(cfg.band);
  const BasisSet basis = build_basis(cfg.targets, lat, BasisMode::Subset);
  const RecursionConstants k = init_constants(cfg, basis);
  LevelState s = init_level(cfg, basis);
  const CoeffArray c2 = decompose(cfg.targets[0], basis, lat);
  const LevelState next = advance_level(s, cfg, k, c2);
  CHECK(s.N == 2);
  for (long long r : s.ranks) CHECK(r == 1);
  CHECK(next.n == 2);
  CHECK(next.N_prev == 2);
  const std::vector<double> logs = c2.flat();
  REQUIRE(next.records.size() == logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double target = std::log(logs[i]);
    CHECK(target > k.upsilon1);
    CHECK(target <= 0.0);
    CHECK(std::abs(next.functions[i].at_zero() - target) < 0.5);
    CHECK(next.records[i].all_pass());
    CHECK(all_pass(condition_c(next.functions[i], k, cfg.grid)));
  }
}

TEST_CASE("depth-1 recursion: flat densities give unit starred coefficients") {
  const ConstructionResult res = run_recursion(identity_config(1));
  REQUIRE(res.complete());
  REQUIRE(res.cstar.size() == 1);
  for (double v : res.cstar[0].flat()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  const BasisSet& b = res.basis;
  SymMatrix sum(2);
  for (const auto& q : b.q1) sum += q;
  for (const auto& q : b.q2) sum += q;
  for (const auto& q : b.q3) sum += q;
  CHECK(max_entry_gap(exact_block_cov(res, 1), sum) < 1e-13);
}

TEST_CASE("identity target recursion at depth 5") {
  const ConstructionResult& res = depth5();
  REQUIRE(res.complete());
  CHECK(res.all_pass());
  REQUIRE(res.levels.size() == 5);
  long long prev = 1;
  for (const auto& lv : res.levels) {
    CHECK(lv.N_prev == prev);
    CHECK(lv.N > lv.N_prev);
    prev = lv.N;
    for (const auto& f : lv.functions) CHECK(psi(f) < 8.0);
  }
  for (const auto& r : res.reports) {
    const double bound = 7.0 * std::ldexp(1.0, -r.n) + 3.0 / 32.0;
    CHECK(r.c_bound == doctest::Approx(bound));
    if (r.n >= 2)
      for (double g : r.cgap) CHECK(g <= bound);
    CHECK(eta_bounds(r.gstar).first > 0.0);
    CHECK(r.eig_ratio < 10.0);
  }
  const SymMatrix g3 = exact_block_cov(res, 3);
  CHECK(std::abs(g3(0, 0) - 1.0) <= 49.0 / 8.0);
  CHECK(max_entry_gap(g3, SymMatrix::identity(2)) <= 49.0 / 8.0);
  CHECK_THROWS_AS(exact_block_cov(res, 6), Error);
}

TEST_CASE("starred coefficients from an independent quadrature") {
  const ConstructionResult& res = depth5();
  const auto& limit = res.levels.back().functions;
  for (int n : {1, 2, 3}) {
    const long long N = res.levels[n - 1].N;
    if (N > 600) continue;
    const std::vector<double> cs = res.cstar[n - 1].flat();
    for (std::size_t i = 0; i < limit.size(); ++i) {
      const int deg = limit[i].degree();
      const int pts = std::max(4096, 8 * (deg + static_cast<int>(N)));
      const double q = oracle::fejer_integral(limit[i], static_cast<int>(N), pts);
      CHECK(cs[i] == doctest::Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("cstar fault injection flags exactly one bound") {
  ConstructionResult res = depth5();
  inject_cstar_fault(res, 3);
  int failed = 0;
  for (const auto& r : res.reports)
    for (const auto& c : r.checks)
      if (!c.pass) {
        ++failed;
        CHECK(r.n == 3);
        CHECK(c.name == "cstar_gap");
      }
  CHECK(failed == 1);
  CHECK_FALSE(res.all_pass());
  CHECK_THROWS_AS(inject_cstar_fault(res, 9), Error);
}

TEST_CASE("run_recursion rejects empty inputs") {
  ConstructionConfig cfg = identity_config(3);
  cfg.targets.clear();
  CHECK_THROWS_AS(run_recursion(cfg), Error);
  cfg = identity_config(0);
  CHECK_THROWS_AS(run_recursion(cfg), Error);
}
