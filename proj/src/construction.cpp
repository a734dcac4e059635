#include "wobble/construction.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <exception>
#include <limits>
#include <sstream>

namespace wobble {

namespace {

std::string level_tag(int n) { return "level " + std::to_string(n) + ": "; }

// Runs body(i) for i in [0, n) in parallel and rethrows the first failure
// (lowest index) after the loop, so the error is deterministic.
template <class Body>
void parallel_for_each(int n, Body body) {
  std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

bool ConstructionResult::all_pass() const {
  if (failure) return false;
  for (const auto& r : reports)
    if (!wobble::all_pass(r.checks)) return false;
  return true;
}

RecursionConstants init_constants(const ConstructionConfig& cfg, const BasisSet& basis) {
  if (basis.L() < 1) fail(ErrorKind::BasisIncomplete, "empty basis");
  RecursionConstants k;
  const double b = cfg.band.b;
  const int m = cfg.band.m;
  k.gamma = basis.gamma;
  k.L = basis.L();
  k.upsilon1 = std::log(k.gamma / (3.0 * b * k.L));
  k.upsilon2 = std::log(2.0);
  k.delta_effective = cfg.delta;
  k.theta_big = 7.0 * (2.0 * b * k.L + m + m * (m - 1) / 2.0);
  return k;
}

std::vector<CheckRecord> condition_c(const CosineSeries& f, const RecursionConstants& k, const GridSpec& grid) {
  const std::vector<double> v = eval_half_grid(f, GridSpec(std::max(grid.size, std::bit_ceil(16 * std::size_t(std::max(f.degree(), 1))))));
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {make_range_check("band", 0.0, k.upsilon1 - *lo, k.upsilon2 - *hi, kCheckMargin),
          make_check("psi", psi(f), k.delta_effective)};
}

LevelState init_level(const ConstructionConfig& cfg, const BasisSet& basis) {
  LevelState s;
  s.n = 1;
  s.N_prev = 1;
  s.functions.assign(basis.size(), CosineSeries{});
  const RecursionConstants k = init_constants(cfg, basis);
  for (const auto& f : s.functions) {
    auto c = condition_c(f, k, cfg.grid);
    s.condition_c.insert(s.condition_c.end(), c.begin(), c.end());
  }
  return s;
}

void close_level(LevelState& state, const ConstructionConfig& cfg) {
  const double eps = std::ldexp(1.0, -state.n);
  const int nf = static_cast<int>(state.functions.size());
  state.ranks.assign(nf, 0);
  try {
    parallel_for_each(nf, [&](int i) {
      state.ranks[i] = fejer_rank(state.functions[i], eps, cfg.grid, cfg.fejer_scan_cap);
    });
  } catch (const Error& e) {
    throw Error(e.kind(), level_tag(state.n) + "Fejer rank: " + e.message());
  }
  state.N = state.N_prev + *std::max_element(state.ranks.begin(), state.ranks.end());
}

LevelState advance_level(LevelState& state, const ConstructionConfig& cfg, const RecursionConstants& k,
                         const CoeffArray& coeffs_next) {
  if (state.N == 0) close_level(state, cfg);
  const std::vector<double> targets = coeffs_next.flat();
  const int nf = static_cast<int>(state.functions.size());
  if (static_cast<int>(targets.size()) != nf) fail(ErrorKind::DimensionMismatch, "coefficient array vs collection");

  LevelState next;
  next.n = state.n + 1;
  next.N_prev = state.N;
  next.functions.resize(nf);
  next.records.resize(nf);
  const double eps = std::ldexp(1.0, -state.n);
  try {
    parallel_for_each(nf, [&](int i) {
      PerturbRequest req;
      req.f = state.functions[i];
      req.upsilon1 = k.upsilon1;
      req.upsilon2 = k.upsilon2;
      req.theta = std::log(targets[i]);
      req.delta = k.delta_effective;
      req.eps = eps;
      req.fejer_cap = state.N;
      req.grid = cfg.grid;
      next.records[i] = construct_h(req, cfg.scheme);
      next.functions[i] = next.records[i].h;
    });
  } catch (const Error& e) {
    throw Error(e.kind(), level_tag(next.n) + e.message());
  }
  for (const auto& f : next.functions) {
    auto c = condition_c(f, k, cfg.grid);
    next.condition_c.insert(next.condition_c.end(), c.begin(), c.end());
  }
  if (!all_pass(next.condition_c))
    fail(ErrorKind::InternalConsistency, level_tag(next.n) + "a constructed function leaves the band or the psi budget");
  return next;
}

namespace {

void compute_cstar(ConstructionResult& res, const ConstructionConfig& cfg) {
  const std::vector<CosineSeries>& limit = res.levels.back().functions;
  const int nf = static_cast<int>(limit.size());
  std::vector<AutocovarianceTable> tables(nf);
  parallel_for_each(nf, [&](int i) { tables[i] = autocov_of_exp_adaptive(limit[i], cfg.grid); });
  res.cstar.clear();
  for (const LevelState& lv : res.levels) {
    if (lv.N == 0) break;
    std::vector<double> v(nf);
    for (int i = 0; i < nf; ++i) v[i] = fejer_mean(tables[i], lv.N);
    res.cstar.push_back(CoeffArray::unflat(v, res.basis.L(), res.basis.m));
  }
}

}  // namespace

void verify_construction(ConstructionResult& res) {
  const int depth = static_cast<int>(res.levels.size());
  const double theta = res.constants.theta_big;
  res.gstar.clear();
  res.reports.clear();
  for (std::size_t i = 0; i < res.cstar.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    LevelReport r;
    r.n = n;
    r.N = res.levels[i].N;
    r.c = res.coeffs[i].flat();
    r.cstar = res.cstar[i].flat();
    r.cgap.resize(r.c.size());
    for (std::size_t j = 0; j < r.c.size(); ++j) r.cgap[j] = std::abs(r.cstar[j] - r.c[j]);
    // c* is taken from C_depth in place of the limit functions, which the
    // telescoping bound charges 3 * 2^-depth at every level.
    const double trunc = 3.0 * std::ldexp(1.0, -depth);
    r.c_bound = 7.0 * std::ldexp(1.0, -n) + trunc;
    r.target = res.targets[i];
    r.gstar = weighted_sum(res.basis, res.cstar[i]);
    r.g_gap = max_entry_gap(r.gstar, r.target);
    r.g_bound = std::ldexp(1.0, -n) * theta + theta / 7.0 * trunc;
    const auto [lo, hi] = eta_bounds(r.gstar);
    r.eig_ratio = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (n >= 2) {
      double worst = 0.0;
      for (double g : r.cgap) worst = std::max(worst, g);
      r.checks.push_back(make_check("cstar_gap", worst, r.c_bound, 0.0));
      r.checks.push_back(make_check("wobble_gap", r.g_gap, r.g_bound, 0.0));
    }
    r.checks.push_back(make_check("gstar_pd", -lo, 0.0, 0.0));
    res.gstar.push_back(r.gstar);
    res.reports.push_back(std::move(r));
  }
}

ConstructionResult run_recursion(const ConstructionConfig& cfg) {
  if (cfg.targets.empty()) fail(ErrorKind::Configuration, "no target matrices");
  if (cfg.depth < 1) fail(ErrorKind::Configuration, "depth must be >= 1");
  ConstructionResult res;
  res.lattice = LatticeParams::make(cfg.band);
  res.basis = build_basis(cfg.targets, res.lattice, cfg.basis_mode);
  res.constants = init_constants(cfg, res.basis);
  res.depth = cfg.depth;
  for (int n = 1; n <= cfg.depth; ++n) {
    res.targets.push_back(cfg.targets[(n - 1) % cfg.targets.size()]);
    res.coeffs.push_back(decompose(res.targets.back(), res.basis, res.lattice));
  }

  res.levels.push_back(init_level(cfg, res.basis));
  try {
    for (int n = 1; n < cfg.depth; ++n) {
      LevelState next = advance_level(res.levels.back(), cfg, res.constants, res.coeffs[n]);
      res.levels.push_back(std::move(next));
    }
    close_level(res.levels.back(), cfg);
  } catch (const Error& e) {
    res.failure = ConstructionFailure{static_cast<int>(res.levels.size()) + (res.levels.back().N ? 1 : 0), e.kind(),
                                      e.message()};
  }
  compute_cstar(res, cfg);
  verify_construction(res);
  return res;
}

void inject_cstar_fault(ConstructionResult& res, int n, std::size_t entry) {
  if (n < 1 || n > static_cast<int>(res.cstar.size())) fail(ErrorKind::LevelOutOfRange, "no starred level " + std::to_string(n));
  std::vector<double> v = res.cstar[n - 1].flat();
  if (entry >= v.size()) fail(ErrorKind::LevelOutOfRange, "no coefficient " + std::to_string(entry));
  const int depth = static_cast<int>(res.levels.size());
  v[entry] += 2.0 * (7.0 * std::ldexp(1.0, -n) + 3.0 * std::ldexp(1.0, -depth));
  res.cstar[n - 1] = CoeffArray::unflat(v, res.basis.L(), res.basis.m);
  verify_construction(res);
}

SymMatrix exact_block_cov(const ConstructionResult& res, int n) {
  if (n < 1 || n > static_cast<int>(res.gstar.size()))
    fail(ErrorKind::LevelOutOfRange, "level " + std::to_string(n) + " not computed");
  return res.gstar[n - 1];
}

}  // namespace wobble
