#include "wobble/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "wobble/construction.hpp"
#include "wobble/decomposition.hpp"
#include "wobble/errors.hpp"
#include "wobble/mixing.hpp"
#include "wobble/simulation.hpp"

namespace wobble {

using nlohmann::ordered_json;

namespace {

constexpr double kDecayTarget = 1e-3;
constexpr double kMonotoneTol = 1e-12;
constexpr double kMixingTol = 1e-9;
constexpr double kMcSigmas = 4.0;

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Exact:
      return "exact";
    case Provenance::Quadrature:
      return "quadrature";
    case Provenance::MonteCarlo:
      return "monte-carlo";
  }
  return "exact";
}

ordered_json matrix_json(const SymMatrix& a) { return a.rows(); }

ordered_json coeffs_json(const CoeffArray& c) { return {{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}}; }

std::vector<std::string> coeff_names(const BasisSet& basis) {
  std::vector<std::string> out;
  for (int l = 0; l < basis.L(); ++l) out.push_back("c1[" + std::to_string(l) + "]");
  for (int u = 0; u < basis.m; ++u) out.push_back("c2[" + std::to_string(u) + "]");
  for (const auto& [u, v] : basis.pairs) out.push_back("c3[" + std::to_string(u) + "," + std::to_string(v) + "]");
  return out;
}

// Shared state of one command; later stages reuse earlier results.
struct Pipeline {
  const RunConfig& cfg;
  Fault fault;
  Report& rep;
  std::optional<ConstructionResult> construction;
  std::optional<ProcessSpec> process;
  long long process_n = 0;

  void check(const std::string& stage, CheckRecord r, Provenance prov, double tol, std::string note = {}) {
    rep.checks.push_back({std::move(r), stage, prov, tol, std::move(note)});
  }

  void stage_error(const std::string& stage, const std::exception& e) {
    CheckRecord r;
    r.name = stage + ".completed";
    r.value = 1.0;
    r.bound = 0.0;
    r.slack = -1.0;
    r.pass = false;
    check(stage, r, Provenance::Exact, 0.0, e.what());
  }

  void set_constants(const RecursionConstants& k) {
    rep.constants["gamma"] = k.gamma;
    rep.constants["L"] = k.L;
    rep.constants["upsilon1"] = k.upsilon1;
    rep.constants["upsilon2"] = k.upsilon2;
    rep.constants["theta_big"] = k.theta_big;
    rep.constants["delta"] = k.delta_effective;
    rep.constants["block_rho_bound"] = block_rho_bound(k.upsilon1, k.upsilon2);
  }

  ordered_json& level_entry(int n) {
    while (static_cast<int>(rep.levels.size()) < n) rep.levels.push_back({{"n", rep.levels.size() + 1}});
    return rep.levels[n - 1];
  }
};

void stage_decompose(Pipeline& p) {
  const ConstructionConfig& cc = p.cfg.construction;
  const LatticeParams lat = LatticeParams::make(cc.band);
  const BasisSet basis = build_basis(cc.targets, lat, cc.basis_mode);
  p.set_constants(init_constants(cc, basis));
  p.rep.constants["basis_q1"] = ordered_json::array();
  for (const auto& q : basis.q1) p.rep.constants["basis_q1"].push_back(matrix_json(q));

  CsvTable table;
  table.header = {"target"};
  for (int i = 0; i < basis.m; ++i)
    for (int j = i; j < basis.m; ++j) table.header.push_back("H[" + std::to_string(i) + "," + std::to_string(j) + "]");
  const std::vector<std::string> names = coeff_names(basis);
  table.header.insert(table.header.end(), names.begin(), names.end());
  table.header.push_back("reconstruction_error");

  std::vector<CoeffArray> per_target;
  for (std::size_t t = 0; t < cc.targets.size(); ++t) {
    const SymMatrix& g = cc.targets[t];
    CoeffArray c = decompose(g, basis, lat);
    if (p.fault == Fault::Decompose && t == 0) c.c2[0] += 10.0 * lat.gamma;
    const DecompositionReport dr = verify_decomposition(g, basis, c);
    const std::string stage = "decompose";
    for (const auto& r : dr.checks) {
      CheckRecord rec = r;
      rec.name = "decompose.target[" + std::to_string(t) + "]." + r.name;
      p.check(stage, rec, Provenance::Exact, rec.name.ends_with("reconstruction") ? 1e-10 : 1e-12);
    }
    const SymMatrix h = round_to_H(g, lat);
    std::vector<std::string> row{std::to_string(t)};
    for (int i = 0; i < basis.m; ++i)
      for (int j = i; j < basis.m; ++j) row.push_back(num(h(i, j)));
    for (double v : c.flat()) row.push_back(num(v));
    row.push_back(num(dr.reconstruction_error));
    table.add(std::move(row));
    per_target.push_back(std::move(c));
  }
  for (int n = 1; n <= cc.depth; ++n) {
    const std::size_t t = static_cast<std::size_t>(n - 1) % cc.targets.size();
    ordered_json& e = p.level_entry(n);
    e["target_index"] = t;
    e["target"] = matrix_json(cc.targets[t]);
    e["H"] = matrix_json(round_to_H(cc.targets[t], lat));
    e["c"] = coeffs_json(per_target[t]);
  }
  p.rep.tables["decomposition"] = std::move(table);
}

void run_construction(Pipeline& p, int depth) {
  ConstructionConfig cc = p.cfg.construction;
  cc.depth = depth;
  p.construction = run_recursion(cc);
}

void stage_construct(Pipeline& p) {
  run_construction(p, p.cfg.construction.depth);
  ConstructionResult& res = *p.construction;
  if (p.fault == Fault::Cstar) inject_cstar_fault(res, 2);
  p.set_constants(res.constants);
  ordered_json ns = ordered_json::array();
  for (const auto& lv : res.levels)
    if (lv.N > 0) ns.push_back(lv.N);
  p.rep.constants["N"] = ns;

  CheckRecord done;
  done.name = "construct.completed";
  done.value = res.failure ? 1.0 : 0.0;
  done.bound = 0.0;
  done.slack = -done.value;
  done.pass = !res.failure;
  p.check("construct", done, Provenance::Exact, 0.0,
          res.failure ? std::string(to_string(res.failure->kind)) + ": " + res.failure->message
                      : "");
  if (res.failure)
    p.rep.constants["failure"] = {{"level", res.failure->level},
                                  {"kind", to_string(res.failure->kind)},
                                  {"message", res.failure->message}};

  CsvTable levels, coeffs;
  levels.header = {"n", "N", "max_cstar_gap", "cstar_bound", "wobble_gap", "wobble_bound", "eig_ratio"};
  coeffs.header = {"n", "index", "c", "cstar", "gap", "bound"};
  const std::vector<std::string> names = coeff_names(res.basis);

  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    const LevelState& lv = res.levels[i];
    ordered_json& e = p.level_entry(lv.n);
    e["N_prev"] = lv.N_prev;
    if (lv.N > 0) e["N"] = lv.N;
    e["fejer_ranks"] = lv.ranks;
    ordered_json perts = ordered_json::array();
    for (std::size_t f = 0; f < lv.records.size(); ++f) {
      const PerturbResult& r = lv.records[f];
      perts.push_back({{"function", names[f]},
                       {"branch", to_string(r.branch)},
                       {"scheme", to_string(r.scheme.variant)},
                       {"c_used", r.c_used},
                       {"halvings", r.halvings},
                       {"terms", r.terms},
                       {"degree", r.h.degree()},
                       {"verified", r.all_pass()}});
      CheckRecord rec;
      rec.name = "construct.level[" + std::to_string(lv.n) + "].perturbation." + names[f];
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& c : r.checks) worst = std::min(worst, c.slack);
      rec.value = -worst;
      rec.bound = 0.0;
      rec.slack = worst;
      rec.pass = r.all_pass();
      p.check("construct", rec, Provenance::Quadrature, kCheckMargin, "smallest slack over the perturbation checks");
    }
    e["perturbations"] = perts;
    const bool cond = all_pass(lv.condition_c);
    e["condition_c"] = cond;
  }

  for (const LevelReport& r : res.reports) {
    ordered_json& e = p.level_entry(r.n);
    e["c_flat"] = r.c;
    e["cstar"] = r.cstar;
    e["cstar_gap"] = r.cgap;
    e["cstar_bound"] = r.c_bound;
    e["gstar"] = matrix_json(r.gstar);
    e["wobble_gap"] = r.g_gap;
    e["wobble_bound"] = r.g_bound;
    e["eig_ratio"] = r.eig_ratio;
    double worst = 0.0;
    for (std::size_t j = 0; j < r.c.size(); ++j) {
      worst = std::max(worst, r.cgap[j]);
      coeffs.add({std::to_string(r.n), names[j], num(r.c[j]), num(r.cstar[j]), num(r.cgap[j]), num(r.c_bound)});
    }
    levels.add({std::to_string(r.n), std::to_string(r.N), num(worst), num(r.c_bound), num(r.g_gap), num(r.g_bound),
                num(r.eig_ratio)});
    for (const auto& c : r.checks) {
      CheckRecord rec = c;
      rec.name = "construct.level[" + std::to_string(r.n) + "]." + c.name;
      p.check("construct", rec, Provenance::Quadrature, 0.0);
    }
  }
  p.rep.tables["levels"] = std::move(levels);
  p.rep.tables["coefficients"] = std::move(coeffs);
}

// Process of the simulation level: log-densities C_s and N_s.
void ensure_process(Pipeline& p) {
  if (p.process) return;
  const int s = p.cfg.simulation.level;
  const bool have = p.construction && static_cast<int>(p.construction->levels.size()) >= s &&
                    p.construction->levels[s - 1].N > 0;
  if (!have) run_construction(p, s);
  const ConstructionResult& res = *p.construction;
  if (static_cast<int>(res.levels.size()) < s || res.levels[s - 1].N == 0)
    fail(ErrorKind::ConstructionFailed, "construction stopped before level " + std::to_string(s) +
                                            (res.failure ? ": " + res.failure->message : std::string()));
  if (p.rep.constants.empty()) p.set_constants(res.constants);
  p.process = make_process(res.basis, res.levels[s - 1].functions, p.cfg.construction.grid);
  p.process_n = res.levels[s - 1].N;
}

SymMatrix process_cov(const ProcessSpec& spec, long long n) {
  std::vector<double> w;
  for (const auto& t : spec.autocov) w.push_back(fejer_mean(t, n));
  return weighted_sum(spec.basis, CoeffArray::unflat(w, spec.basis.L(), spec.m));
}

void stage_simulate(Pipeline& p) {
  ensure_process(p);
  const ProcessSpec& spec = *p.process;
  const SimulationSettings& ss = p.cfg.simulation;
  const long long n = p.process_n;
  SymMatrix exact = process_cov(spec, n);
  if (ss.bernoulli_eps > 0.0) exact += ss.bernoulli_eps * SymMatrix::identity(spec.m);
  EmpiricalCov ec = empirical_partial_sum_cov(spec, n, ss.replicates, p.cfg.master_seed, ss.bernoulli_eps);
  if (p.fault == Fault::Normalization) {
    // Divides S_N by N instead of sqrt(N).
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (double& v : ec.samples) v *= s;
    ec.cov *= s * s;
    ec.se *= s * s;
  }

  ordered_json& sim = p.rep.simulation;
  sim["level"] = ss.level;
  sim["N"] = n;
  sim["replicates"] = ss.replicates;
  sim["seed"] = p.cfg.master_seed;
  sim["bernoulli_eps"] = ss.bernoulli_eps;
  sim["exact_cov"] = matrix_json(exact);
  sim["empirical_cov"] = matrix_json(ec.cov);
  sim["standard_errors"] = matrix_json(ec.se);
  sim["max_clipped_mass"] = ec.max_clipped_mass;
  sim["note"] = "exact_cov is the Fejer-weighted autocovariance sum of the simulated log-densities at N";

  CsvTable t;
  t.header = {"i", "j", "empirical", "exact", "standard_error", "z"};
  for (int i = 0; i < spec.m; ++i)
    for (int j = i; j < spec.m; ++j) {
      const double d = ec.cov(i, j) - exact(i, j);
      t.add({std::to_string(i), std::to_string(j), num(ec.cov(i, j)), num(exact(i, j)), num(ec.se(i, j)),
             num(d / ec.se(i, j))});
      p.check("simulate",
              make_check("simulate.cov[" + std::to_string(i) + "," + std::to_string(j) + "]", std::abs(d),
                         kMcSigmas * ec.se(i, j), 0.0),
              Provenance::MonteCarlo, kMcSigmas, "within 4 standard errors of the exact covariance");
    }
  p.rep.tables["simulation"] = std::move(t);

  if (ss.bernoulli_eps == 0.0) {
    const NormalityReport nr = normality_diagnostic(ec.samples, spec.m, exact);
    ordered_json coords = ordered_json::array();
    for (const auto& c : nr.coords)
      coords.push_back({{"mean", c.mean},
                        {"variance", c.variance},
                        {"skewness", c.skewness},
                        {"excess_kurtosis", c.excess_kurtosis}});
    sim["normality"] = {{"coords", coords}, {"cross_corr", nr.cross_corr}, {"pass", nr.pass}};
    for (const auto& c : nr.checks) {
      CheckRecord rec = c;
      rec.name = "simulate.normality." + c.name;
      p.check("simulate", rec, Provenance::MonteCarlo, kMcSigmas);
    }
  }
}

void stage_mixing(Pipeline& p) {
  ensure_process(p);
  const ProcessSpec& spec = *p.process;
  const MixingSettings& ms = p.cfg.mixing;
  const double u1 = p.rep.constants["upsilon1"].get<double>();
  const double u2 = p.rep.constants["upsilon2"].get<double>();
  const double bound = block_rho_bound(u1, u2);
  const StationaryModel pm = process_model(spec);
  const std::vector<StationaryModel> bms = block_models(spec);
  std::vector<int> mult;
  for (int j = 0; j < static_cast<int>(bms.size()); ++j) mult.push_back(j < spec.basis.L() ? spec.m : 1);
  const std::vector<std::string> names = coeff_names(spec.basis);

  ordered_json& mx = p.rep.mixing;
  mx["note"] = "finite-window estimates; each is a lower bound on the corresponding coefficient";
  mx["window"] = ms.window;
  mx["level"] = p.cfg.simulation.level;
  double worst_rho_mi = -std::numeric_limits<double>::infinity();
  auto track = [&](const MixingPoint& pt) { worst_rho_mi = std::max(worst_rho_mi, pt.rho - std::sqrt(2.0 * pt.mi)); };

  // Gap-1 block bound over growing windows.
  CsvTable bt;
  bt.header = {"block", "window", "rho_hat", "mi_hat", "bound"};
  ordered_json blocks = ordered_json::array();
  for (std::size_t j = 0; j < bms.size(); ++j) {
    double worst = 0.0;
    for (int w : ms.block_windows) {
      const MixingPoint pt = mixing_point(bms[j], {w, 1, w});
      track(pt);
      worst = std::max(worst, pt.rho);
      bt.add({names[j], std::to_string(w), num(pt.rho), num(pt.mi), num(bound)});
    }
    blocks.push_back({{"block", names[j]}, {"max_rho_hat", worst}, {"bound", bound}});
    p.check("mixing", make_check("mixing.block_bound." + names[j], worst, bound + kMixingTol, 0.0), Provenance::Exact,
            kMixingTol, "gap 1, largest over the tested windows");
  }
  mx["block_bounds"] = blocks;
  p.rep.tables["block_bounds"] = std::move(bt);

  // Window monotonicity of the assembled process at gap 1.
  CsvTable wt;
  wt.header = {"window", "rho_hat", "mi_hat"};
  ordered_json wins = ordered_json::array();
  double prev_rho = 0.0, prev_mi = 0.0, worst_drop = 0.0;
  for (int w : ms.block_windows) {
    const MixingPoint pt = mixing_point(pm, {w, 1, w});
    track(pt);
    worst_drop = std::max({worst_drop, prev_rho - pt.rho, prev_mi - pt.mi});
    prev_rho = pt.rho;
    prev_mi = pt.mi;
    wins.push_back({{"window", w}, {"rho_hat", pt.rho}, {"mi_hat", pt.mi}});
    wt.add({std::to_string(w), num(pt.rho), num(pt.mi)});
  }
  mx["window_trend"] = wins;
  p.rep.tables["mixing_windows"] = std::move(wt);
  p.check("mixing", make_check("mixing.window_monotone", worst_drop, kMonotoneTol, 0.0), Provenance::Exact,
          kMonotoneTol, "largest decrease when the windows grow");

  // Gap scan with composition checks at matched windows.
  CsvTable dt;
  dt.header = {"gap", "rho_hat", "mi_hat", "max_block_rho", "sum_block_mi"};
  ordered_json scan = ordered_json::array();
  std::vector<MixingPoint> decay;
  for (int g : ms.gaps) {
    const CompositionReport cr = composition_checks(pm, bms, mult, {ms.window, g, ms.window});
    track(cr.process);
    double max_rho = 0.0, sum_mi = 0.0;
    for (std::size_t j = 0; j < cr.blocks.size(); ++j) {
      track(cr.blocks[j]);
      max_rho = std::max(max_rho, cr.blocks[j].rho);
      sum_mi += mult[j] * cr.blocks[j].mi;
    }
    decay.push_back(cr.process);
    scan.push_back({{"gap", g}, {"rho_hat", cr.process.rho}, {"mi_hat", cr.process.mi}, {"max_block_rho", max_rho},
                    {"sum_block_mi", sum_mi}, {"stacked_mi", cr.stacked_mi}, {"stacked_parts", cr.stacked_parts}});
    dt.add({std::to_string(g), num(cr.process.rho), num(cr.process.mi), num(max_rho), num(sum_mi)});
    for (const auto& c : cr.checks) {
      CheckRecord rec = c;
      rec.name = "mixing.gap[" + std::to_string(g) + "]." + c.name;
      p.check("mixing", rec, Provenance::Exact, c.name == "mi_additivity" ? 1e-10 : kMixingTol);
    }
  }
  mx["decay"] = scan;
  p.rep.tables["mixing_decay"] = std::move(dt);

  double rise_rho = 0.0, rise_mi = 0.0;
  for (std::size_t i = 1; i < decay.size(); ++i) {
    rise_rho = std::max(rise_rho, decay[i].rho - decay[i - 1].rho);
    rise_mi = std::max(rise_mi, decay[i].mi - decay[i - 1].mi);
  }
  p.check("mixing", make_check("mixing.decay.rho_nonincreasing", rise_rho, kMonotoneTol, 0.0), Provenance::Exact,
          kMonotoneTol);
  p.check("mixing", make_check("mixing.decay.mi_nonincreasing", rise_mi, kMonotoneTol, 0.0), Provenance::Exact,
          kMonotoneTol);
  p.check("mixing", make_check("mixing.decay.rho_final", decay.back().rho, kDecayTarget, 0.0), Provenance::Exact, 0.0,
          "rho_hat at the largest gap");
  p.check("mixing", make_check("mixing.decay.mi_final", decay.back().mi, kDecayTarget, 0.0), Provenance::Exact, 0.0,
          "mi_hat at the largest gap");
  p.check("mixing", make_check("mixing.rho_vs_mi", worst_rho_mi, kMonotoneTol, 0.0), Provenance::Exact, kMonotoneTol,
          "largest rho_hat - sqrt(2 mi_hat) over every computed window");

  // Gap-1 values against tau.
  const MixingPoint one = mixing_point(pm, {ms.window, 1, ms.window});
  const double tau = p.cfg.construction.tau;
  mx["gap1"] = {{"rho_hat", one.rho}, {"mi_hat", one.mi}, {"tau", tau}};
  p.check("mixing", make_check("mixing.tau.rho", one.rho, tau, 0.0), Provenance::Exact, 0.0);
  p.check("mixing", make_check("mixing.tau.mi", one.mi, tau, 0.0), Provenance::Exact, 0.0);
}

template <class Stage>
void guarded(Pipeline& p, const std::string& name, Stage stage) {
  try {
    stage(p);
  } catch (const Error& e) {
    p.stage_error(name, Error(e.kind(), name + " stage: " + e.message()));
  } catch (const std::exception& e) {
    p.stage_error(name, std::runtime_error(name + " stage: " + e.what()));
  }
}

Report make_report(const RunConfig& cfg, const std::string& command) {
  Report r;
  r.command = command;
  ordered_json effective = to_json(cfg);
  effective.erase("output");
  ordered_json norm = ordered_json::array();
  for (const auto& n : cfg.normalization) norm.push_back({{"field", n.field}, {"original", n.original}, {"value", n.value}});
  r.config = {{"input", cfg.source}, {"effective", effective}, {"normalization", norm}};
  return r;
}

}  // namespace

Fault fault_from_string(const std::string& s) {
  if (s == "none") return Fault::None;
  if (s == "cstar") return Fault::Cstar;
  if (s == "decompose") return Fault::Decompose;
  if (s == "normalization") return Fault::Normalization;
  fail(ErrorKind::Configuration, "unknown fault '" + s + "' (expected cstar, decompose or normalization)");
}

std::string to_string(Fault f) {
  switch (f) {
    case Fault::None:
      return "none";
    case Fault::Cstar:
      return "cstar";
    case Fault::Decompose:
      return "decompose";
    case Fault::Normalization:
      return "normalization";
  }
  return "none";
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.record.pass) return false;
  return true;
}

ordered_json Report::to_json(const std::string& generated_at) const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["generated_at"] = generated_at;
  j["config"] = config;
  j["constants"] = constants;
  j["levels"] = levels;
  j["simulation"] = simulation;
  j["mixing"] = mixing;
  ordered_json cs = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.record.name;
    e["stage"] = c.stage;
    e["value"] = c.record.value;
    if (std::isfinite(c.record.lower)) e["lower"] = c.record.lower;
    e["bound"] = c.record.bound;
    e["slack"] = c.record.slack;
    e["tolerance"] = c.tolerance;
    e["provenance"] = to_string(c.provenance);
    e["pass"] = c.record.pass;
    if (!c.note.empty()) e["note"] = c.note;
    cs.push_back(std::move(e));
  }
  j["checks"] = cs;
  j["pass"] = pass();
  return j;
}

Report cmd_decompose(const RunConfig& cfg, Fault fault) {
  Report r = make_report(cfg, "decompose");
  Pipeline p{cfg, fault, r, {}, {}, 0};
  guarded(p, "decompose", stage_decompose);
  return r;
}

Report cmd_construct(const RunConfig& cfg, Fault fault) {
  Report r = make_report(cfg, "construct");
  Pipeline p{cfg, fault, r, {}, {}, 0};
  guarded(p, "construct", stage_construct);
  return r;
}

Report cmd_simulate(const RunConfig& cfg, Fault fault) {
  Report r = make_report(cfg, "simulate");
  Pipeline p{cfg, fault, r, {}, {}, 0};
  guarded(p, "simulate", stage_simulate);
  return r;
}

Report cmd_mixing(const RunConfig& cfg, Fault fault) {
  Report r = make_report(cfg, "mixing");
  Pipeline p{cfg, fault, r, {}, {}, 0};
  guarded(p, "mixing", stage_mixing);
  return r;
}

Report cmd_full(const RunConfig& cfg, Fault fault) {
  Report r = make_report(cfg, "full");
  Pipeline p{cfg, fault, r, {}, {}, 0};
  guarded(p, "decompose", stage_decompose);
  guarded(p, "construct", stage_construct);
  guarded(p, "simulate", stage_simulate);
  guarded(p, "mixing", stage_mixing);
  return r;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
      if (!quote) {
        os << cells[i];
        continue;
      }
      os << '"';
      for (char ch : cells[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir,
                                                ReportFormat format, const std::string& generated_at) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Configuration, "cannot write " + path.string());
    f << text;
    out.push_back(path);
  };
  if (format != ReportFormat::Csv) write(dir / "report.json", report.to_json(generated_at).dump(2) + "\n");
  if (format != ReportFormat::Json) {
    for (const auto& [stem, table] : report.tables) write(dir / (stem + ".csv"), csv_text(table));
    CsvTable checks;
    checks.header = {"name", "stage", "value", "bound", "slack", "tolerance", "provenance", "pass"};
    for (const auto& c : report.checks)
      checks.add({c.record.name, c.stage, num(c.record.value), num(c.record.bound), num(c.record.slack),
                  num(c.tolerance), to_string(c.provenance), c.record.pass ? "true" : "false"});
    write(dir / "checks.csv", csv_text(checks));
  }
  return out;
}

}  // namespace wobble
