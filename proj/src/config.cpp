#include "wobble/config.hpp"

#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorKind::Configuration, field + ": " + what);
}

void reject_unknown(const ordered_json& obj, const std::string& where, const std::set<std::string>& known) {
  for (const auto& [k, v] : obj.items())
    if (!known.count(k)) bad(where.empty() ? k : where + "." + k, "unknown key");
}

double get_number(const ordered_json& obj, const std::string& key, const std::string& field, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

long long get_int(const ordered_json& obj, const std::string& key, const std::string& field, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<long long>();
}

std::string get_string(const ordered_json& obj, const std::string& key, const std::string& field,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

std::vector<int> get_int_list(const ordered_json& obj, const std::string& key, const std::string& field,
                              std::vector<int> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty()) bad(field, "expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < 1) bad(field, "entries must be integers >= 1");
    out.push_back(e.get<int>());
  }
  return out;
}

SymMatrix parse_matrix(const ordered_json& v, int m, const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != m) bad(field, "expected " + std::to_string(m) + " rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : v) {
    if (!row.is_array() || static_cast<int>(row.size()) != m) bad(field, "expected rows of length " + std::to_string(m));
    std::vector<double> r;
    for (const auto& e : row) {
      if (!e.is_number()) bad(field, "entries must be numbers");
      r.push_back(e.get<double>());
    }
    rows.push_back(std::move(r));
  }
  try {
    return SymMatrix::from_rows(rows);
  } catch (const Error&) {
    bad(field, "matrix is not symmetric");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

ReportFormat format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "both") return ReportFormat::Both;
  bad("format", "expected json, csv or both (got '" + s + "')");
}

std::string to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Json:
      return "json";
    case ReportFormat::Csv:
      return "csv";
    case ReportFormat::Both:
      return "both";
  }
  return "json";
}

std::vector<Normalization> normalize_band(BandParams& band, double& tau) {
  std::vector<Normalization> out;
  if (band.a > 1.0) {
    out.push_back({"a", band.a, 1.0});
    band.a = 1.0;
  }
  if (band.b < 1.0) {
    out.push_back({"b", band.b, 1.0});
    band.b = 1.0;
  }
  if (tau >= 1.0) {
    out.push_back({"tau", tau, 0.5});
    tau = 0.5;
  }
  return out;
}

RunConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) bad("config", "expected a JSON object");
  reject_unknown(doc, "",
                 {"m", "a", "b", "tau", "delta", "targets", "depth", "scheme", "grid", "fejer_scan_cap", "basis_mode",
                  "seed", "simulation", "mixing", "output"});
  RunConfig cfg;
  cfg.source = doc;
  ConstructionConfig& cc = cfg.construction;

  if (!doc.contains("m")) bad("m", "required");
  const long long m = get_int(doc, "m", "m", 0);
  if (m < 1 || m > 16) bad("m", "must be in 1..16");
  cc.band.m = static_cast<int>(m);
  cc.band.a = get_number(doc, "a", "a", cc.band.a);
  cc.band.b = get_number(doc, "b", "b", cc.band.b);
  if (!(cc.band.a > 0.0)) bad("a", "must be > 0");
  if (!(cc.band.a < cc.band.b)) bad("a", "must be < b (got a = " + fmt(cc.band.a) + ", b = " + fmt(cc.band.b) + ")");
  cc.tau = get_number(doc, "tau", "tau", cc.tau);
  if (!(cc.tau > 0.0)) bad("tau", "must be > 0");
  cc.delta = get_number(doc, "delta", "delta", cc.delta);
  if (!(cc.delta > 0.0)) bad("delta", "must be > 0");

  if (!doc.contains("targets") || !doc.at("targets").is_array() || doc.at("targets").empty())
    bad("targets", "required: a non-empty array of m x m matrices");
  const BandParams user_band = cc.band;
  for (std::size_t i = 0; i < doc.at("targets").size(); ++i) {
    const std::string field = "targets[" + std::to_string(i) + "]";
    SymMatrix g = parse_matrix(doc.at("targets")[i], cc.band.m, field);
    const auto [lo, hi] = eta_bounds(g);
    if (lo < user_band.a - kTolBand)
      bad(field, "eigenvalue " + fmt(lo) + " below a = " + fmt(user_band.a));
    if (hi > user_band.b + kTolBand)
      bad(field, "eigenvalue " + fmt(hi) + " above b = " + fmt(user_band.b));
    cc.targets.push_back(std::move(g));
  }
  cfg.normalization = normalize_band(cc.band, cc.tau);

  const long long depth = get_int(doc, "depth", "depth", cc.depth);
  if (depth < 1 || depth > 30) bad("depth", "must be in 1..30");
  cc.depth = static_cast<int>(depth);
  try {
    cc.scheme.variant = scheme_from_string(get_string(doc, "scheme", "scheme", to_string(cc.scheme.variant)));
  } catch (const Error& e) {
    bad("scheme", e.message());
  }
  const long long grid = get_int(doc, "grid", "grid", static_cast<long long>(cc.grid.size));
  if (grid < 4 || !std::has_single_bit(static_cast<unsigned long long>(grid))) bad("grid", "must be a power of two >= 4");
  cc.grid = GridSpec(static_cast<std::size_t>(grid));
  cc.fejer_scan_cap = get_int(doc, "fejer_scan_cap", "fejer_scan_cap", cc.fejer_scan_cap);
  if (cc.fejer_scan_cap < 1) bad("fejer_scan_cap", "must be >= 1");
  const std::string mode = get_string(doc, "basis_mode", "basis_mode", "subset");
  if (mode == "subset")
    cc.basis_mode = BasisMode::Subset;
  else if (mode == "enumerate")
    cc.basis_mode = BasisMode::Enumerate;
  else
    bad("basis_mode", "expected subset or enumerate");

  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) bad("seed", "expected an unsigned integer");
    cfg.master_seed = s.get<std::uint64_t>();
  }

  if (doc.contains("simulation")) {
    const auto& s = doc.at("simulation");
    if (!s.is_object()) bad("simulation", "expected an object");
    reject_unknown(s, "simulation", {"level", "replicates", "bernoulli_eps"});
    cfg.simulation.level = static_cast<int>(get_int(s, "level", "simulation.level", cfg.simulation.level));
    cfg.simulation.replicates = get_int(s, "replicates", "simulation.replicates", cfg.simulation.replicates);
    cfg.simulation.bernoulli_eps = get_number(s, "bernoulli_eps", "simulation.bernoulli_eps", 0.0);
  }
  if (cfg.simulation.level < 1 || cfg.simulation.level > cc.depth) bad("simulation.level", "must be in 1..depth");
  if (cfg.simulation.replicates < 100) bad("simulation.replicates", "must be >= 100");
  if (cfg.simulation.bernoulli_eps < 0.0) bad("simulation.bernoulli_eps", "must be >= 0");

  if (doc.contains("mixing")) {
    const auto& x = doc.at("mixing");
    if (!x.is_object()) bad("mixing", "expected an object");
    reject_unknown(x, "mixing", {"window", "gaps", "block_windows"});
    cfg.mixing.window = static_cast<int>(get_int(x, "window", "mixing.window", cfg.mixing.window));
    cfg.mixing.gaps = get_int_list(x, "gaps", "mixing.gaps", cfg.mixing.gaps);
    cfg.mixing.block_windows = get_int_list(x, "block_windows", "mixing.block_windows", cfg.mixing.block_windows);
  }
  if (cfg.mixing.window < 1 || cfg.mixing.window > 512) bad("mixing.window", "must be in 1..512");

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) bad("output", "expected an object");
    reject_unknown(o, "output", {"dir", "format"});
    cfg.out_dir = get_string(o, "dir", "output.dir", cfg.out_dir.string());
    cfg.format = format_from_string(get_string(o, "format", "output.format", "json"));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot open config file " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Configuration, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

ordered_json to_json(const RunConfig& cfg) {
  const ConstructionConfig& cc = cfg.construction;
  ordered_json j;
  j["m"] = cc.band.m;
  j["a"] = cc.band.a;
  j["b"] = cc.band.b;
  j["tau"] = cc.tau;
  j["delta"] = cc.delta;
  j["targets"] = ordered_json::array();
  for (const auto& g : cc.targets) j["targets"].push_back(g.rows());
  j["depth"] = cc.depth;
  j["scheme"] = std::string(to_string(cc.scheme.variant));
  j["grid"] = cc.grid.size;
  j["fejer_scan_cap"] = cc.fejer_scan_cap;
  j["basis_mode"] = cc.basis_mode == BasisMode::Subset ? "subset" : "enumerate";
  j["seed"] = cfg.master_seed;
  j["simulation"] = {{"level", cfg.simulation.level},
                     {"replicates", cfg.simulation.replicates},
                     {"bernoulli_eps", cfg.simulation.bernoulli_eps}};
  j["mixing"] = {{"window", cfg.mixing.window}, {"gaps", cfg.mixing.gaps}, {"block_windows", cfg.mixing.block_windows}};
  j["output"] = {{"dir", cfg.out_dir.string()}, {"format", to_string(cfg.format)}};
  return j;
}

}  // namespace wobble
