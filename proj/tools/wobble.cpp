#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wobble/config.hpp"
#include "wobble/errors.hpp"
#include "wobble/report.hpp"

using namespace wobble;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
  std::optional<long long> replicates;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::string fault = "none";
};

RunConfig resolve(const Options& o) {
  std::ifstream in(o.config);
  if (!in) fail(ErrorKind::Configuration, "cannot open config file " + o.config);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Configuration, o.config + ": " + e.what());
  }
  // Numeric overrides go into the document so the echoed config reproduces the run.
  if (o.seed) doc["seed"] = *o.seed;
  if (o.depth) doc["depth"] = *o.depth;
  if (o.replicates) doc["simulation"]["replicates"] = *o.replicates;
  RunConfig cfg = parse_config(doc);
  if (o.out) cfg.out_dir = *o.out;
  if (o.format) cfg.format = format_from_string(*o.format);
  return cfg;
}

void print_summary(const Report& r, std::ostream& os) {
  std::size_t failed = 0;
  for (const auto& c : r.checks)
    if (!c.record.pass) {
      ++failed;
      os << "FAIL " << c.record.name << ": value " << c.record.value << " bound " << c.record.bound;
      if (!c.note.empty()) os << " (" << c.note << ")";
      os << "\n";
    }
  os << r.command << ": " << r.checks.size() - failed << "/" << r.checks.size() << " checks passed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wobble: stationary Gaussian sequences with wobbling partial-sum covariances"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed (overrides the config)");
    sub->add_option("--depth", o.depth, "recursion depth R")->check(CLI::Range(1, 30));
    sub->add_option("--replicates", o.replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--inject-fault", o.fault, "test hook: cstar, decompose or normalization")
        ->check(CLI::IsMember({"none", "cstar", "decompose", "normalization"}));
  };

  std::string command;
  for (const char* name : {"decompose", "construct", "simulate", "mixing", "full"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " stage");
    add_common(sub);
    sub->callback([&command, name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(o);
    const Fault fault = fault_from_string(o.fault);
    Report report;
    if (command == "decompose")
      report = cmd_decompose(cfg, fault);
    else if (command == "construct")
      report = cmd_construct(cfg, fault);
    else if (command == "simulate")
      report = cmd_simulate(cfg, fault);
    else if (command == "mixing")
      report = cmd_mixing(cfg, fault);
    else
      report = cmd_full(cfg, fault);
    for (const auto& path : write_report(report, cfg.out_dir, cfg.format, utc_timestamp()))
      std::cerr << "wrote " << path.string() << "\n";
    print_summary(report, std::cout);
    return report.pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.message() << "\n";
    return 2;
  }
}
