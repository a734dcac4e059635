#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wobble/checks.hpp"
#include "wobble/config.hpp"

namespace wobble {

inline constexpr int kSchemaVersion = 1;

enum class Fault { None, Cstar, Decompose, Normalization };

Fault fault_from_string(const std::string& s);
std::string to_string(Fault f);

// Provenance of a numeric claim.
enum class Provenance { Exact, Quadrature, MonteCarlo };

struct ReportCheck {
  CheckRecord record;
  std::string stage;
  Provenance provenance = Provenance::Exact;
  double tolerance = 0.0;
  std::string note;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json constants = nlohmann::ordered_json::object();
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  nlohmann::ordered_json simulation = nlohmann::ordered_json::object();
  nlohmann::ordered_json mixing = nlohmann::ordered_json::object();
  std::vector<ReportCheck> checks;
  std::map<std::string, CsvTable> tables;  // file stem -> table

  bool pass() const;
  // Top-level document; generated_at is the only non-deterministic field.
  nlohmann::ordered_json to_json(const std::string& generated_at) const;
};

Report cmd_decompose(const RunConfig& cfg, Fault fault = Fault::None);
Report cmd_construct(const RunConfig& cfg, Fault fault = Fault::None);
Report cmd_simulate(const RunConfig& cfg, Fault fault = Fault::None);
Report cmd_mixing(const RunConfig& cfg, Fault fault = Fault::None);
Report cmd_full(const RunConfig& cfg, Fault fault = Fault::None);

std::string csv_text(const CsvTable& t);
std::string utc_timestamp();

// Writes report.json and/or one CSV per table into dir; returns written paths.
std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir,
                                                ReportFormat format, const std::string& generated_at);

}  // namespace wobble
