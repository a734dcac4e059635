#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wobble/construction.hpp"
#include "wobble/mixing.hpp"

namespace wobble {

enum class ReportFormat { Json, Csv, Both };

ReportFormat format_from_string(const std::string& s);
std::string to_string(ReportFormat f);

struct SimulationSettings {
  int level = 3;
  long long replicates = 10000;
  double bernoulli_eps = 0.0;
};

struct MixingSettings {
  int window = 64;
  std::vector<int> gaps = default_decay_gaps();
  std::vector<int> block_windows{1, 2, 4, 8, 16, 32, 64};
};

// One adjustment made while normalizing (a, b, tau).
struct Normalization {
  std::string field;
  double original = 0.0;
  double value = 0.0;
};

struct RunConfig {
  ConstructionConfig construction;
  SimulationSettings simulation;
  MixingSettings mixing;
  std::uint64_t master_seed = 20240917;
  std::filesystem::path out_dir = "wobble-out";
  ReportFormat format = ReportFormat::Json;
  std::vector<Normalization> normalization;
  nlohmann::ordered_json source;  // the document as given, before defaults
};

// Validates and fills defaults. Throws Error(Configuration) naming the field.
RunConfig parse_config(const nlohmann::ordered_json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Keeps 0 < a <= 1 <= b and 0 < tau < 1, shrinking a and tau or growing b.
std::vector<Normalization> normalize_band(BandParams& band, double& tau);

// Effective configuration with defaults filled, as echoed into reports.
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace wobble
