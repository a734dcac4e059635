#pragma once

#include <vector>

#include "wobble/checks.hpp"
#include "wobble/matrix.hpp"
#include "wobble/simulation.hpp"
#include "wobble/spectral.hpp"

namespace wobble {

inline constexpr double kCorrClip = 1e-12;

// Past window X_{-p+1..0}, future window X_{n..n+q-1}.
struct WindowSpec {
  int p = 64;
  int gap = 1;
  int q = 64;
};

// R(h) = sum_b r_b(h) * loading_b, with independent scalar components.
struct StationaryComponent {
  AutocovarianceTable table;
  SymMatrix loading;
  bool zero_tail = true;  // entries past the table are zero (trimmed tables)
};

struct StationaryModel {
  int m = 1;
  std::vector<StationaryComponent> components;

  SymMatrix lag_cov(long long h) const;
  long long table_reach() const;  // largest lag covered by every non-zero-tail table
};

StationaryModel scalar_model(const AutocovarianceTable& table, bool zero_tail = true);
// Assembled process: sum over functions of r_j(h) * Q_j.
StationaryModel process_model(const ProcessSpec& spec);
// One scalar model per function of the collection (the building blocks).
std::vector<StationaryModel> block_models(const ProcessSpec& spec);
// Independent models placed on disjoint coordinates.
StationaryModel stack_models(const std::vector<StationaryModel>& parts);

struct JointCov {
  SymMatrix past, future;
  Matrix cross;  // past x future
};

JointCov window_cov(const StationaryModel& model, const WindowSpec& w);

struct CanonicalCorrelations {
  std::vector<double> r;  // descending, in [0, 1 - 1e-12]
  bool clipped = false;
};

CanonicalCorrelations canonical_corrs(const JointCov& joint);

double mi_from_corrs(const CanonicalCorrelations& c);
double rho_hat(const StationaryModel& model, const WindowSpec& w);
double mi_hat(const StationaryModel& model, const WindowSpec& w);

struct MixingPoint {
  WindowSpec window;
  double rho = 0.0;
  double mi = 0.0;
};

MixingPoint mixing_point(const StationaryModel& model, const WindowSpec& w);

// rho <= max block rho, mi <= sum of block mi (with multiplicities), and MI
// additivity for the first two blocks stacked.
struct CompositionReport {
  MixingPoint process;
  std::vector<MixingPoint> blocks;
  double stacked_mi = 0.0;
  double stacked_parts = 0.0;
  std::vector<CheckRecord> checks;
};

CompositionReport composition_checks(const StationaryModel& process, const std::vector<StationaryModel>& blocks,
                                     const std::vector<int>& multiplicity, const WindowSpec& w);

// Gap-1 maximal-correlation bound for a block whose log-density lies in [u1, u2].
double block_rho_bound(double upsilon1, double upsilon2);

std::vector<int> default_decay_gaps();

}  // namespace wobble
