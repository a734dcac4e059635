#pragma once

#include <limits>
#include <string>
#include <vector>

namespace wobble {

inline constexpr double kCheckMargin = 1e-9;

// One verified inequality lower <= value <= bound; slack is the distance to
// the nearer edge and pass requires slack > margin (strict checks) or
// slack >= -margin (inclusive checks, negative margin).
struct CheckRecord {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

CheckRecord make_check(std::string name, double value, double bound, double margin = kCheckMargin);
CheckRecord make_range_check(std::string name, double value, double lower, double upper, double margin);

bool all_pass(const std::vector<CheckRecord>& checks);

}  // namespace wobble
