#include "wobble/checks.hpp"

#include <algorithm>
#include <cmath>

namespace wobble {

CheckRecord make_check(std::string name, double value, double bound, double margin) {
  CheckRecord r;
  r.name = std::move(name);
  r.value = value;
  r.bound = bound;
  r.slack = bound - value;
  r.pass = r.slack > margin;
  return r;
}

CheckRecord make_range_check(std::string name, double value, double lower, double upper, double margin) {
  CheckRecord r;
  r.name = std::move(name);
  r.value = value;
  r.lower = lower;
  r.bound = upper;
  r.slack = std::min(value - lower, upper - value);
  r.pass = r.slack > margin;
  return r;
}

bool all_pass(const std::vector<CheckRecord>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

}  // namespace wobble
