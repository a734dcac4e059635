#pragma once

#include <string>
#include <vector>

#include "wobble/checks.hpp"
#include "wobble/spectral.hpp"

namespace wobble {

struct PerturbRequest {
  CosineSeries f;
  double upsilon1 = -1.0;
  double upsilon2 = 1.0;
  double theta = 0.0;
  double delta = 1.0;
  double eps = 0.1;
  long long fejer_cap = 1;  // N: the Fejer checks run over n = 1..N
  GridSpec grid{std::size_t{1} << 14};  // verification grid (raised to fit the series)
};

// log-harmonic: a_{c,k} ~ 1/(k log k) up to the cap M(c); feasible only for tiny budgets.
// harmonic:     a_k = budget / (k H_M); hits h(0) exactly, but its L1 footprint ~ budget / H_M
//               forces exponentially many terms for small eps.
// fejer:        a_k = 2 budget (1 - k/M) / (M - 1), i.e. budget (F_M - 1)/(M - 1); hits h(0)
//               exactly and its L1 footprint shrinks like 1/M.
enum class SchemeVariant { LogHarmonic, Harmonic, Fejer };

struct CoefficientScheme {
  SchemeVariant variant = SchemeVariant::Fejer;
  long long m_cap = 1LL << 20;
};

std::string to_string(SchemeVariant v);
SchemeVariant scheme_from_string(const std::string& s);

enum class Branch { Identity, Raise, Negated };
std::string to_string(Branch b);

struct PerturbResult {
  CosineSeries h;
  double c_used = 0.0;
  CoefficientScheme scheme;
  Branch branch = Branch::Identity;
  int halvings = 0;
  long long terms = 0;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
};

double select_c0(const PerturbRequest& req);

double coeff_a(double c, long long k);

struct CapResult {
  bool overflow = false;
  long long m = 0;              // valid when !overflow
  double log_log_estimate = 0;  // log log M(c) from the integral tail estimate
};

CapResult cap_M(double c, double budget, long long m_cap);

CosineSeries build_gc(double c, long long m);

// Shape of the log-harmonic g_c: |g_c| <= c on [c, pi], -c <= g_c <= budget on [0, c].
std::vector<CheckRecord> gc_shape_checks(double c, double budget, const CosineSeries& g, const GridSpec& grid);

CosineSeries harmonic_gc(double budget, double delta_room, long long m_cap, long long min_terms = 1);

CosineSeries fejer_gc(double budget, long long m);

PerturbResult construct_h(const PerturbRequest& req, const CoefficientScheme& scheme);

// Recomputes every conclusion from h alone.
std::vector<CheckRecord> verify_perturbation(const PerturbRequest& req, const CosineSeries& h);

}  // namespace wobble
