#include "wobble/perturbation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kCFloor = 1e-12;
constexpr double kIdentityTol = 1e-14;
constexpr double kHarmonicMargin = 0.1;
// log log M(c) ~ pi budget / c^2 - kCapShift, from
// sum_{k=3}^M 1/(k log k) ~ log log M - log log 3 + 1/(6 log 3).
const double kCapShift = 1.5 - std::log(std::log(3.0)) + 1.0 / (6.0 * std::log(3.0));

GridSpec fit_grid(const GridSpec& base, int degree) {
  return GridSpec(std::max(base.size, std::bit_ceil(std::size_t{16} * static_cast<std::size_t>(std::max(degree, 1)))));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Everything about f that the halving loop reuses across candidates.
struct Baseline {
  const PerturbRequest& req;
  AutocovarianceTable exp_f, exp_neg_f;

  explicit Baseline(const PerturbRequest& r)
      : req(r), exp_f(autocov_of_exp_adaptive(r.f, r.grid)), exp_neg_f(autocov_of_exp_adaptive(-r.f, r.grid)) {}

  static double fejer_gap(const AutocovarianceTable& a, const AutocovarianceTable& b, long long n_max) {
    AutocovarianceTable d;
    d.r.resize(std::max(a.r.size(), b.r.size()));
    for (std::size_t k = 0; k < d.r.size(); ++k) d.r[k] = a.at(k) - b.at(k);
    return 2.0 * kPi * max_abs_fejer_mean(d, n_max);
  }

  std::vector<CheckRecord> verify(const CosineSeries& h) const {
    const GridSpec grid = fit_grid(req.grid, std::max(h.degree(), req.f.degree()));
    const std::vector<double> hv = eval_half_grid(h, grid);
    const std::vector<double> fv = eval_half_grid(req.f, grid);
    const std::size_t p = grid.half();

    double lo = hv[0], hi = hv[0], l1 = 0.0;
    for (std::size_t j = 0; j <= p; ++j) {
      lo = std::min(lo, hv[j]);
      hi = std::max(hi, hv[j]);
      const double w = (j == 0 || j == p) ? 1.0 : 2.0;
      l1 += w * std::abs(hv[j] - fv[j]);
    }
    l1 *= 2.0 * kPi / static_cast<double>(grid.size);

    std::vector<CheckRecord> out;
    out.push_back(make_check("band", std::max(req.upsilon1 - lo, hi - req.upsilon2), 0.0));
    out.push_back(make_check("psi", psi(h), req.delta));
    out.push_back(make_check("center", std::abs(h.at_zero() - req.theta), req.eps));
    out.push_back(make_check("l1", l1, req.eps));
    const AutocovarianceTable eh = autocov_of_exp_adaptive(h, req.grid);
    out.push_back(make_check("fejer_exp", fejer_gap(eh, exp_f, req.fejer_cap), req.eps));
    const AutocovarianceTable enh = autocov_of_exp_adaptive(-h, req.grid);
    out.push_back(make_check("fejer_exp_neg", fejer_gap(enh, exp_neg_f, req.fejer_cap), req.eps));
    return out;
  }
};

void validate(const PerturbRequest& req) {
  if (!(req.upsilon1 < req.theta && req.theta < req.upsilon2))
    fail(ErrorKind::PreconditionViolation,
         "need upsilon1 < theta < upsilon2, got " + fmt(req.upsilon1) + ", " + fmt(req.theta) + ", " + fmt(req.upsilon2));
  if (!(req.eps > 0.0) || !(req.delta > 0.0)) fail(ErrorKind::PreconditionViolation, "delta and eps must be positive");
  if (req.fejer_cap < 1) fail(ErrorKind::PreconditionViolation, "Fejer cap must be >= 1");
  if (!(psi(req.f) < req.delta))
    fail(ErrorKind::PreconditionViolation, "psi(f) = " + fmt(psi(req.f)) + " is not below delta " + fmt(req.delta));
  const std::vector<double> fv = eval_half_grid(req.f, fit_grid(req.grid, req.f.degree()));
  const auto [lo, hi] = std::minmax_element(fv.begin(), fv.end());
  if (!(*lo > req.upsilon1 && *hi < req.upsilon2))
    fail(ErrorKind::PreconditionViolation, "f leaves the open band: range [" + fmt(*lo) + ", " + fmt(*hi) + "]");
}

PerturbRequest negated(const PerturbRequest& req) {
  PerturbRequest n = req;
  n.f = -req.f;
  n.upsilon1 = -req.upsilon2;
  n.upsilon2 = -req.upsilon1;
  n.theta = -req.theta;
  return n;
}

std::string failing(const std::vector<CheckRecord>& checks) {
  std::string s;
  for (const auto& c : checks)
    if (!c.pass) s += (s.empty() ? "" : ", ") + c.name + " (value " + fmt(c.value) + ", bound " + fmt(c.bound) + ")";
  return s;
}

PerturbResult raise(const PerturbRequest& req, const CoefficientScheme& scheme) {
  const double budget = req.theta - req.f.at_zero();
  const Baseline base(req);
  PerturbResult res;
  res.scheme = scheme;
  res.branch = Branch::Raise;
  double c = select_c0(req);
  std::vector<CheckRecord> last;
  while (c >= kCFloor) {
    CosineSeries g;
    long long terms = 0;
    switch (scheme.variant) {
      case SchemeVariant::LogHarmonic: {
        const CapResult cap = cap_M(c, budget, scheme.m_cap);
        if (cap.overflow)
          fail(ErrorKind::SchemeInfeasible, "log-harmonic scheme needs M(c) ~ exp(exp(" + fmt(cap.log_log_estimate) +
                                                ")) terms at c = " + fmt(c) + "; use the harmonic or fejer scheme");
        terms = cap.m;
        g = build_gc(c, terms);
        break;
      }
      case SchemeVariant::Harmonic: {
        const double room = std::pow(std::sqrt(req.delta) - std::sqrt(psi(req.f)), 2);
        const auto min_terms = static_cast<long long>(std::ceil(2.0 * kPi / c));
        g = harmonic_gc(budget, room, scheme.m_cap, min_terms);
        terms = g.degree();
        break;
      }
      case SchemeVariant::Fejer: {
        terms = static_cast<long long>(std::ceil(2.0 * kPi / c)) + 1;
        if (terms > scheme.m_cap)
          fail(ErrorKind::SchemeInfeasible, "fejer scheme needs " + std::to_string(terms) + " terms (> cap " +
                                                std::to_string(scheme.m_cap) + ") after " +
                                                std::to_string(res.halvings) + " halvings; last failures: " +
                                                failing(last));
        g = fejer_gc(budget, terms);
        break;
      }
    }
    CosineSeries h = req.f + g;
    const std::vector<CheckRecord> prev = std::move(last);
    try {
      last = base.verify(h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Configuration) throw;
      fail(ErrorKind::SchemeInfeasible, "verification grid exhausted at " + std::to_string(terms) +
                                            " terms after " + std::to_string(res.halvings) +
                                            " halvings; last failures: " + failing(prev));
    }
    // Halving c only lengthens the series; if psi is over budget and not
    // shrinking, no smaller c will help.
    if (!prev.empty() && !last[1].pass && !prev[1].pass && last[1].value >= 0.99 * prev[1].value)
      fail(ErrorKind::SchemeInfeasible, "psi(h) = " + fmt(last[1].value) + " stays above delta = " + fmt(req.delta) +
                                            " as c shrinks (" + to_string(scheme.variant) + " scheme, budget " +
                                            fmt(budget) + ")");
    if (all_pass(last)) {
      res.h = std::move(h);
      res.c_used = c;
      res.terms = terms;
      res.checks = std::move(last);
      return res;
    }
    c *= 0.5;
    ++res.halvings;
  }
  fail(ErrorKind::ConstructionFailed, "c fell below " + fmt(kCFloor) + "; failing: " + failing(last));
}

}  // namespace

std::string to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::LogHarmonic: return "log-harmonic";
    case SchemeVariant::Harmonic: return "harmonic";
    case SchemeVariant::Fejer: return "fejer";
  }
  return "?";
}

SchemeVariant scheme_from_string(const std::string& s) {
  if (s == "log-harmonic") return SchemeVariant::LogHarmonic;
  if (s == "harmonic") return SchemeVariant::Harmonic;
  if (s == "fejer") return SchemeVariant::Fejer;
  fail(ErrorKind::Configuration, "unknown coefficient scheme '" + s + "'");
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Identity: return "identity";
    case Branch::Raise: return "raise";
    case Branch::Negated: return "negated";
  }
  return "?";
}

bool PerturbResult::all_pass() const { return wobble::all_pass(checks); }

double select_c0(const PerturbRequest& req) {
  const double f0 = req.f.at_zero();
  if (!(req.theta > f0)) fail(ErrorKind::PreconditionViolation, "select_c0 needs theta > f(0)");
  const GridSpec grid = fit_grid(req.grid, req.f.degree());
  const std::vector<double> fv = eval_half_grid(req.f, grid);
  const auto [lo, hi] = std::minmax_element(fv.begin(), fv.end());
  const double cap = std::min({1.0, req.theta - f0, *lo - req.upsilon1, req.upsilon2 - *hi});
  const double room = req.upsilon2 - req.theta;
  if (!(cap > 0.0) || !(room > 0.0))
    fail(ErrorKind::InfeasibleRequest, "no positive c0: band or target hypotheses fail on the grid");

  const std::size_t p = grid.half();
  // |f(lambda) - f(0)| < upsilon2 - theta for |lambda| <= c, on grid nodes and at c itself.
  auto ok = [&](double c) {
    if (std::abs(eval(req.f, c) - f0) >= room) return false;
    for (std::size_t j = 0; j <= p; ++j) {
      const double lam = kPi * static_cast<double>(j) / static_cast<double>(p);
      if (lam > c) break;
      if (std::abs(fv[j] - f0) >= room) return false;
    }
    return true;
  };
  double sup = cap;
  if (!ok(cap)) {
    double l = 0.0, h = cap;
    for (int it = 0; it < 200 && h - l > 1e-15 * cap; ++it) {
      const double mid = 0.5 * (l + h);
      (ok(mid) ? l : h) = mid;
    }
    sup = l;
  }
  if (!(sup > 0.0)) fail(ErrorKind::InfeasibleRequest, "no positive c0 satisfies the local-oscillation condition");
  return 0.9 * sup;
}

double coeff_a(double c, long long k) {
  const double base = c * c / kPi / static_cast<double>(k);
  return k <= 2 ? base : base / std::log(static_cast<double>(k));
}

CapResult cap_M(double c, double budget, long long m_cap) {
  if (!(budget > coeff_a(c, 1)))
    fail(ErrorKind::PreconditionViolation, "budget " + fmt(budget) + " does not exceed a_{c,1} = " + fmt(coeff_a(c, 1)));
  CapResult out;
  out.log_log_estimate = kPi * budget / (c * c) - kCapShift;
  double s = 0.0;
  for (long long k = 1; k <= m_cap; ++k) {
    s += coeff_a(c, k);
    if (s > budget) {
      out.m = k - 1;
      return out;
    }
  }
  out.overflow = true;
  return out;
}

CosineSeries build_gc(double c, long long m) {
  if (m < 1) fail(ErrorKind::PreconditionViolation, "g_c needs M >= 1");
  std::vector<double> a(static_cast<std::size_t>(m));
  for (long long k = 1; k <= m; ++k) a[k - 1] = coeff_a(c, k);
  return CosineSeries(0.0, std::move(a));
}

std::vector<CheckRecord> gc_shape_checks(double c, double budget, const CosineSeries& g, const GridSpec& grid) {
  const GridSpec fine = fit_grid(grid, g.degree());
  const std::vector<double> gv = eval_half_grid(g, fine);
  const std::size_t p = fine.half();
  double outer = 0.0, inner_lo = 0.0, inner_hi = 0.0;
  bool seen_inner = false;
  for (std::size_t j = 0; j <= p; ++j) {
    const double lam = kPi * static_cast<double>(j) / static_cast<double>(p);
    if (lam >= c) outer = std::max(outer, std::abs(gv[j]));
    if (lam <= c) {
      inner_lo = seen_inner ? std::min(inner_lo, gv[j]) : gv[j];
      inner_hi = seen_inner ? std::max(inner_hi, gv[j]) : gv[j];
      seen_inner = true;
    }
  }
  // Equalities are allowed here, so the margin is zero.
  return {make_check("outer_abs", outer, c, -1e-12), make_check("inner_floor", -inner_lo, c, -1e-12),
          make_check("inner_ceiling", inner_hi, budget, -1e-12)};
}

CosineSeries harmonic_gc(double budget, double delta_room, long long m_cap, long long min_terms) {
  if (!(budget > 0.0) || !(delta_room > 0.0))
    fail(ErrorKind::PreconditionViolation, "harmonic scheme needs positive budget and delta room");
  const double need = budget * budget / (delta_room * (1.0 - kHarmonicMargin));
  const double h_cap = std::log(static_cast<double>(m_cap)) + kEulerGamma + 0.5 / static_cast<double>(m_cap);
  if (need > h_cap || min_terms > m_cap)
    fail(ErrorKind::SchemeInfeasible, "harmonic scheme needs M ~ exp(" + fmt(std::max(need - kEulerGamma, 0.0)) +
                                          ") or min terms " + std::to_string(min_terms) + " > cap " +
                                          std::to_string(m_cap));
  long long m = 0;
  double h = 0.0;
  while (h < need || m < min_terms) {
    ++m;
    h += 1.0 / static_cast<double>(m);
  }
  if (m > m_cap) fail(ErrorKind::SchemeInfeasible, "harmonic scheme needs " + std::to_string(m) + " terms");
  std::vector<double> a(static_cast<std::size_t>(m));
  for (long long k = 1; k <= m; ++k) a[k - 1] = budget / (static_cast<double>(k) * h);
  return CosineSeries(0.0, std::move(a));
}

CosineSeries fejer_gc(double budget, long long m) {
  if (m < 2) fail(ErrorKind::PreconditionViolation, "fejer scheme needs M >= 2");
  std::vector<double> a(static_cast<std::size_t>(m - 1));
  const double dm = static_cast<double>(m);
  for (long long k = 1; k < m; ++k) a[k - 1] = 2.0 * budget * (1.0 - static_cast<double>(k) / dm) / (dm - 1.0);
  return CosineSeries(0.0, std::move(a));
}

std::vector<CheckRecord> verify_perturbation(const PerturbRequest& req, const CosineSeries& h) {
  return Baseline(req).verify(h);
}

PerturbResult construct_h(const PerturbRequest& req, const CoefficientScheme& scheme) {
  validate(req);
  const double gap = req.theta - req.f.at_zero();
  if (std::abs(gap) <= kIdentityTol) {
    PerturbResult res;
    res.h = req.f;
    res.scheme = scheme;
    res.branch = Branch::Identity;
    res.checks = verify_perturbation(req, res.h);
    return res;
  }
  if (gap > 0.0) return raise(req, scheme);

  // theta < f(0): solve the mirrored problem and flip the answer back.
  PerturbResult res = raise(negated(req), scheme);
  res.h = -res.h;
  res.branch = Branch::Negated;
  res.checks = verify_perturbation(req, res.h);
  return res;
}

}  // namespace wobble
