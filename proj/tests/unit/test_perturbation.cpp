#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "wobble/errors.hpp"
#include "wobble/perturbation.hpp"

using namespace wobble;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::NumericalFailure;
}

PerturbRequest flat_request(double theta, double delta, double eps) {
  PerturbRequest req;
  req.f = CosineSeries{};
  req.upsilon1 = -2.0;
  req.upsilon2 = std::log(2.0);
  req.theta = theta;
  req.delta = delta;
  req.eps = eps;
  req.fejer_cap = 8;
  return req;
}

// Independent re-check of the six conclusions straight from h.
void recheck(const PerturbRequest& req, const CosineSeries& h) {
  const oracle::PerturbMeasure pm = oracle::measure_perturbation(req.f, h, static_cast<int>(req.fejer_cap));
  CHECK(pm.lo > req.upsilon1);
  CHECK(pm.hi < req.upsilon2);
  CHECK(pm.psi < req.delta);
  CHECK(std::abs(pm.center - req.theta) < req.eps);
  CHECK(pm.l1 < req.eps);
  CHECK(pm.fejer < req.eps);
  CHECK(pm.fejer_neg < req.eps);
}

}  // namespace

TEST_CASE("scheme names round trip") {
  for (auto v : {SchemeVariant::LogHarmonic, SchemeVariant::Harmonic, SchemeVariant::Fejer})
    CHECK(scheme_from_string(to_string(v)) == v);
  CHECK(kind_of([] { scheme_from_string("bogus"); }) == ErrorKind::Configuration);
}

TEST_CASE("select_c0") {
  PerturbRequest req = flat_request(0.3, 0.5, 0.05);
  CHECK(select_c0(req) == doctest::Approx(0.27).epsilon(1e-12));

  req.theta = 1e-9;
  const double c0 = select_c0(req);
  CHECK(c0 > 0.0);
  CHECK(c0 == doctest::Approx(0.9e-9).epsilon(1e-6));

  PerturbRequest bad = flat_request(0.3, 0.5, 0.05);
  bad.f = CosineSeries(0.0, {-3.0});  // f(0) = -3 leaves the band (-2, log 2)
  CHECK(kind_of([&] { select_c0(bad); }) == ErrorKind::InfeasibleRequest);

  PerturbRequest below = flat_request(-0.3, 0.5, 0.05);
  CHECK(kind_of([&] { select_c0(below); }) == ErrorKind::PreconditionViolation);

  SUBCASE("local oscillation limits c0") {
    PerturbRequest r = flat_request(0.3, 5.0, 0.05);
    r.f = CosineSeries(0.0, {0.1});  // f(0) = 0.1, budget 0.2
    r.theta = 0.3;
    const double c = select_c0(r);
    CHECK(c > 0.0);
    CHECK(c < 0.2);
    // Every grid point within c0 of the origin keeps f(0) - f small enough.
    for (double lam = 0.0; lam <= c; lam += c / 50)
      CHECK(std::abs(oracle::series_at(r.f, lam) - 0.1) < r.upsilon2 - r.theta);
  }
}

TEST_CASE("coeff_a") {
  CHECK(coeff_a(0.1, 1) == doctest::Approx(0.01 / oracle::kPi).epsilon(1e-15));
  CHECK(coeff_a(0.1, 1) == doctest::Approx(0.00318310).epsilon(1e-6));
  CHECK(coeff_a(0.1, 2) == doctest::Approx(0.005 / oracle::kPi).epsilon(1e-15));
  CHECK(coeff_a(0.1, 5) == doctest::Approx(0.01 / oracle::kPi / (5 * std::log(5.0))).epsilon(1e-15));
  for (long long k = 1; k < 1000000; ++k)
    if (!(coeff_a(0.5, k) > coeff_a(0.5, k + 1))) {
      FAIL("not strictly decreasing at k = " << k);
      break;
    }
}

TEST_CASE("cap_M") {
  const double c = 0.5;
  const double a1 = coeff_a(c, 1), a2 = coeff_a(c, 2);
  const CapResult one = cap_M(c, a1 + 0.5 * a2, 1000);
  CHECK_FALSE(one.overflow);
  CHECK(one.m == 1);

  // Direct accumulation oracle.
  const CapResult small = cap_M(0.5, 0.1, 1000);
  REQUIRE_FALSE(small.overflow);
  double s = 0.0;
  long long m = 0;
  while (s + coeff_a(0.5, m + 1) <= 0.1) s += coeff_a(0.5, ++m);
  CHECK(small.m == m);
  // a_1 + a_2 = 0.119 already exceeds 0.1.
  CHECK(small.m == 1);
  const CapResult longer = cap_M(0.5, 0.3, 100000);
  REQUIRE_FALSE(longer.overflow);
  s = 0.0;
  m = 0;
  while (s + coeff_a(0.5, m + 1) <= 0.3) s += coeff_a(0.5, ++m);
  CHECK(longer.m == m);
  CHECK(longer.m > 2);

  const CapResult big = cap_M(0.1, 0.5, 10000000);
  CHECK(big.overflow);
  // log log M ~ pi budget / c^2 minus an O(1) constant.
  CHECK(big.log_log_estimate > 100.0);
  CHECK(big.log_log_estimate < oracle::kPi * 0.5 / 0.01 + 1.0);

  CHECK(kind_of([&] { cap_M(c, a1, 10); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("build_gc") {
  const CosineSeries g1 = build_gc(0.3, 1);
  CHECK(g1.degree() == 1);
  CHECK(g1.coeffs[0] == coeff_a(0.3, 1));
  CHECK(g1.a0 == 0.0);

  const CapResult cap = cap_M(0.5, 0.1, 1000);
  const CosineSeries g = build_gc(0.5, cap.m);
  double total = 0.0;
  for (long long k = 1; k <= cap.m; ++k) total += coeff_a(0.5, k);
  CHECK(g.at_zero() == doctest::Approx(total).epsilon(1e-15));
  CHECK(g.at_zero() <= 0.1);
  for (const auto& chk : gc_shape_checks(0.5, 0.1, g, GridSpec(4096))) CHECK_MESSAGE(chk.pass, chk.name);
  for (int j = 0; j <= 1000; ++j) {
    const double lam = 0.5 + (oracle::kPi - 0.5) * j / 1000.0;
    CHECK(std::abs(oracle::series_at(g, lam)) <= 0.5);
  }
  CHECK(kind_of([] { build_gc(0.5, 0); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("harmonic_gc") {
  const CosineSeries g = harmonic_gc(0.5, 0.1, 1000);
  // H_8 = 2.7179 falls short of 0.25 / (0.1 * 0.9) = 2.778, so the first M that fits is 9.
  CHECK(oracle::harmonic(8) < 0.25 / 0.09);
  CHECK(oracle::harmonic(9) >= 0.25 / 0.09);
  CHECK(g.degree() == 9);
  CHECK(g.at_zero() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(psi(g) == doctest::Approx(0.25 / oracle::harmonic(9)).epsilon(1e-13));
  CHECK(psi(g) <= 0.1);
  for (double b : {0.01, 0.3, 2.0}) CHECK(harmonic_gc(b, 1.0, 1000, 5).at_zero() == doctest::Approx(b).epsilon(1e-14));
  CHECK(harmonic_gc(0.5, 0.1, 1000, 20).degree() == 20);
  CHECK(kind_of([] { harmonic_gc(1.0, 0.001, 1LL << 20); }) == ErrorKind::SchemeInfeasible);
}

TEST_CASE("fejer_gc") {
  for (long long m : {2LL, 3LL, 17LL, 200LL}) {
    const CosineSeries g = fejer_gc(0.4, m);
    CHECK(g.at_zero() == doctest::Approx(0.4).epsilon(1e-14));
    // budget (F_M - 1) / (M - 1) is bounded below by -budget / (M - 1).
    for (int j = 0; j <= 500; ++j) CHECK(oracle::series_at(g, oracle::kPi * j / 500) >= -0.4 / (m - 1) - 1e-12);
  }
  CHECK(kind_of([] { fejer_gc(0.4, 1); }) == ErrorKind::PreconditionViolation);
}

TEST_CASE("construct_h: identity branch") {
  PerturbRequest req = flat_request(0.0, 0.5, 0.05);
  req.f = CosineSeries(0.0, {0.1, 0.05});
  req.f.a0 = -0.15;  // f(0) = 0
  req.theta = req.f.at_zero();
  const PerturbResult r = construct_h(req, {});
  CHECK(r.branch == Branch::Identity);
  CHECK(r.h == req.f);
  CHECK(r.all_pass());
  CHECK(r.checks.size() == 6);
}

TEST_CASE("construct_h: raise branch under the fejer scheme") {
  const PerturbRequest req = flat_request(0.3, 0.5, 0.05);
  const PerturbResult r = construct_h(req, {SchemeVariant::Fejer});
  CHECK(r.branch == Branch::Raise);
  REQUIRE(r.all_pass());
  const char* names[] = {"band", "psi", "center", "l1", "fejer_exp", "fejer_exp_neg"};
  REQUIRE(r.checks.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(r.checks[i].name == names[i]);
    CHECK(r.checks[i].slack > 0.0);
  }
  recheck(req, r.h);
  const auto again = verify_perturbation(req, r.h);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].value == doctest::Approx(r.checks[i].value));
}

TEST_CASE("construct_h: harmonic scheme at small eps is infeasible") {
  // The harmonic series carries L1 mass ~ budget / H_M, so eps = 0.05 needs far more terms than fit.
  const PerturbRequest req = flat_request(0.3, 0.5, 0.05);
  CHECK(kind_of([&] { construct_h(req, {SchemeVariant::Harmonic}); }) == ErrorKind::SchemeInfeasible);
}

TEST_CASE("construct_h: harmonic scheme with a loose tolerance") {
  PerturbRequest req = flat_request(0.3, 0.5, 0.5);
  req.fejer_cap = 4;
  const PerturbResult r = construct_h(req, {SchemeVariant::Harmonic});
  REQUIRE(r.all_pass());
  recheck(req, r.h);
}

TEST_CASE("construct_h: log-harmonic scheme overflows at useful budgets") {
  const PerturbRequest req = flat_request(0.3, 0.5, 0.05);
  CHECK(kind_of([&] { construct_h(req, {SchemeVariant::LogHarmonic, 1LL << 20}); }) == ErrorKind::SchemeInfeasible);
}

TEST_CASE("construct_h: negation branch round trip") {
  const PerturbRequest down = flat_request(-0.4, 0.5, 0.05);
  PerturbRequest up = down;
  up.theta = 0.4;
  up.upsilon1 = -down.upsilon2;
  up.upsilon2 = -down.upsilon1;
  const PerturbResult neg = construct_h(down, {});
  const PerturbResult pos = construct_h(up, {});
  CHECK(neg.branch == Branch::Negated);
  REQUIRE(neg.all_pass());
  CHECK(neg.h.at_zero() > -0.4 - 0.05);
  CHECK(neg.h.at_zero() < -0.4 + 0.05);
  CHECK(neg.h == -pos.h);
  CHECK(all_pass(verify_perturbation(up, -neg.h)));
  recheck(down, neg.h);
}

TEST_CASE("construct_h: random requests re-verify") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 0; i < 6; ++i) {
    PerturbRequest req = flat_request(0.0, 1.0, 0.1);
    req.upsilon1 = -3.0;
    req.f = CosineSeries(0.0, {0.1 * u(rng), 0.05 * u(rng)});
    req.theta = req.f.at_zero() + u(rng);
    req.fejer_cap = 6;
    const PerturbResult r = construct_h(req, {});
    REQUIRE(r.all_pass());
    CHECK(all_pass(verify_perturbation(req, r.h)));
    recheck(req, r.h);
  }
}

TEST_CASE("construct_h: preconditions") {
  PerturbRequest req = flat_request(0.3, 0.5, 0.05);
  req.eps = 0.0;
  CHECK(kind_of([&] { construct_h(req, {}); }) == ErrorKind::PreconditionViolation);
  req = flat_request(0.3, 0.5, 0.05);
  req.f = CosineSeries(0.0, {1.0});  // psi = 1 > delta
  CHECK(kind_of([&] { construct_h(req, {}); }) == ErrorKind::PreconditionViolation);
}
