#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyfisher/asymptotics.hpp"
#include "levyfisher/info_constants.hpp"

using namespace levyfisher;

namespace {

TheoremPrediction entry_of(const std::vector<TheoremPrediction>& ps, Entry e) {
  for (const auto& p : ps)
    if (p.entry == e) return p;
  FAIL("entry missing");
  return {};
}

}  // namespace

TEST_CASE("names round trip") {
  for (auto id : {TheoremId::T2a, TheoremId::T5, TheoremId::T7_SS3, TheoremId::T10})
    CHECK(parse_theorem(theorem_name(id)) == id);
  for (auto e : {Entry::SS, Entry::BT, Entry::Mult}) CHECK(parse_entry(entry_name(e)) == e);
  CHECK_THROWS_AS(parse_theorem("T99"), ConfigError);
  CHECK_THROWS_AS(parse_entry("xy"), ConfigError);
}

TEST_CASE("rates") {
  const Rate r{0.5, 1.0};
  CHECK(r(1e-2) == doctest::Approx(0.1 * std::log(100.0)));
  CHECK(Rate{}(0.3) == 1.0);
}

TEST_CASE("predicted constants") {
  const auto ss1 = predict(TheoremId::T7_SS1, Entry::TT, {1.0, 2.0, 1.0, 0.01}, SymmetricStable{1.0});
  CHECK(ss1.limit == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));
  const auto t5 = predict(TheoremId::T5, Entry::TT, {1.0, 2.0, 1.0, 0.01}, StandardPoisson{});
  CHECK(t5.limit == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t5.rate.exponent == doctest::Approx(0.0).epsilon(1e-12));
  const auto t6 =
      predict(TheoremId::T6, Entry::TT, {1.0, 2.0, 1.0, 0.01}, CompoundPoisson{1.0, JumpDensity::gaussian(1.0)});
  CHECK(t6.limit == doctest::Approx(2.0).epsilon(1e-8));
  const auto t2 = entry_of(predict(TheoremId::T2a, {1.5, 1.5, 1.0, 0.01}, StandardPoisson{}), Entry::SS);
  CHECK(t2.limit == doctest::Approx(calI(1.5) / 2.25).epsilon(1e-10));
}

TEST_CASE("hypotheses are enforced") {
  const ModelParams p{1.0, 1.5, 1.0, 0.01};
  CHECK_THROWS_AS(predict(TheoremId::T5, p, UnitDrift{}), HypothesisViolation);
  CHECK_THROWS_AS(predict(TheoremId::T7_SS1, p, SymmetricStable{1.0}), HypothesisViolation);
  CHECK_THROWS_AS(predict(TheoremId::T7_SS4, p, SymmetricStable{1.0}), HypothesisViolation);
  CHECK_THROWS_AS(predict(TheoremId::T3bound, p, SymmetricStable{0.5}), MomentUndefined);
  CHECK_THROWS_AS(ss4_constant(1.0, 1.5, 1.0, 1.0), HypothesisViolation);
}

TEST_CASE("small-index stable constant") {
  for (double a : {0.3, 0.5, 0.7}) {
    INFO("alpha " << a);
    CHECK(ss4_constant(a, 1.5, 1.0, 1.0) == doctest::Approx(ss4_constant_exact(a, 1.5, 1.0, 1.0)).epsilon(1e-6));
  }
  CHECK(std::isfinite(ss4_constant(0.4, 1.5, 1.0, 1.0)));
  CHECK(ss4_constant(0.5, 1.2, 1.3, 0.7) == doctest::Approx(ss4_constant_exact(0.5, 1.2, 1.3, 0.7)).epsilon(1e-6));
}

TEST_CASE("two-stable constant scales in sigma and theta") {
  const double a = 1.0, b = 1.5;
  const auto base = ss2_constant(a, b, 1.0, 1.0);
  CHECK(base.value > 0.0);
  CHECK(std::abs(base.refined_change) < 0.01);
  const double sigma = 1.3, theta = 0.6;
  const auto moved = ss2_constant(a, b, sigma, theta);
  CHECK(moved.value ==
        doctest::Approx(base.value * std::pow(theta, 2 * a - 2) / std::pow(sigma, 2 * a)).epsilon(1e-6));
}

TEST_CASE("fractional term decays") {
  const double a = 1.0, b = 1.5;
  const double near = std::abs(stable_fractional_term(a, b, 10.0));
  const double far = std::abs(stable_fractional_term(a, b, 100.0));
  CHECK(near > 0.0);
  // |r(x)| <= K/(1 + |x|^(1+alpha)); a decade further out loses about two decades.
  CHECK(far * std::pow(100.0, 1 + a) <= 4.0 * near * std::pow(10.0, 1 + a));
}

TEST_CASE("rate fits") {
  const auto ds = default_deltas();
  REQUIRE(ds.size() == 13);
  CHECK(ds.front() == doctest::Approx(0.1));
  CHECK(ds.back() == doctest::Approx(1e-4));
  std::vector<double> pure, logged;
  for (double d : ds) {
    pure.push_back(3.0 * std::pow(d, 0.5));
    logged.push_back(0.7 * std::pow(d, 0.3) * std::log(1.0 / d));
  }
  const auto f = fit_rate(ds, pure);
  CHECK(f.exponent == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_FALSE(f.log_power_kept);
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-8));
  const auto g = fit_rate(ds, logged);
  CHECK(g.log_power_kept);
  CHECK(g.log_power == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g.exponent == doctest::Approx(0.3).epsilon(1e-6));
  CHECK_THROWS_AS(fit_rate({0.1, 0.01}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("sweep input checks") {
  const ModelParams p{1.0, 2.0, 0.0, 0.1};
  CHECK_THROWS_AS(sweep(p, NoPerturbation{}, Entry::SS, {0.1, 0.05, 0.01}), ConfigError);
  CHECK_THROWS_AS(sweep(p, NoPerturbation{}, Entry::SS, default_deltas(0.01, 0.1, 8)), ConfigError);
}

TEST_CASE("gaussian sweep is flat") {
  const auto r = sweep({1.0, 2.0, 0.0, 0.1}, NoPerturbation{}, Entry::SS, default_deltas());
  CHECK(std::abs(r.fitted_exponent) < 0.01);
  CHECK(r.extrapolated_limit == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("poisson location information grows") {
  const auto r = sweep({1.0, 1.5, 1.0, 0.1}, StandardPoisson{}, Entry::TT, default_deltas());
  MESSAGE("full-grid exponent " << r.fit.exponent << " log power " << r.fit.log_power);
  // Corrections are still visible above 1e-2, so the pure power is fitted below it.
  std::vector<double> ds, vs;
  for (std::size_t i = 0; i < r.deltas.size(); ++i)
    if (r.deltas[i] <= 1.0001e-2) {
      ds.push_back(r.deltas[i]);
      vs.push_back(r.values[i]);
    }
  const auto f = fit_rate(ds, vs, false);
  CHECK(std::abs(f.exponent + 1.0 / 3.0) < 0.05);
}

TEST_CASE("multiplicative information with drift") {
  const double v = multiplicative_information({1.0, 2.0, 1.0, 1e-3}, UnitDrift{});
  CHECK(v == doctest::Approx(2.0).epsilon(0.01));
  const double w = multiplicative_information({2.0, 2.0, 2.0, 1e-3}, UnitDrift{});
  CHECK(w == doctest::Approx(0.5).epsilon(0.01));
}
