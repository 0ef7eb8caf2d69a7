#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyfisher/fisher.hpp"
#include "levyfisher/montecarlo.hpp"

using namespace levyfisher;

namespace {

SimConfig config(std::uint64_t seed, std::int64_t n, ModelParams p, PerturbationSpec s) {
  SimConfig c;
  c.seed = seed;
  c.n = n;
  c.params = p;
  c.spec = s;
  return c;
}

}  // namespace

TEST_CASE("gaussian increments have variance sigma^2 delta") {
  const auto x = sample_increments(config(3, 200000, {1.5, 2.0, 0.0, 0.3}, NoPerturbation{}));
  double m2 = 0.0;
  for (double v : x) m2 += v * v;
  m2 /= static_cast<double>(x.size());
  // Relative standard error of a Gaussian second moment is sqrt(2/n).
  CHECK(std::abs(m2 / (1.5 * 1.5 * 0.3) - 1.0) < 4.0 * std::sqrt(2.0 / 200000.0));
}

TEST_CASE("drift shifts the mean") {
  const auto x = sample_increments(config(5, 100000, {1.0, 2.0, 2.0, 0.25}, UnitDrift{}));
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  CHECK(std::abs(m - 0.5) < 4.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("cauchy tails match the density") {
  const double d = 0.4;
  const auto x = sample_increments(config(9, 100000, {1.0, 1.0, 0.0, d}, NoPerturbation{}));
  for (double t : {0.1, 1.0, 10.0}) {
    double count = 0.0;
    for (double v : x) count += std::abs(v) > t;
    const double p = 1.0 - 2.0 / std::numbers::pi * std::atan(t / (0.5 * d));
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / 100000.0);
    INFO("t " << t);
    CHECK(std::abs(count / 100000.0 - p) < band);
  }
}

TEST_CASE("streams are reproducible and distinct") {
  const auto c = config(42, 1000, {1.0, 1.5, 1.0, 0.1}, StandardPoisson{});
  CHECK(sample_increments(c) == sample_increments(c));
  CHECK(sample_increments(c, 1) != sample_increments(c, 2));
  auto g1 = make_stream(42, 7), g2 = make_stream(42, 7);
  CHECK(g1() == g2());
  auto c2 = c;
  c2.n = 0;
  CHECK_THROWS_AS(c2.validate(), ConfigError);
}

TEST_CASE("scores have mean zero and match the information") {
  const auto c = config(11, 20000, {1.0, 2.0, 1.0, 0.1}, StandardPoisson{});
  const auto sample = sample_increments(c);
  const auto r = empirical_information(c, sample, {Entry::SS, Entry::TT});
  FisherOptions fo;
  fo.skip_beta = true;
  const auto m = information_matrix(c.params, c.spec, {}, fo);
  CHECK(std::abs(r[0].score_mean) < 4.0 * r[0].score_mean_se);
  CHECK(std::abs(r[0].value - m.ss()) < 4.0 * r[0].standard_error);
  CHECK(std::abs(r[1].value - m.tt()) < 4.0 * r[1].standard_error);
  CHECK(r[0].n_used == 20000);
}

TEST_CASE("maximum likelihood for the scale") {
  const auto c = config(17, 5000, {1.3, 1.5, 0.0, 0.1}, NoPerturbation{});
  const auto rep = mle(c, {FreeParam::Sigma});
  REQUIRE(rep.size() == 1);
  CHECK(std::abs(rep[0].estimate - 1.3) < 4.0 * std::sqrt(rep[0].predicted_variance));
  CHECK(rep[0].standard_error == doctest::Approx(std::sqrt(rep[0].predicted_variance)).epsilon(0.1));
}

TEST_CASE("joint estimation of scale and drift") {
  const auto c = config(19, 5000, {1.0, 2.0, 1.0, 0.5}, UnitDrift{});
  const auto rep = mle(c, {FreeParam::Sigma, FreeParam::Theta});
  REQUIRE(rep.size() == 2);
  CHECK(std::abs(rep[0].estimate - 1.0) < 4.0 * std::sqrt(rep[0].predicted_variance));
  CHECK(std::abs(rep[1].estimate - 1.0) < 4.0 * std::sqrt(rep[1].predicted_variance));
}

TEST_CASE("replications spread like the inverse information") {
  const auto c = config(23, 2000, {1.0, 2.0, 0.0, 0.1}, NoPerturbation{});
  const auto r = mle_replications(c, {FreeParam::Sigma}, 100);
  CHECK(r.estimates.size() == 100);
  // With 100 replications the variance ratio has standard error about 0.14.
  CHECK(r.ratio > 0.6);
  CHECK(r.ratio < 1.5);
  const auto again = mle_replications(c, {FreeParam::Sigma}, 100);
  CHECK(again.estimates == r.estimates);
}
