#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyfisher/stable.hpp"

using namespace levyfisher;

namespace {

const double kPi = std::numbers::pi;

double cauchy(double w) { return 2.0 / (kPi * (1.0 + 4.0 * w * w)); }

double total_mass(double beta) {
  const auto e = engine_for(beta);
  const std::vector<Feature> f{{0.0, 1.0}, {0.0, e->tail_crossover()}};
  const auto segs = half_line_layout(f, 0.0, true);
  return 2.0 * integrate_scalar([&](double w) { return e->density(w); }, segs, 1e-12, 4000);
}

}  // namespace

TEST_CASE("characteristic function") {
  CHECK(char_fn(StableIndex(2.0), 1.0, 1.0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(char_fn(StableIndex(1.0), 0.0, 3.0).real() == 1.0);
  CHECK(char_fn(StableIndex(0.5), 4.0, 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(char_fn(StableIndex(1.3), 2.0, 1.0).imag() == 0.0);
}

TEST_CASE("index validation") {
  CHECK_THROWS_AS(StableIndex(0.0), ConfigError);
  CHECK_THROWS_AS(StableIndex(2.1), ConfigError);
  CHECK_NOTHROW(StableIndex(2.0));
}

TEST_CASE("density at reference points") {
  CHECK(engine_for(2.0)->density(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));
  CHECK(engine_for(1.0)->density(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-8));
  for (double w : {0.1, 0.7, 3.0, 40.0, 1e4}) CHECK(engine_for(1.0)->density(w) == doctest::Approx(cauchy(w)).epsilon(1e-8));
  const double tail = c_beta(1.5) / std::pow(50.0, 2.5);
  const double ratio = engine_for(1.5)->density(50.0) / tail;
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("derivatives at reference points") {
  const auto g = engine_for(2.0);
  CHECK(g->deriv(1.0, 1) == doctest::Approx(-0.24197072451914337).epsilon(1e-13));
  for (double b : {0.7, 1.0, 1.5, 2.0}) CHECK(engine_for(b)->deriv(0.0, 1) == 0.0);
  // Cauchy with scale 1/2: h'(w) = -16 w / (pi (1 + 4 w^2)^2).
  CHECK(engine_for(1.0)->deriv(2.0, 1) == doctest::Approx(-32.0 / (kPi * 289.0)).epsilon(1e-8));
  CHECK(engine_for(1.0)->deriv(2.0, 2) ==
        doctest::Approx(-16.0 / kPi * (1.0 - 12.0 * 4.0) / std::pow(17.0, 3)).epsilon(1e-7));
}

TEST_CASE("index derivative") {
  const double eps = 1e-4;
  for (double w : {0.0, 0.8, 3.0}) {
    const double fd = (engine_for(1.5 + eps)->density(w) - engine_for(1.5 - eps)->density(w)) / (2.0 * eps);
    CHECK(engine_for(1.5)->dbeta(w) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(std::isfinite(engine_for(1.0)->dbeta(0.0)));
  // Far tail: derivative of c_beta w^(-1-beta) in beta.
  const double b = 1.2, w = 100.0, h = 1e-6;
  const double dc = (c_beta(b + h) - c_beta(b - h)) / (2.0 * h);
  const double tail = (dc - c_beta(b) * std::log(w)) / std::pow(w, 1.0 + b);
  CHECK(engine_for(b)->dbeta(w) == doctest::Approx(tail).epsilon(0.05));
  CHECK(engine_for(2.0)->dbeta_one_sided());
}

TEST_CASE("breve and tilde") {
  const auto g = engine_for(2.0);
  const double h0 = 1.0 / std::sqrt(2.0 * kPi);
  CHECK(g->breve(0.0) == doctest::Approx(h0).epsilon(1e-14));
  CHECK(std::abs(g->breve(1.0)) < 1e-15);
  CHECK(g->tilde(0.0) == doctest::Approx(h0).epsilon(1e-14));
  for (double w : {0.5, 1.3, 2.7})
    CHECK(g->tilde(w) == doctest::Approx((1.0 - w * w) * (1.0 - w * w) * g->density(w)).epsilon(1e-12));
  const auto c = engine_for(1.0);
  const std::vector<Feature> f{{0.0, 1.0}, {0.0, c->tail_crossover()}};
  const double mass = integrate_scalar([&](double w) { return c->breve(w); }, half_line_layout(f, 0.0, true), 1e-12,
                                       4000, 1e-14);
  CHECK(std::abs(mass) < 1e-9);
  CHECK(c->tilde(10.0) > 0.0);
  CHECK(c->tilde(10.0) <= 1.0 / 100.0);
}

TEST_CASE("tail constant") {
  CHECK(c_beta(1.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
  CHECK(c_beta(2.0) == 0.0);
  CHECK(c_beta(0.5) == doctest::Approx(0.25 / (4.0 * std::tgamma(1.5) * std::cos(kPi / 4.0))).epsilon(1e-14));
  CHECK(c_beta(1.0 + 1e-7) == doctest::Approx(c_beta(1.0)).epsilon(1e-6));
  for (double b : {0.4, 0.9, 1.3, 1.8}) CHECK(c_beta(b) == doctest::Approx(c_beta_series_form(b)).epsilon(1e-13));
}

TEST_CASE("normalization") {
  for (double b : {0.5, 1.0, 1.5, 1.9, 2.0}) {
    INFO("beta " << b);
    CHECK(total_mass(b) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("symmetry, positivity and tail law") {
  for (double b : {0.6, 1.1, 1.5, 1.95}) {
    const auto e = engine_for(b);
    for (double w : {0.0, 0.3, 2.0, 17.0, 1e3, 1e8}) {
      CHECK(e->density(w) == e->density(-w));
      CHECK(e->density(w) > 0.0);
    }
    for (double k : {10.0, 30.0, 1000.0}) {
      const double w = k * e->tail_crossover();
      const double r = std::pow(w, 1.0 + b) * e->density(w) / c_beta(b);
      INFO("beta " << b << " w " << w);
      CHECK(r >= 0.98);
      CHECK(r <= 1.02);
    }
  }
}

TEST_CASE("derivative consistency with finite differences") {
  const double h = 1e-4;
  for (double b : {0.8, 1.5, 1.9}) {
    const auto e = engine_for(b);
    for (double w : {0.2, 1.0, 4.0, 25.0}) {
      INFO("beta " << b << " w " << w);
      const double d1 = (e->density(w + h) - e->density(w - h)) / (2.0 * h);
      CHECK(e->deriv(w, 1) == doctest::Approx(d1).epsilon(1e-6));
      const double d2 = (e->deriv(w + h, 1) - e->deriv(w - h, 1)) / (2.0 * h);
      CHECK(e->deriv(w, 2) == doctest::Approx(d2).epsilon(1e-6));
    }
  }
}

TEST_CASE("gaussian branch is closed form") {
  const auto g = engine_for(2.0);
  for (double w : {0.0, 0.4, 1.7, 5.0}) {
    const double h = std::exp(-0.5 * w * w) / std::sqrt(2.0 * kPi);
    CHECK(g->density(w) == doctest::Approx(h).epsilon(1e-12));
    CHECK(g->deriv(w, 1) == doctest::Approx(-w * h).epsilon(1e-12));
    CHECK(g->deriv(w, 2) == doctest::Approx((w * w - 1.0) * h).epsilon(1e-12));
    CHECK(g->breve(w) == doctest::Approx((1.0 - w * w) * h).epsilon(1e-12));
  }
  CHECK(g->tail_crossover() > 0.0);
}

TEST_CASE("tail branch meets inversion near the crossover") {
  for (double b : {0.9, 1.5}) {
    const auto e = engine_for(b);
    for (double k : {1.0, 1.5, 2.5}) {
      const double w = k * e->tail_crossover();
      const auto inv = e->invert(w);
      const auto ser = e->series(w);
      CHECK(ser[0] == doctest::Approx(inv[0]).epsilon(1e-8));
    }
  }
}
