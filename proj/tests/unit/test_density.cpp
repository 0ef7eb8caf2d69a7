#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyfisher/density.hpp"

using namespace levyfisher;

namespace {

const double kPi = std::numbers::pi;

std::vector<PerturbationSpec> catalog() {
  return {NoPerturbation{}, UnitDrift{}, StandardPoisson{}, CompoundPoisson{1.0, JumpDensity::gaussian(1.0)},
          CompoundPoisson{2.0, JumpDensity::laplace(0.5)}, SymmetricStable{0.75}};
}

double total_mass(const DensityModel& m) {
  const auto segs = real_line_layout(m.features());
  return integrate_scalar([&](double x) { return m.density(x); }, segs, 1e-10, 4000);
}

}  // namespace

TEST_CASE("reference values") {
  CHECK(eval_density({1.0, 2.0, 0.0, 1.0}, NoPerturbation{}, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(eval_density({2.0, 1.0, 3.7, 4.0}, NoPerturbation{}, 0.0) == doctest::Approx(2.0 / kPi / 8.0).epsilon(1e-9));
  CHECK(eval_density({1.0, 2.0, 1.0, 0.5}, UnitDrift{}, 0.5) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("bundle reference values") {
  const ModelParams q{1.3, 1.5, 2.0, 0.3};
  const auto b = eval_bundle(q, NoPerturbation{}, 0.8);
  CHECK(b.dp_dtheta == 0.0);
  CHECK(b.dp_dbeta.has_value());
  CHECK(b.v.has_value());
  const auto b0 = eval_bundle(q, NoPerturbation{}, 0.0);
  const double s = q.spread();
  CHECK(b0.dp_dsigma == doctest::Approx(-engine_for(1.5)->density(0.0) / (q.sigma * s)).epsilon(1e-9));
  const auto g = eval_bundle({1.0, 2.0, 1.0, 0.5}, StandardPoisson{}, 0.3);
  CHECK_FALSE(g.dp_dbeta.has_value());
  CHECK_FALSE(g.v.has_value());
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(eval_density({-1.0, 2.0, 0.0, 1.0}, NoPerturbation{}, 0.0), ConfigError);
  CHECK_THROWS_AS(eval_density({1.0, 2.0, 0.0, 0.0}, NoPerturbation{}, 0.0), ConfigError);
  CHECK_THROWS_AS(eval_density({1.0, 1.0, 0.0, 1.0}, SymmetricStable{1.5}, 0.0), ConfigError);
}

TEST_CASE("location-scale reduction") {
  for (double b : {0.8, 1.5, 2.0}) {
    for (double d : {0.01, 1.0, 7.0}) {
      const ModelParams q{1.7, b, 0.4, d};
      const DensityModel m(q, NoPerturbation{});
      const double s = q.spread();
      for (double x : {0.0, 0.3, -2.0, 15.0}) {
        INFO("beta " << b << " delta " << d << " x " << x);
        CHECK(m.density(x) * s == doctest::Approx(engine_for(b)->density(x / s)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("normalization") {
  for (double b : {1.5, 2.0}) {
    for (double d : {0.01, 0.1, 1.0}) {
      for (const auto& spec : catalog()) {
        // The Laplace mixture costs tens of milliseconds per point at large delta.
        if (spec.index() == 3 && std::get<CompoundPoisson>(spec).lambda == 2.0 && d > 0.1) continue;
        INFO(spec_name(spec) << " beta " << b << " delta " << d);
        const DensityModel m({1.0, b, 0.8, d}, spec);
        CHECK(std::abs(total_mass(m) - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("symmetry") {
  for (const PerturbationSpec& spec : {PerturbationSpec{NoPerturbation{}}, PerturbationSpec{SymmetricStable{0.6}},
                                       PerturbationSpec{CompoundPoisson{1.0, JumpDensity::laplace(1.0)}}}) {
    const DensityModel m({1.0, 1.4, 1.2, 0.2}, spec);
    for (double x : {0.1, 1.0, 5.0}) CHECK(m.density(x) == doctest::Approx(m.density(-x)).epsilon(1e-12));
  }
}

TEST_CASE("scores agree with finite differences") {
  const double h = 1e-4;
  for (double b : {1.5, 2.0}) {
    for (const auto& spec : catalog()) {
      const ModelParams q{1.3, b, 0.7, 0.1};
      const DensityModel m(q, spec);
      const double s = q.spread();
      const double peak = std::max(m.density(0.0), m.density(q.theta * q.delta));
      auto bump = [&](ModelParams p, int which, double step) {
        if (which == 0) p.sigma += step;
        if (which == 1) p.beta += step;
        if (which == 2) p.theta += step;
        return p;
      };
      for (int i = -10; i <= 10; ++i) {
        const double x = 0.6 * i * s + (std::holds_alternative<UnitDrift>(spec) ? q.theta * q.delta : 0.0);
        const auto bd = m.bundle(x);
        INFO(spec_name(spec) << " beta " << b << " x " << x);
        CHECK(bd.p > 0.0);
        const double hs = h * q.sigma;
        const double fs = (eval_density(bump(q, 0, hs), spec, x) - eval_density(bump(q, 0, -hs), spec, x)) / (2 * hs);
        CHECK(std::abs(bd.dp_dsigma - fs) <= 1e-5 * std::abs(fs) + 1e-7 * peak);
        const double ft = (eval_density(bump(q, 2, h), spec, x) - eval_density(bump(q, 2, -h), spec, x)) / (2 * h);
        CHECK(std::abs(bd.dp_dtheta - ft) <= 1e-5 * std::abs(ft) + 1e-7 * peak);
        if (b < 2.0) {
          REQUIRE(bd.dp_dbeta.has_value());
          const double fb = (eval_density(bump(q, 1, h), spec, x) - eval_density(bump(q, 1, -h), spec, x)) / (2 * h);
          CHECK(std::abs(*bd.dp_dbeta - fb) <= 1e-5 * std::abs(fb) + 1e-7 * peak);
        }
      }
    }
  }
}
