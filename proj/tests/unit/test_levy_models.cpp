#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "levyfisher/levy_models.hpp"

using namespace levyfisher;

TEST_CASE("shorthand parsing") {
  CHECK(std::holds_alternative<NoPerturbation>(parse_spec("none")));
  CHECK(std::holds_alternative<UnitDrift>(parse_spec("drift")));
  CHECK(std::holds_alternative<StandardPoisson>(parse_spec("poisson")));
  CHECK(std::holds_alternative<CompoundPoisson>(parse_spec("cp")));
  const auto s = parse_spec("stable:0.75");
  REQUIRE(std::holds_alternative<SymmetricStable>(s));
  CHECK(std::get<SymmetricStable>(s).alpha == 0.75);
  CHECK_THROWS_AS(parse_spec("stable:abc"), ConfigError);
  CHECK_THROWS_AS(parse_spec("stable:2.5"), ConfigError);
  CHECK_THROWS_AS(parse_spec("gamma"), ConfigError);
}

TEST_CASE("json round trip") {
  const std::vector<PerturbationSpec> specs{NoPerturbation{}, UnitDrift{}, StandardPoisson{},
                                            CompoundPoisson{2.5, JumpDensity::gaussian(0.7)},
                                            CompoundPoisson{0.5, JumpDensity::laplace(1.5)}, SymmetricStable{1.2}};
  for (const auto& s : specs) {
    const auto j = spec_to_json(s);
    const auto back = spec_from_json(j);
    CHECK(back.index() == s.index());
    CHECK(spec_to_json(back) == j);
    CHECK(spec_to_json(parse_spec(j.dump())) == j);
  }
  const char* path = "levy_models_spec.json";
  {
    std::ofstream f(path);
    f << spec_to_json(CompoundPoisson{3.0, JumpDensity::laplace(0.5)}).dump();
  }
  const auto from_file = parse_spec(path);
  REQUIRE(std::holds_alternative<CompoundPoisson>(from_file));
  CHECK(std::get<CompoundPoisson>(from_file).lambda == 3.0);
  std::remove(path);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate_spec(CompoundPoisson{-1.0, JumpDensity::gaussian(1.0)}), ConfigError);
  CHECK_THROWS_AS(validate_spec(SymmetricStable{0.0}), ConfigError);
  CHECK_NOTHROW(validate_pairing(SymmetricStable{1.0}, 1.5));
  CHECK_THROWS_AS(validate_pairing(SymmetricStable{1.5}, 1.5), ConfigError);
  CHECK_NOTHROW(validate_pairing(StandardPoisson{}, 0.5));
}

TEST_CASE("moments") {
  CHECK(moments(NoPerturbation{}, 0.3).mean == 0.0);
  CHECK(moments(UnitDrift{}, 0.3).mean == 0.3);
  CHECK(*moments(UnitDrift{}, 0.3).variance == 0.0);
  CHECK(*moments(StandardPoisson{}, 0.3).variance == doctest::Approx(0.3));
  const auto cp = moments(CompoundPoisson{2.0, JumpDensity::laplace(0.5)}, 0.1);
  CHECK(cp.mean == doctest::Approx(0.0));
  CHECK(*cp.variance == doctest::Approx(2.0 * 0.1 * 2.0 * 0.25));
  CHECK_FALSE(moments(SymmetricStable{1.0}, 0.1).variance.has_value());
  CHECK_THROWS_AS(moments(UnitDrift{}, 0.0), ConfigError);
}

TEST_CASE("poisson weights") {
  for (double m : {1e-4, 0.1, 3.0, 40.0}) {
    const auto w = poisson_weights(m);
    double total = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      total += w[k];
      mean += k * w[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(mean == doctest::Approx(m).epsilon(1e-9));
    CHECK(w[0] == doctest::Approx(std::exp(-m)).epsilon(1e-14));
  }
}

TEST_CASE("integration against the increment law") {
  auto square = [](double y) { return y * y; };
  auto one = [](double) { return 1.0; };
  const double d = 0.2;
  CHECK(g_delta_integrate(UnitDrift{}, d, square) == doctest::Approx(d * d));
  CHECK(g_delta_integrate(StandardPoisson{}, d, square) == doctest::Approx(d + d * d).epsilon(1e-10));
  const CompoundPoisson cp{1.5, JumpDensity::gaussian(0.8)};
  CHECK(g_delta_integrate(cp, d, one) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g_delta_integrate(cp, d, square) == doctest::Approx(1.5 * d * 0.64).epsilon(1e-8));
  // The Cauchy increment has scale delta/2, so E 1/(1 + Y^2) = 1/(1 + delta/2).
  CHECK(g_delta_integrate(SymmetricStable{1.0}, d, [](double y) { return 1.0 / (1.0 + y * y); }) ==
        doctest::Approx(1.0 / (1.0 + 0.5 * d)).epsilon(1e-8));
  CHECK(g_delta_integrate(SymmetricStable{0.6}, d, one) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("levy triples") {
  const auto p = levy_triple(StandardPoisson{});
  CHECK(p.levy_measure_tail(0.5) == 1.0);
  CHECK(p.levy_measure_tail(2.0) == 0.0);
  CHECK(levy_triple(UnitDrift{}).b == 1.0);
  const auto s = levy_triple(SymmetricStable{1.0});
  // Tail mass scales like x^-alpha.
  CHECK(s.levy_measure_tail(0.01) / s.levy_measure_tail(0.1) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(levy_triple(NoPerturbation{}).levy_measure_tail(0.1) == 0.0);
}

TEST_CASE("class membership") {
  CHECK(class_membership(SymmetricStable{0.5}, 1.5).member);
  CHECK_FALSE(class_membership(SymmetricStable{1.2}, 0.8).member);
  CHECK(class_membership(CompoundPoisson{}, 0.3).member);
  CHECK(class_membership(StandardPoisson{}, 1.0).member);
  CHECK(class_membership(UnitDrift{}, 0.1).member);
  const auto r = class_membership(SymmetricStable{0.5}, 1.5);
  for (std::size_t i = 1; i < r.phi_estimate.size(); ++i)
    CHECK(r.phi_estimate[i].second >= r.phi_estimate[i - 1].second);
  CHECK_THROWS_AS(class_membership(StandardPoisson{}, 1.0, {2.0}), ConfigError);
}
