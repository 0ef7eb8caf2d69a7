#include <doctest.h>

#include <cmath>

#include "levyfisher/info_constants.hpp"

using namespace levyfisher;

TEST_CASE("boundary values") {
  CHECK(std::abs(calI(2.0) - 2.0) < 1e-8);
  CHECK(std::abs(calJ(2.0) - 1.0) < 1e-8);
  CHECK_THROWS_AS(calK(2.0), UndefinedAtBoundary);
  CHECK_THROWS_AS(calM(2.0), UndefinedAtBoundary);
  const InfoConstants k = info_constants(2.0);
  CHECK_FALSE(k.calK.has_value());
  CHECK_FALSE(k.calM.has_value());
}

TEST_CASE("cauchy values") {
  // Cauchy scale g has scale and location information 1/(2 g^2); here g = 1/2
  // and the scale information is measured per unit of sigma.
  CHECK(calI(1.0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(calJ(1.0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("values are positive and settle under refinement") {
  QuadratureConfig fine;
  fine.rel_tol = 1e-11;
  for (double b : {0.5, 1.5, 1.9}) {
    INFO("beta " << b);
    const double i = calI(b), j = calJ(b);
    CHECK(i > 0.0);
    CHECK(j > 0.0);
    CHECK(std::isfinite(j));
    CHECK(calI(b, fine) == doctest::Approx(i).epsilon(1e-6));
  }
  const double k15 = calK(1.5);
  CHECK(k15 > 0.0);
  QuadratureConfig fine2;
  fine2.rel_tol = 1e-11;
  CHECK(calK(1.5, fine2) == doctest::Approx(k15).epsilon(1e-6));
  CHECK(calK(1.0) > 0.0);
  CHECK(std::isfinite(calK(1.0)));
}

TEST_CASE("continuity in the index") {
  const std::vector<double> grid{0.5, 1.0, 1.5, 1.9, 2.0};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    // Midpoint values lie within the range spanned by a linear guess plus slack.
    const double a = calI(grid[i]), b = calI(grid[i + 1]), m = calI(mid);
    CHECK(std::abs(m - 0.5 * (a + b)) < 0.25 * std::abs(b - a) + 0.05);
    // calJ grows quickly below one, so only the upper range is checked linearly.
    if (grid[i] < 1.0) continue;
    const double ja = calJ(grid[i]), jb = calJ(grid[i + 1]), jm = calJ(mid);
    CHECK(std::abs(jm - 0.5 * (ja + jb)) < 0.25 * std::abs(jb - ja) + 0.05);
  }
}

TEST_CASE("cross integral obeys Cauchy-Schwarz") {
  for (double b : {0.7, 1.0, 1.5, 1.8}) {
    INFO("beta " << b);
    const double m = calM(b);
    CHECK(m * m <= calI(b) * calK(b));
  }
}

TEST_CASE("warning near the gaussian end") {
  const InfoConstants k = info_constants(1.97);
  CHECK_FALSE(k.warnings.empty());
  CHECK(info_constants(1.5).warnings.empty());
}

TEST_CASE("multiplicative information of jump laws") {
  CHECK(calL(JumpDensity::gaussian(1.0)) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(calL(JumpDensity::gaussian(0.5)) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(calL(JumpDensity::gaussian(2.0)) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(calL(JumpDensity::laplace(1.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(calL(JumpDensity::laplace(0.5)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(calL(JumpDensity::laplace(2.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("convolution powers") {
  const auto g = JumpDensity::gaussian(1.0);
  CHECK(calL_n(g, 1) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(calL_n(g, 2) == doctest::Approx(2.0).epsilon(1e-8));
  // The grid route is a coarse independent check.
  CHECK(calL_n(g, 2, true) == doctest::Approx(2.0).epsilon(2e-3));
  const auto l = JumpDensity::laplace(1.0);
  const double L = calL(l);
  for (int n : {2, 3, 4}) {
    INFO("n " << n);
    CHECK(calL_n(l, n) <= n * L + 1e-6);
    CHECK(calL_n(l, n, true) == doctest::Approx(calL_n(l, n)).epsilon(2e-3));
  }
}
