#include "ckpt/numeric.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ckpt::numeric;

TEST_CASE("golden section finds the vertex of a parabola") {
  const double x = golden_section_minimize([](double t) { return (t - 3.25) * (t - 3.25) + 1.0; }, -10.0, 10.0, 1e-8);
  CHECK(x == doctest::Approx(3.25).epsilon(1e-7));
}

TEST_CASE("bracketed root") {
  auto f = [](double t) { return t * t - 2.0; };
  auto df = [](double t) { return 2.0 * t; };
  CHECK(bracketed_root(f, df, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  auto g = [](double t) { return t * t - 4.0; };
  CHECK(bracketed_root(g, df, 2.0, 3.0) == 2.0);
  CHECK_THROWS(bracketed_root(f, df, 2.0, 3.0));
}

TEST_CASE("real roots of cubics") {
  SUBCASE("three distinct roots") {
    const auto roots = cubic_real_roots(1.0, -6.0, 11.0, -6.0);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(1.0));
    CHECK(roots[1] == doctest::Approx(2.0));
    CHECK(roots[2] == doctest::Approx(3.0));
  }
  SUBCASE("one real root") {
    const auto roots = cubic_real_roots(1.0, 0.0, 1.0, 1.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(-0.6823278038280193));
  }
  SUBCASE("double root reported once") {
    const auto roots = cubic_real_roots(1.0, -4.0, 5.0, -2.0);  // (x-1)^2 (x-2)
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(roots[1] == doctest::Approx(2.0));
  }
  SUBCASE("degree drops") {
    const auto quadratic = cubic_real_roots(0.0, 1.0, 0.0, -4.0);
    REQUIRE(quadratic.size() == 2);
    CHECK(quadratic[0] == doctest::Approx(-2.0));
    CHECK(quadratic[1] == doctest::Approx(2.0));
    const auto linear = cubic_real_roots(0.0, 0.0, 2.0, -1.0);
    REQUIRE(linear.size() == 1);
    CHECK(linear[0] == doctest::Approx(0.5));
  }
  SUBCASE("random cubics built from their roots") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> root(-100.0, 100.0);
    for (int i = 0; i < 500; ++i) {
      double a = root(rng), b = root(rng), c = root(rng);
      if (std::abs(a - b) < 1.0 || std::abs(b - c) < 1.0 || std::abs(a - c) < 1.0) continue;
      const auto roots = cubic_real_roots(1.0, -(a + b + c), a * b + b * c + a * c, -a * b * c);
      REQUIRE(roots.size() == 3);
      std::vector<double> expected{a, b, c};
      std::sort(expected.begin(), expected.end());
      for (int k = 0; k < 3; ++k) CHECK(roots[k] == doctest::Approx(expected[k]).epsilon(1e-9).scale(100.0));
    }
  }
}

TEST_CASE("Lambert W0") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-6));
  for (double z : {-0.3, -0.1, 0.5, 3.0, 100.0, 1e6}) {
    const double w = lambert_w0(z);
    CHECK(w * std::exp(w) == doctest::Approx(z).epsilon(1e-13));
  }
  CHECK_THROWS(lambert_w0(-1.0));
}
