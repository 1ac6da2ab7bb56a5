#include <cmath>

#include "doctest.h"
#include "rsmech/numerics.hpp"

using namespace rsmech;

TEST_CASE("bisect finds roots of increasing and decreasing maps") {
  Tolerances tol;
  tol.root_residual = 0.0;  // stop on bracket width only
  auto up = bisect([](double x) { return x * x; }, 0.0, 2.0, 2.0, true, tol);
  CHECK(up.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  auto down = bisect([](double x) { return std::exp(-x); }, 0.0, 5.0, 0.5, false, tol);
  CHECK(down.x == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("geometric bisection resolves a root near zero") {
  Tolerances tol;
  auto r = bisect([](double x) { return std::log(x); }, 1e-300, 1.0, std::log(1e-200), true, tol,
                  true);
  CHECK(std::abs(r.x / 1e-200 - 1) < 1e-10);
}

TEST_CASE("adaptive Simpson handles a kink given as a split") {
  const double split = 0.3;
  const double v = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0,
                             std::span<const double>(&split, 1), 1e-12, 50);
  CHECK(v == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, Tolerances{}) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("golden section locates interior extrema") {
  auto mx = golden_max([](double p) { return p * (1 - p); }, 0.0, 1.0);
  CHECK(mx.x == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(mx.value == doctest::Approx(0.25).epsilon(1e-12));
  auto mn = golden_min([](double x) { return (x - 0.2) * (x - 0.2); }, -1.0, 1.0);
  CHECK(mn.x == doctest::Approx(0.2).epsilon(1e-7));
}
