#include <cmath>

#include "doctest.h"
#include "rsmech/errors.hpp"
#include "rsmech/ro_solver.hpp"
#include "rsmech/rs_solver.hpp"
#include "unit/oracles.hpp"

using namespace rsmech;

TEST_CASE("zero radius gives Pi0 and the monopoly posted price") {
  for (auto d : {Distribution::uniform(), Distribution::beta(2, 5)}) {
    const auto pi0 = d.max_posted_revenue();
    CHECK(pi_ro_star(d, 0.0) == doctest::Approx(pi0.revenue));
    const auto rep = solve_ro(d, 0.0);
    CHECK(rep.mechanism.degenerate());
    CHECK(rep.mechanism.allocation(pi0.price * 1.0001) == 1.0);
    CHECK(rep.mechanism.allocation(pi0.price * 0.9999) == 0.0);
    CHECK(tau_equiv(d, 0.0) == doctest::Approx(pi0.revenue));
  }
}

TEST_CASE("uniform radius closed form at 50 levels") {
  const auto d = Distribution::uniform();
  for (int i = 1; i <= 50; ++i) {
    const double pi = 0.25 * i / 51.0;
    const double s = std::sqrt(1 - 4 * pi);
    const double r = s / 2 - pi * std::log((1 + s) / (1 - s));
    CHECK(std::abs(radius_for_target(d, pi) - r) < 1e-8);
    CHECK(std::abs(pi_ro_star(d, r) - pi) < 1e-8);
  }
}

TEST_CASE("RO posted price for the uniform reference") {
  CHECK(ro_pp_price_uniform(0.0) == 0.5);
  CHECK(ro_pp_price_uniform(0.125) == doctest::Approx(0.25));
  CHECK(ro_pp_price_uniform(0.5) == doctest::Approx(0.0));
  for (int i = 0; i < 50; ++i) {
    const double r = 0.5 * i / 49.0;
    CHECK(std::abs(ro_pp_price_uniform(r) - (1 - std::sqrt(2 * r)) / 2) < 1e-15);
  }
  CHECK_THROWS_AS(ro_pp_price_uniform(0.6), Error);
  CHECK(solve_ro(Distribution::uniform(), 0.05).pp_price_uniform.has_value());
  CHECK_FALSE(solve_ro(Distribution::beta(2, 5), 0.05).pp_price_uniform.has_value());
}

TEST_CASE("round trips between radius and worst-case revenue") {
  for (auto d : {Distribution::uniform(), Distribution::beta(2, 5),
                 Distribution::empirical({{0.3, 0.5}, {0.7, 0.5}})}) {
    const double mu = d.mean();
    for (int i = 0; i < 20; ++i) {
      const double r = mu * (0.01 + 0.97 * i / 19.0);
      const auto rep = solve_ro(d, r);
      CHECK(std::abs(rep.cut.gap - r) < 1e-9);
      CHECK(rep.alpha * rep.cut.log_sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rep.mechanism.allocation(1.0) == 1.0);
    }
    const double pi0 = d.max_posted_revenue().revenue;
    for (int i = 1; i <= 10; ++i) {
      const double tau = pi0 * i / 10.0;
      CHECK(std::abs(pi_ro_star(d, radius_for_target(d, tau)) - tau) < 1e-9);
    }
  }
}

TEST_CASE("radius limits") {
  CHECK_THROWS_AS(pi_ro_star(Distribution::uniform(), 0.5), Error);
  try {
    solve_ro(Distribution::uniform(), 0.6);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RadiusTooLarge);
  }
  CHECK_THROWS_AS(radius_for_target(Distribution::uniform(), 0.3), InfeasibleTargetError);
}

TEST_CASE("worst-case revenue decreases with the radius") {
  const auto d = Distribution::beta(2, 5);
  double prev = 1;
  for (int i = 0; i < 30; ++i) {
    const double p = pi_ro_star(d, d.mean() * i / 31.0);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("RS at the equivalence target reproduces the RO mechanism") {
  for (auto d : {Distribution::uniform(), Distribution::beta(2, 5)}) {
    for (double r : {0.01, 0.05, 0.1}) {
      const double tau = tau_equiv(d, r);
      const auto ro = solve_ro(d, r);
      CHECK(tau >= ro.pi_ro_star);
      const auto rs = solve_rs(d, tau);
      double dq = 0, dm = 0;
      for (int i = 0; i < 1000; ++i) {
        const double v = i / 999.0;
        dq = std::max(dq, std::abs(rs.mechanism.allocation(v) - ro.mechanism.allocation(v)));
        dm = std::max(dm, std::abs(rs.mechanism.payment(v) - ro.mechanism.payment(v)));
      }
      CHECK(dq < 1e-7);
      CHECK(dm < 1e-7);
    }
  }
}

TEST_CASE("matched-target ordering between RS and RO") {
  const auto d = Distribution::uniform();
  for (int i = 1; i <= 20; ++i) {
    const double r = 0.45 * i / 21.0;
    const auto ro = solve_ro(d, r);
    const double tau = ro.pi_ro_star;
    const auto rs = solve_rs(d, tau);
    CHECK(rs.pi_star < ro.pi_ro_star);
    CHECK(rs.cut.intervals[0].u < ro.cut.intervals[0].u);
    for (int j = 0; j <= 100; ++j) {
      const double v = ro.cut.intervals[0].u * j / 100.0;
      CHECK(rs.mechanism.allocation(v) >= ro.mechanism.allocation(v) - 1e-12);
    }
    const double mean_ro = ro.mechanism.price_statistics().mean;
    const double mean_rs = rs.mechanism.price_statistics().mean;
    CHECK(mean_rs == doctest::Approx(2 * tau).epsilon(1e-8));
    CHECK(mean_ro > mean_rs);
    CHECK(mean_ro > ro_pp_price_uniform(r));
  }
}
