#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rsmech/errors.hpp"
#include "rsmech/pp_solver.hpp"
#include "rsmech/rs_solver.hpp"

using namespace rsmech;

namespace {
Distribution two_point() { return Distribution::empirical({{0.3, 0.5}, {0.7, 0.5}}); }

std::vector<Distribution> references() {
  return {Distribution::uniform(),         two_point(),
          Distribution::beta(2, 5),        Distribution::power(2),
          Distribution::truncated_exponential(1), Distribution::beta(0.5, 0.5),
          Distribution::empirical({{0.1, 0.2}, {0.4, 0.3}, {0.8, 0.5}})};
}
}  // namespace

TEST_CASE("rho_pp examples") {
  CHECK(rho_pp(Distribution::uniform(), 0.0, 1.0) == 0.0);
  CHECK(rho_pp(two_point(), 0.4, 2.0) == doctest::Approx(0.2));
  for (double k : {0.3, 1.0, 4.0}) {
    CHECK(rho_pp(Distribution::uniform(), k / (2 * k + 1), k) ==
          doctest::Approx(k / (4 * k + 2)).epsilon(1e-12));
  }
}

TEST_CASE("rho_pp matches a direct quadrature of min{p, k(v-p)+}") {
  for (const auto& d : references()) {
    if (d.is_discrete()) continue;
    for (double p : {0.1, 0.3, 0.6}) {
      for (double k : {0.5, 2.0}) {
        // E[g(v)] = integral of g'(x) ccdf(x) for g(0) = 0.
        const double hi = std::min(1.0, p * (1 + 1 / k));
        const int n = 200'000;
        double s = 0;
        for (int i = 0; i < n; ++i) s += k * d.ccdf(p + (hi - p) * (i + 0.5) / n);
        s *= (hi - p) / n;
        CHECK(std::abs(rho_pp(d, p, k) - s) < 1e-8);
      }
    }
  }
}

TEST_CASE("optimal price closed forms") {
  for (double k : {0.2, 1.0, 5.0}) {
    CHECK(optimal_price_given_k(Distribution::uniform(), k) ==
          doctest::Approx(k / (2 * k + 1)).epsilon(1e-10));
    CHECK(optimal_price_given_k(two_point(), k) == doctest::Approx(0.7 * k / (1 + k)).epsilon(1e-12));
  }
}

TEST_CASE("optimal price matches a 1e5-point grid maximisation") {
  for (const auto& d : references()) {
    for (double k : {0.3, 1.0, 3.0}) {
      double best = -1;
      for (int i = 0; i <= 100'000; ++i) best = std::max(best, rho_pp(d, i / 100'000.0, k));
      const double got = rho_pp(d, optimal_price_given_k(d, k), k);
      INFO(d.describe() << " k=" << k);
      CHECK(got >= best - 1e-9);
      // A step function's peak can fall between grid points; the slope of
      // rho_pp is at most 1 + k, which bounds what the grid can miss.
      CHECK(got - best < (d.is_discrete() ? (1 + k) * 0.5e-5 : 1e-6));
    }
  }
}

TEST_CASE("first-order condition for regular references") {
  for (const auto& d : {Distribution::uniform(), Distribution::beta(2, 5), Distribution::power(3),
                        Distribution::truncated_exponential(2)}) {
    for (double k : {0.3, 1.0, 3.0}) {
      const double p = optimal_price_given_k(d, k);
      const double hi = (1 + 1 / k) * p;
      if (hi >= 1) continue;
      CHECK(std::abs(hi * d.ccdf(hi) - p * d.ccdf(p)) < 1e-8);
    }
  }
}

TEST_CASE("shape of rho_pp in the price") {
  // Uniform: p - p^2 (1 + 1/(2k)) while the cap (1 + 1/k) p stays below 1, so concave there.
  for (double k : {0.5, 2.0}) {
    const double top = k / (k + 1);
    std::vector<double> r;
    for (int i = 0; i <= 1000; ++i) r.push_back(rho_pp(Distribution::uniform(), top * i / 1000.0, k));
    for (std::size_t i = 1; i + 1 < r.size(); ++i) CHECK(r[i - 1] - 2 * r[i] + r[i + 1] <= 1e-12);
  }
  // Regular continuous references: a single peak.
  for (const auto& d : {Distribution::uniform(), Distribution::beta(2, 5), Distribution::power(2),
                        Distribution::truncated_exponential(1)}) {
    for (double k : {0.5, 2.0}) {
      int turns = 0;
      double prev = rho_pp(d, 0.0, k);
      bool rising = true;
      for (int i = 1; i <= 2000; ++i) {
        const double v = rho_pp(d, i / 2000.0, k);
        if (rising && v < prev - 1e-13) rising = false, ++turns;
        else if (!rising && v > prev + 1e-13) rising = true, ++turns;
        prev = v;
      }
      CHECK(turns <= 1);
    }
  }
  // Empirical: linear between the candidate prices k/(k+1) v and v.
  const auto e = Distribution::empirical({{0.1, 0.2}, {0.4, 0.3}, {0.8, 0.5}});
  const double k = 1.5;
  std::vector<double> knots{0.0, 1.0};
  for (const auto& a : e.atoms()) knots.insert(knots.end(), {a.value, k / (k + 1) * a.value});
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    if (b - a < 1e-9) continue;
    const double mid = rho_pp(e, 0.5 * (a + b), k);
    CHECK(mid == doctest::Approx(0.5 * (rho_pp(e, a, k) + rho_pp(e, b, k))).epsilon(1e-12));
  }
}

TEST_CASE("rho_pp* is increasing in k") {
  for (const auto& d : references()) {
    double prev = 0;
    for (int i = 0; i < 30; ++i) {
      const double v = rho_pp_star(d, 0.05 * std::pow(1.3, i));
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("uniform PP closed form at 50 targets") {
  for (int i = 1; i <= 50; ++i) {
    const double tau = 0.24 * i / 50.0;
    const auto rep = solve_pp(Distribution::uniform(), tau);
    CHECK(std::abs(rep.k_pp - 2 * tau / (1 - 4 * tau)) < 1e-8);
    CHECK(std::abs(rep.p_pp - 2 * tau) < 1e-8);
  }
}

TEST_CASE("two-point PP rows") {
  auto a = solve_pp(two_point(), 0.1);
  CHECK(a.k_pp == doctest::Approx(0.2929).epsilon(1e-3));
  CHECK(a.p_pp == doctest::Approx(0.1586).epsilon(1e-3));
  auto b = solve_pp(two_point(), 0.2);
  CHECK(b.k_pp == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(std::abs(b.p_pp - 0.4) < 1e-9);
  auto c = solve_pp_two_point(0.3, 0.5, 0.7, 0.5, 0.1);
  CHECK(c.k_pp == doctest::Approx((0.4 - std::sqrt(0.08)) / 0.4).epsilon(1e-12));
  auto e = solve_pp_two_point(0.3, 0.5, 0.7, 0.5, 0.2);
  CHECK(e.k_pp == doctest::Approx(0.2 / 0.15).epsilon(1e-12));
  CHECK(e.p_pp == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("two-point closed form agrees with the generic solver") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    double v1 = U(g), v2 = U(g);
    if (v2 - v1 < 0.02) continue;
    const double a1 = U(g);
    const auto d = Distribution::empirical({{v1, a1}, {v2, 1 - a1}});
    const double pi0 = d.max_posted_revenue().revenue;
    const double tau = U(g) * pi0 * 0.98;
    const auto closed = solve_pp_two_point(v1, a1, v2, 1 - a1, tau);
    const auto generic = solve_pp(d, tau);
    INFO("v1=" << v1 << " a1=" << a1 << " v2=" << v2 << " tau=" << tau);
    CHECK(std::abs(closed.k_pp - generic.k_pp) < 1e-6);
    CHECK(std::abs(closed.p_pp - generic.p_pp) < 1e-6);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("PP fragility is never below the optimal fragility") {
  for (const auto& d : references()) {
    const double pi0 = d.max_posted_revenue().revenue;
    for (double f : {0.1, 0.4, 0.7, 0.95}) {
      const auto pp = solve_pp(d, f * pi0);
      const auto rs = solve_rs(d, f * pi0);
      CHECK(pp.k_pp >= rs.k_star - 1e-9);
      CHECK(std::abs(pp.rho_at_solution - f * pi0) < 1e-9);
    }
  }
}

TEST_CASE("PP rejects infeasible targets") {
  CHECK_THROWS_AS(solve_pp(Distribution::uniform(), 0.25), InfeasibleTargetError);
  CHECK_THROWS_AS(solve_pp_two_point(0.3, 0.5, 0.7, 0.5, 0.36), InfeasibleTargetError);
}
