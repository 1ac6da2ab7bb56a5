#include <cmath>

#include "doctest.h"
#include "rsmech/errors.hpp"
#include "rsmech/isorevenue.hpp"
#include "unit/oracles.hpp"

using namespace rsmech;

namespace {
Distribution two_point() { return Distribution::empirical({{0.3, 0.5}, {0.7, 0.5}}); }
}

TEST_CASE("uniform cut at 0.16") {
  const auto c = cut(Distribution::uniform(), 0.16);
  REQUIRE(c.intervals.size() == 1);
  CHECK(c.intervals[0].u == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(c.intervals[0].w == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(c.log_sum == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("two-point cut has two pieces between 0.15 and 0.3") {
  const auto c = cut(two_point(), 0.2);
  REQUIRE(c.intervals.size() == 2);
  CHECK(c.intervals[0].u == doctest::Approx(0.2));
  CHECK(c.intervals[0].w == doctest::Approx(0.3));
  CHECK(c.intervals[1].u == doctest::Approx(0.4));
  CHECK(c.intervals[1].w == doctest::Approx(0.7));
}

TEST_CASE("two-point J transitions at 0.15 and 0.3") {
  const auto d = two_point();
  CHECK(cut(d, 0.1).intervals.size() == 1);
  CHECK(cut(d, 0.1499999).intervals.size() == 1);
  CHECK(cut(d, 0.15).intervals.size() == 2);
  CHECK(cut(d, 0.2999999).intervals.size() == 2);
  CHECK(cut(d, 0.3).intervals.size() == 1);
  CHECK(cut(d, 0.32).intervals.size() == 1);
  // Below 0.15 the single piece is (pi, 0.7); above 0.3 it is (2 pi, 0.7).
  CHECK(cut(d, 0.1).intervals[0].u == doctest::Approx(0.1));
  CHECK(cut(d, 0.32).intervals[0].u == doctest::Approx(0.64));
}

TEST_CASE("gap vanishes at Pi0 and beyond Pi0 is infeasible") {
  for (auto d : {Distribution::uniform(), two_point(), Distribution::beta(2, 5),
                 Distribution::truncated_exponential(1)}) {
    const double pi0 = d.max_posted_revenue().revenue;
    CHECK(std::abs(gap_only(d, pi0)) < 1e-9);
    CHECK_THROWS_AS(cut(d, pi0 * 1.01), InfeasibleTargetError);
  }
  CHECK_THROWS_AS(cut(Distribution::uniform(), -0.1), Error);
}

TEST_CASE("gap at zero is the mean") {
  CHECK(gap_only(Distribution::uniform(), 0.0) == doctest::Approx(0.5));
  CHECK(gap_only(two_point(), 0.0) == doctest::Approx(0.5));
}

TEST_CASE("uniform gap matches its closed form at 50 levels") {
  const auto d = Distribution::uniform();
  for (int i = 1; i <= 50; ++i) {
    const double pi = 0.25 * i / 51.0;
    CHECK(std::abs(gap_only(d, pi) - oracle::uniform_gap(pi)) < 1e-10);
  }
}

TEST_CASE("empirical gap matches the step oracle on random supports") {
  std::mt19937_64 g(5);
  for (int t = 0; t < 100; ++t) {
    auto atoms = oracle::random_atoms(g, 1 + t % 8);
    std::vector<Atom> at;
    for (auto& a : atoms) at.push_back({a.first, a.second});
    const auto d = Distribution::empirical(at);
    const double pi0 = d.max_posted_revenue().revenue;
    for (double f : {0.05, 0.3, 0.6, 0.95}) {
      CHECK(std::abs(gap_only(d, f * pi0) - oracle::step_gap(atoms, f * pi0)) < 1e-12);
    }
  }
}

TEST_CASE("Beta(2,5) gap agrees with a dense trapezoid of the truncated ccdf") {
  const auto d = Distribution::beta(2, 5);
  for (double pi : {0.02, 0.05, 0.1}) {
    const double q = oracle::trapezoid(
        [&](double x) { return x == 0 ? 0.0 : std::max(0.0, d.ccdf(x) - pi / x); }, 0.0, 1.0,
        1'000'000);
    CHECK(std::abs(gap_only(d, pi) - q) < 1e-6);
  }
}

TEST_CASE("gap equals the distance to the truncated reference") {
  for (auto d : {Distribution::uniform(), Distribution::beta(2, 5), Distribution::power(2)}) {
    const double pi = 0.5 * d.max_posted_revenue().revenue;
    const double q = oracle::simpson(
        [&](double x) { return x == 0 ? 0.0 : d.ccdf(x) - worst_case_ccdf(d, pi, x); }, 0.0, 1.0,
        200'000);
    CHECK(std::abs(gap_only(d, pi) - q) < 1e-6);
  }
}

TEST_CASE("gap is decreasing and convex, log_sum decreasing, cuts nested") {
  for (auto d : {Distribution::uniform(), Distribution::beta(2, 5), two_point(),
                 Distribution::truncated_pareto(3)}) {
    const double pi0 = d.max_posted_revenue().revenue;
    std::vector<double> g, L;
    std::vector<IsoRevenueCut> cuts;
    for (int i = 1; i < 40; ++i) {
      cuts.push_back(cut(d, pi0 * i / 40.0));
      g.push_back(cuts.back().gap);
      L.push_back(cuts.back().log_sum);
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
      CHECK(g[i] < g[i - 1]);
      CHECK(L[i] < L[i - 1]);
      if (i + 1 < g.size()) CHECK(g[i - 1] - 2 * g[i] + g[i + 1] >= -1e-12);
      // Each interval at the higher level sits inside some interval at the lower one.
      for (const auto& iv : cuts[i].intervals) {
        bool inside = false;
        for (const auto& jv : cuts[i - 1].intervals)
          inside |= iv.u >= jv.u - 1e-12 && iv.w <= jv.w + 1e-12;
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("worst-case ccdf examples") {
  const auto d = Distribution::uniform();
  CHECK(worst_case_ccdf(d, 0.16, 0.5) == doctest::Approx(0.32));
  CHECK(worst_case_ccdf(d, 0.16, 0.1) == doctest::Approx(0.9));
  CHECK(worst_case_ccdf(d, 0.16, 0.9) == doctest::Approx(0.1));
}
