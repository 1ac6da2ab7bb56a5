#include <chrono>
#include <cmath>

#include "doctest.h"
#include "rsmech/errors.hpp"
#include "rsmech/random.hpp"
#include "rsmech/rs_solver.hpp"
#include "unit/oracles.hpp"

using namespace rsmech;

namespace {

Distribution two_point() { return Distribution::empirical({{0.3, 0.5}, {0.7, 0.5}}); }

// Piecewise rho*(k) for the two-point reference, one formula per J regime.
double two_point_rho_star(double k) {
  if (k < 1 / std::log(14.0 / 3.0)) return k * (0.5 - 0.7 * std::exp(-1 / k));
  if (k < 1 / std::log(7.0 / 6.0)) return k * (0.65 - 2 * std::sqrt(0.105) * std::exp(-0.5 / k));
  return 0.35 * k * (1 - std::exp(-1 / k));
}

}  // namespace

TEST_CASE("uniform pi* and rho* match their closed forms") {
  const auto d = Distribution::uniform();
  for (int i = 0; i < 50; ++i) {
    const double k = 0.1 * std::pow(100.0, i / 49.0);
    CHECK(std::abs(pi_star(d, k) - oracle::uniform_pi_star(k)) < 1e-8);
    CHECK(std::abs(rho_star(d, k) - oracle::uniform_rho_star(k)) < 1e-8);
  }
}

TEST_CASE("two-point rho* follows the three regimes") {
  const auto d = two_point();
  for (int i = 0; i < 50; ++i) {
    const double k = 0.15 * std::pow(200.0, i / 49.0);
    CHECK(std::abs(rho_star(d, k) - two_point_rho_star(k)) < 1e-8);
  }
  for (double k : {0.2, 0.4, 0.6}) {
    CHECK(pi_star(d, k) == doctest::Approx(0.7 * std::exp(-1 / k)).epsilon(1e-10));
  }
}

TEST_CASE("rho* equals rho(pi*, k)") {
  for (auto d : {Distribution::uniform(), two_point(), Distribution::beta(2, 5)}) {
    for (double k : {0.2, 0.7, 3.0}) {
      const double p = pi_star(d, k);
      CHECK(std::abs(rho_star(d, k) - fragility_adjusted_revenue(d, p, k)) < 1e-8);
    }
  }
}

TEST_CASE("pi* matches a grid minimisation of rho(pi, k)") {
  const auto d = Distribution::uniform();
  for (double k : {0.3, 0.563, 1.5}) {
    const int n = 100'000;
    double best = 1e300, arg = 0;
    for (int i = 1; i <= n; ++i) {
      const double pi = 0.25 * i / n;
      const double v = pi + k * oracle::uniform_gap(pi);
      if (v < best) best = v, arg = pi;
    }
    CHECK(std::abs(pi_star(d, k) - arg) < 1e-5);
  }
}

TEST_CASE("rho(., k) is convex and rho* increasing") {
  const auto d = Distribution::beta(2, 5);
  const double pi0 = d.max_posted_revenue().revenue;
  std::vector<double> r;
  for (int i = 1; i < 60; ++i) r.push_back(fragility_adjusted_revenue(d, pi0 * i / 60.0, 0.8));
  for (std::size_t i = 1; i + 1 < r.size(); ++i) CHECK(r[i - 1] - 2 * r[i] + r[i + 1] >= -1e-12);
  double prev = 0;
  for (int i = 0; i < 30; ++i) {
    const double v = rho_star(d, 0.05 * std::pow(1.3, i));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("solve_rs reproduces the uniform and two-point rows") {
  const auto u = Distribution::uniform();
  auto a = solve_rs(u, 0.1);
  CHECK(a.k_star == doctest::Approx(0.2029).epsilon(1e-3));
  REQUIRE(a.cut.intervals.size() == 1);
  CHECK(a.cut.intervals[0].u == doctest::Approx(0.007).epsilon(0.05));
  auto b = solve_rs(u, 0.2);
  CHECK(b.k_star == doctest::Approx(0.563).epsilon(1e-3));
  CHECK(b.pi_star == doctest::Approx(0.1238).epsilon(1e-3));
  auto c = solve_rs(two_point(), 0.2);
  CHECK(c.k_star == doctest::Approx(0.488).epsilon(2e-3));
  REQUIRE(c.cut.intervals.size() == 1);
  CHECK(c.cut.intervals[0].u == doctest::Approx(0.09).epsilon(0.01));
  CHECK(c.cut.intervals[0].w == doctest::Approx(0.7));
  CHECK(c.residual < 1e-10);
}

TEST_CASE("solve_rs rejects targets at or above Pi0") {
  const auto u = Distribution::uniform();
  CHECK_THROWS_AS(solve_rs(u, 0.25), InfeasibleTargetError);
  CHECK_THROWS_AS(solve_rs(u, 0.3), InfeasibleTargetError);
  CHECK_THROWS_AS(solve_rs(u, 0.0), Error);
  try {
    solve_rs(two_point(), 0.4);
  } catch (const InfeasibleTargetError& e) {
    CHECK(e.ceiling() == doctest::Approx(0.35));
    CHECK(e.requested() == doctest::Approx(0.4));
  }
}

TEST_CASE("optimal mechanism shape") {
  for (auto d : {Distribution::uniform(), two_point(), Distribution::beta(2, 5),
                 Distribution::truncated_pareto(3)}) {
    const double pi0 = d.max_posted_revenue().revenue;
    const auto rep = solve_rs(d, 0.6 * pi0);
    const auto& m = rep.mechanism;
    const double wj = m.intervals().back().w;
    CHECK(m.allocation(0.0) == 0.0);
    CHECK(m.allocation(wj) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.allocation(1.0) == 1.0);
    CHECK(m.payment(0.0) == 0.0);
    CHECK(m.allocation(m.intervals()[0].u * 0.99) == 0.0);
    // Slope of the payment inside intervals is k.
    const auto iv = m.intervals()[0];
    const double a = iv.u + 0.25 * (iv.w - iv.u), b = iv.u + 0.75 * (iv.w - iv.u);
    CHECK((m.payment(b) - m.payment(a)) / (b - a) == doctest::Approx(rep.k_star).epsilon(1e-10));
  }
}

TEST_CASE("payment is the Stieltjes integral of x dq and surplus the integral of q") {
  for (auto d : {Distribution::uniform(), two_point(), Distribution::beta(2, 5)}) {
    const auto rep = solve_rs(d, 0.5 * d.max_posted_revenue().revenue);
    const auto& m = rep.mechanism;
    for (double v : {0.1, 0.35, 0.6, 0.9, 1.0}) {
      const int n = 200'000;
      double st = 0;
      for (int i = 0; i < n; ++i) {
        const double x0 = v * i / n, x1 = v * (i + 1) / n;
        st += 0.5 * (x0 + x1) * (m.allocation(x1) - m.allocation(x0));
      }
      CHECK(std::abs(m.payment(v) - st) < 1e-8);
      const double iq = oracle::simpson([&](double x) { return m.allocation(x); }, 0, v, 200'000);
      CHECK(std::abs(m.surplus(v) - iq) < 1e-8);
    }
  }
}

TEST_CASE("mechanism is incentive compatible and individually rational") {
  for (auto d : {Distribution::uniform(), two_point(), Distribution::beta(2, 5)}) {
    const auto rep = solve_rs(d, 0.7 * d.max_posted_revenue().revenue);
    const auto& m = rep.mechanism;
    int bad = 0;
    for (int i = 0; i <= 200; ++i) {
      const double v = i / 200.0;
      const double honest = m.surplus(v);
      if (honest < -1e-12) ++bad;
      for (int j = 0; j <= 200; ++j) {
        const double r = j / 200.0;
        if (m.allocation(r) * v - m.payment(r) > honest + 1e-12) ++bad;
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("satisficing constraint holds against random empirical deviations") {
  std::mt19937_64 g(314159);
  for (auto ref : {Distribution::uniform(), two_point()}) {
    const double tau = 0.5 * ref.max_posted_revenue().revenue;
    const auto rep = solve_rs(ref, tau);
    for (int t = 0; t < 100; ++t) {
      auto atoms = oracle::random_atoms(g, 1 + t % 12);
      std::vector<Atom> at;
      double total = 0, em = 0;
      for (auto& a : atoms) total += a.second;
      for (auto& a : atoms) {
        at.push_back({a.first, a.second});
        em += a.second / total * rep.mechanism.payment(a.first);
      }
      const double dist = wasserstein_distance(Distribution::empirical(at), ref);
      CHECK(tau - em <= rep.k_star * dist + 1e-8);
    }
  }
}

TEST_CASE("uniform price statistics match the closed forms and Monte Carlo") {
  for (double tau : {0.05, 0.1, 0.15, 0.2}) {
    const auto rep = solve_rs(Distribution::uniform(), tau);
    const auto s = rep.mechanism.price_statistics();
    CHECK(std::abs(s.mean - 2 * tau) < 1e-8);
    CHECK(std::abs(s.variance - tau * (1 - 4 * tau)) < 1e-8);
    const double k = rep.k_star;
    const double skew = (2 * tau * tau / (3 * k * k) + 0.5 - 6 * tau + 16 * tau * tau) /
                        std::sqrt(tau * std::pow(1 - 4 * tau, 3));
    CHECK(std::abs(s.skewness - skew) < 1e-6);

    // Batch means give standard errors for all three moments.
    UniformStream U(stream_seed(42, static_cast<std::uint64_t>(tau * 100)));
    const int batches = 100, per = 10'000;
    std::vector<double> bm, bv, bs;
    double m1 = 0, m2 = 0, m3 = 0;
    for (int b = 0; b < batches; ++b) {
      double s1 = 0, s2 = 0, s3 = 0;
      for (int i = 0; i < per; ++i) {
        const double p = rep.mechanism.sample_price(U());
        s1 += p, s2 += p * p, s3 += p * p * p;
      }
      s1 /= per, s2 /= per, s3 /= per;
      const double var = s2 - s1 * s1;
      bm.push_back(s1);
      bv.push_back(var);
      bs.push_back((s3 - 3 * s1 * s2 + 2 * s1 * s1 * s1) / std::pow(var, 1.5));
      m1 += s1, m2 += s2, m3 += s3;
    }
    m1 /= batches, m2 /= batches, m3 /= batches;
    const double var = m2 - m1 * m1;
    const double sk = (m3 - 3 * m1 * m2 + 2 * m1 * m1 * m1) / std::pow(var, 1.5);
    auto se = [&](const std::vector<double>& x) {
      double a = 0, q = 0;
      for (double v : x) a += v;
      a /= x.size();
      for (double v : x) q += (v - a) * (v - a);
      return std::sqrt(q / (x.size() - 1) / x.size());
    };
    CHECK(std::abs(m1 - s.mean) < 3 * se(bm));
    CHECK(std::abs(var - s.variance) < 3 * se(bv));
    CHECK(std::abs(sk - s.skewness) < 3 * se(bs));
  }
}

TEST_CASE("a uniform solve runs well under a second") {
  const auto t0 = std::chrono::steady_clock::now();
  solve_rs(Distribution::uniform(), 0.2);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s < 1.0);
}
