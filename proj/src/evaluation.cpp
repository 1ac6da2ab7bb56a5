#include "rsmech/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <thread>

#include "rsmech/errors.hpp"
#include "rsmech/isorevenue.hpp"
#include "rsmech/pp_solver.hpp"
#include "rsmech/random.hpp"
#include "rsmech/ro_solver.hpp"
#include "rsmech/rs_solver.hpp"

namespace rsmech {

namespace {

constexpr double kTieBand = 1e-10;
constexpr double kZeroDiff = 1e-12;

double posted_revenue(double p, const Distribution& truth) {
  return p > 0.0 ? p * truth.ccdf_left(p) : 0.0;
}

double quadrature_revenue(const Mechanism& mech, const Distribution& truth) {
  if (const auto* pp = std::get_if<PostedPrice>(&mech)) return posted_revenue(pp->price(), truth);
  const auto& rl = std::get<RandomizedLogMechanism>(mech);
  if (rl.degenerate()) return posted_revenue(rl.fallback_price(), truth);
  // m is continuous with slope `slope` on the intervals, so E[m] = slope * sum of
  // the CCDF integral over them.
  double s = 0.0;
  for (const auto& iv : rl.intervals()) s += truth.ccdf_integral(iv.u, iv.w);
  return rl.slope() * s;
}

struct SignScan {
  std::optional<double> first_change;
  int changes = 0;
  double min_diff = std::numeric_limits<double>::infinity();
};

template <class F>
SignScan scan_sign(F diff, std::size_t n) {
  SignScan out;
  int last_sign = 0;
  double last_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    const double d = diff(x);
    out.min_diff = std::min(out.min_diff, d);
    const int s = d > kZeroDiff ? 1 : (d < -kZeroDiff ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      ++out.changes;
      if (!out.first_change) {
        double lo = last_x, hi = x;
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
          const double mid = lo + 0.5 * (hi - lo);
          const double dm = diff(mid);
          const int sm = dm > kZeroDiff ? 1 : (dm < -kZeroDiff ? -1 : 0);
          if (sm == last_sign)
            lo = mid;
          else
            hi = mid;
        }
        out.first_change = lo + 0.5 * (hi - lo);
      }
    }
    last_sign = s;
    last_x = x;
  }
  return out;
}

}  // namespace

namespace {

struct MCEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// One stream of valuations drawn by inverse CDF, shared by every mechanism so
// their estimates use common random numbers. Welford accumulation keeps the
// variance stable for 1e6+ draws.
std::vector<MCEstimate> monte_carlo(std::span<const Mechanism* const> mechs,
                                    const Distribution& truth, std::uint64_t seed,
                                    std::size_t samples) {
  UniformStream rng(seed);
  std::vector<double> mean(mechs.size(), 0.0), m2(mechs.size(), 0.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = truth.quantile(rng());
    for (std::size_t j = 0; j < mechs.size(); ++j) {
      const double x = payment(*mechs[j], v);
      const double delta = x - mean[j];
      mean[j] += delta / static_cast<double>(i + 1);
      m2[j] += delta * (x - mean[j]);
    }
  }
  const double n = static_cast<double>(samples);
  std::vector<MCEstimate> out(mechs.size());
  for (std::size_t j = 0; j < mechs.size(); ++j)
    out[j] = {mean[j], std::sqrt(m2[j] / (n - 1.0) / n)};
  return out;
}

}  // namespace

const char* to_string(EvalMethod method) noexcept {
  return method == EvalMethod::Quadrature ? "quadrature" : "monte_carlo";
}

EvalReport expected_revenue(const Mechanism& mech, const Distribution& truth,
                            const EvalOptions& opts) {
  EvalReport rep;
  rep.mechanism_id = describe(mech);
  rep.true_dist = truth.describe();
  rep.method = opts.method;
  if (opts.method == EvalMethod::Quadrature) {
    rep.expected_revenue = quadrature_revenue(mech, truth);
    return rep;
  }
  if (opts.samples < 2) throw_invalid("Monte Carlo needs at least 2 samples");
  rep.seed = opts.seed;
  rep.samples = opts.samples;
  const Mechanism* one[] = {&mech};
  const auto est = monte_carlo(one, truth, opts.seed, opts.samples);
  rep.expected_revenue = est[0].mean;
  rep.standard_error = est[0].se;
  return rep;
}

EtaReport eta_rs(const Distribution& reference, double tau, const Distribution& truth,
                 const Tolerances& tol) {
  EtaReport out;
  const auto rs = solve_rs(reference, tau, tol);
  const auto pp = solve_pp(reference, tau, tol);
  out.price_pp = pp.p_pp;
  out.revenue_pp = posted_revenue(pp.p_pp, truth);
  out.revenue_opt = quadrature_revenue(rs.mechanism, truth);
  if (out.revenue_opt < 1e-12) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.diagnostics.push_back("optimal-mechanism revenue below 1e-12; ratio reported as +inf");
  } else {
    out.ratio = out.revenue_pp / out.revenue_opt;
  }
  return out;
}

EtaReport eta_ro(const Distribution& reference, double r, const Distribution& truth,
                 const Tolerances& tol) {
  if (reference.kind() != DistKind::Uniform)
    throw Error(ErrorCode::Unsupported,
                "RO posted pricing has a closed form only for the uniform reference");
  EtaReport out;
  const auto ro = solve_ro(reference, r, tol);
  out.price_pp = ro_pp_price_uniform(r);
  out.revenue_pp = posted_revenue(out.price_pp, truth);
  out.revenue_opt = quadrature_revenue(ro.mechanism, truth);
  if (out.revenue_opt < 1e-12) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.diagnostics.push_back("optimal-mechanism revenue below 1e-12; ratio reported as +inf");
  } else {
    out.ratio = out.revenue_pp / out.revenue_opt;
  }
  return out;
}

CrossingReport crossing_thresholds(const Mechanism& a, const Mechanism& b,
                                   std::size_t grid_points) {
  if (grid_points < 2) throw_invalid("crossing scan needs at least 2 grid points");
  CrossingReport out;
  const auto sq = scan_sign([&](double v) { return allocation(a, v) - allocation(b, v); },
                            grid_points);
  const auto sm = scan_sign([&](double v) { return payment(a, v) - payment(b, v); }, grid_points);
  const auto ss = scan_sign([&](double v) { return surplus(a, v) - surplus(b, v); }, grid_points);
  out.v_q = sq.first_change;
  out.v_m = sm.first_change;
  out.v_s = ss.first_change;
  out.changes_q = sq.changes;
  out.changes_m = sm.changes;
  out.changes_s = ss.changes;
  out.min_diff_s = ss.min_diff;
  const auto flag = [&](const char* name, int n) {
    if (n > 1) {
      std::ostringstream os;
      os << name << " difference changes sign " << n << " times";
      out.diagnostics.push_back(os.str());
    }
  };
  flag("allocation", sq.changes);
  flag("payment", sm.changes);
  flag("surplus", ss.changes);
  return out;
}

double theta_of_kappa(double kappa) {
  if (!(kappa > 1.0)) throw_domain("theta needs kappa > 1");
  const double lk = std::log(kappa);
  return (kappa - lk - 1.0) / (1.0 / kappa + lk - 1.0);
}

ThetaReport theta_condition(const Distribution& dist, double c, const Tolerances& tol) {
  const double pi0 = dist.max_posted_revenue().revenue;
  if (!(c > 0.0 && c < pi0)) throw_domain("theta condition needs 0 < c < Pi0");
  const auto ct = cut(dist, c, tol);
  if (ct.intervals.size() != 1 || !(ct.intervals.front().w > ct.intervals.front().u))
    throw Error(ErrorCode::Degenerate, "theta condition needs a single iso-revenue interval");
  ThetaReport rep;
  rep.c = c;
  rep.u = ct.intervals.front().u;
  rep.w = ct.intervals.front().w;
  rep.kappa = rep.w / rep.u;
  rep.theta = theta_of_kappa(rep.kappa);
  constexpr double h = 1e-6;
  const auto rev = [&](double x) { return x * dist.ccdf(x); };
  const auto deriv = [&](double x) {
    const double lo = std::max(0.0, x - h), hi = std::min(1.0, x + h);
    return (rev(hi) - rev(lo)) / (hi - lo);
  };
  rep.lhs = deriv(rep.u);
  rep.rhs = -rep.theta * deriv(rep.w);
  rep.holds = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

std::string classify(double rev_rs, double rev_ro, std::optional<double> rev_pp) {
  std::vector<std::pair<double, const char*>> c{{rev_rs, "RS"}, {rev_ro, "RO"}};
  if (rev_pp) c.emplace_back(*rev_pp, "PP");
  std::stable_sort(c.begin(), c.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
  if (c[0].first - c[1].first <= kTieBand) return "tie";
  return c[0].second;
}

SweepResult beta_sweep(const SweepConfig& config, const Tolerances& tol) {
  for (double a : config.alphas)
    if (!(a > 0.0)) throw_invalid("sweep alphas must be positive");
  for (double b : config.betas)
    if (!(b > 0.0)) throw_invalid("sweep betas must be positive");
  for (double f : config.tau_fractions)
    if (!(f > 0.0 && f < 1.0)) throw_invalid("sweep tau fractions must lie in (0, 1)");

  const auto ref = Distribution::uniform();
  const double pi0 = ref.max_posted_revenue().revenue;

  // The reference is shared by every cell, so each target is solved once.
  struct Solved {
    bool ok = false;
    std::string note;
    double tau = 0.0, r = 0.0;
    std::optional<Mechanism> rs, ro, pp;
  };
  std::vector<Solved> solved(config.tau_fractions.size());
  for (std::size_t t = 0; t < solved.size(); ++t) {
    auto& s = solved[t];
    s.tau = config.tau_fractions[t] * pi0;
    try {
      s.rs = solve_rs(ref, s.tau, tol).mechanism;
      s.r = radius_for_target(ref, s.tau, tol);
      s.ro = solve_ro(ref, s.r, tol).mechanism;
      s.pp = PostedPrice(solve_pp(ref, s.tau, tol).p_pp);
      s.ok = true;
    } catch (const Error& e) {
      s.note = e.what();
    }
  }

  const std::size_t nt = config.tau_fractions.size();
  const std::size_t nb = config.betas.size();
  const std::size_t total = config.alphas.size() * nb * nt;
  SweepResult out;
  out.config = config;
  out.cells.resize(total);

  const auto run_truth = [&](std::size_t ab) {
    const double alpha = config.alphas[ab / nb];
    const double beta = config.betas[ab % nb];
    const auto truth = Distribution::beta(alpha, beta);
    const double w = wasserstein_distance(truth, ref, tol);
    for (std::size_t t = 0; t < nt; ++t) {
      const std::size_t idx = ab * nt + t;
      SweepCell& cell = out.cells[idx];
      cell.alpha = alpha;
      cell.beta = beta;
      cell.tau_over_pi0 = config.tau_fractions[t];
      cell.wasserstein_to_ref = w;
      const Solved& s = solved[t];
      cell.tau = s.tau;
      cell.r = s.r;
      if (!s.ok) {
        cell.skipped = true;
        cell.preferred = "skipped";
        cell.note = s.note;
        continue;
      }
      cell.rev_rs = quadrature_revenue(*s.rs, truth);
      cell.rev_ro = quadrature_revenue(*s.ro, truth);
      cell.rev_pp = quadrature_revenue(*s.pp, truth);
      cell.preferred = classify(cell.rev_rs, cell.rev_ro,
                                config.include_pp ? std::optional<double>(cell.rev_pp)
                                                  : std::nullopt);
      cell.in_ambiguity_set = w <= s.r;
      if (config.mc_samples > 0) {
        const std::uint64_t seed = stream_seed(config.seed, idx);
        const Mechanism* mechs[] = {&*s.rs, &*s.ro, &*s.pp};
        const auto est = monte_carlo(mechs, truth, seed, config.mc_samples);
        cell.mc_rs = est[0].mean;
        cell.se_rs = est[0].se;
        cell.mc_ro = est[1].mean;
        cell.se_ro = est[1].se;
        cell.mc_pp = est[2].mean;
        cell.se_pp = est[2].se;
      }
    }
  };

  const auto guarded = [&](std::size_t ab) {
    try {
      run_truth(ab);
    } catch (const std::exception& e) {
      for (std::size_t t = 0; t < nt; ++t) {
        SweepCell& cell = out.cells[ab * nt + t];
        cell.alpha = config.alphas[ab / nb];
        cell.beta = config.betas[ab % nb];
        cell.tau_over_pi0 = config.tau_fractions[t];
        cell.skipped = true;
        cell.preferred = "skipped";
        cell.note = e.what();
      }
    }
  };

  const std::size_t truths = config.alphas.size() * nb;
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(truths)));
  if (workers == 1) {
    for (std::size_t ab = 0; ab < truths; ++ab) guarded(ab);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i)
      pool.emplace_back([&] {
        for (std::size_t ab = next++; ab < truths; ab = next++) guarded(ab);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace rsmech
