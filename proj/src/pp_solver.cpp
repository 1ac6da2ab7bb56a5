#include "rsmech/pp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsmech/errors.hpp"
#include "rsmech/isorevenue.hpp"
#include "rsmech/rs_solver.hpp"

namespace rsmech {

namespace {

constexpr double kMinK = 1e-9;
constexpr double kMaxK = 1e6;
constexpr int kScanPoints = 1001;

double split(double lo, double hi) {
  if (lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
  return lo + 0.5 * (hi - lo);
}

double price_by_scan(const Distribution& dist, double k) {
  double best_p = 0.0, best = -1.0;
  int best_i = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double p = static_cast<double>(i) / (kScanPoints - 1);
    const double v = rho_pp(dist, p, k);
    if (v > best) {
      best = v;
      best_p = p;
      best_i = i;
    }
  }
  const double lo = static_cast<double>(std::max(best_i - 1, 0)) / (kScanPoints - 1);
  const double hi = static_cast<double>(std::min(best_i + 1, kScanPoints - 1)) / (kScanPoints - 1);
  const auto opt = golden_max([&](double p) { return rho_pp(dist, p, k); }, lo, hi, 200);
  return opt.value >= best ? opt.x : best_p;
}

// Regular references: the optimal price is the lower iso-revenue price u(c)
// of the level c whose prices are in ratio (k + 1) / k.
bool price_by_ratio(const Distribution& dist, double k, const Tolerances& tol, double& price) {
  const double target = (k + 1.0) / k;
  const double pi0 = dist.max_posted_revenue().revenue;
  double lo = pi0 * 1e-300, hi = pi0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 400; ++it) {
    const double mid = split(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    const auto c = cut(dist, mid, tol);
    if (c.intervals.size() != 1) return false;
    const double ratio = c.intervals.front().w / c.intervals.front().u;
    const double err = std::abs(ratio - target) / target;
    if (err <= best_err) {
      best_err = err;
      price = c.intervals.front().u;
    }
    if (ratio > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol.root_width * hi) break;
  }
  return std::isfinite(best_err);
}

}  // namespace

double rho_pp(const Distribution& dist, double p, double k) {
  if (!(p >= 0.0 && p <= 1.0)) throw_domain("rho_pp: price outside [0, 1]");
  if (!(k > 0.0)) throw_invalid("rho_pp: fragility must be positive");
  if (p == 0.0) return 0.0;
  if (dist.kind() == DistKind::Empirical) {
    double s = 0.0;
    for (const auto& a : dist.atoms()) s += a.mass * std::min(p, k * std::max(0.0, a.value - p));
    return s;
  }
  // E[min{p, k (v - p)^+}] = k * integral of the CCDF over [p, p (1 + 1/k)].
  return k * dist.ccdf_integral(p, std::min(1.0, p + p / k));
}

double optimal_price_given_k(const Distribution& dist, double k, const Tolerances& tol) {
  if (!(k > 0.0) || !std::isfinite(k)) throw_invalid("fragility must be positive and finite");
  if (dist.kind() == DistKind::Empirical) {
    double best_p = 0.0, best = -1.0;
    const auto consider = [&](double p) {
      const double v = rho_pp(dist, p, k);
      if (v > best || (v == best && p < best_p)) {
        best = v;
        best_p = p;
      }
    };
    for (const auto& a : dist.atoms()) {
      consider(k / (k + 1.0) * a.value);
      consider(a.value);
    }
    return best_p;
  }
  double price = 0.0;
  if (dist.is_regular() && price_by_ratio(dist, k, tol, price)) return price;
  return price_by_scan(dist, k);
}

double rho_pp_star(const Distribution& dist, double k, const Tolerances& tol) {
  return rho_pp(dist, optimal_price_given_k(dist, k, tol), k);
}

PPSolveReport solve_pp(const Distribution& dist, double tau, const Tolerances& tol) {
  PPSolveReport rep;
  rep.tau = tau;
  rep.pi0 = dist.max_posted_revenue().revenue;
  check_target(tau, rep.pi0);

  const auto rho = [&](double k) { return rho_pp_star(dist, k, tol); };
  double lo = kMinK, hi = 1.0;
  while (rho(hi) < tau) {
    if (hi >= kMaxK) break;
    lo = hi;
    hi = std::min(2.0 * hi, kMaxK);
  }
  double k = hi;
  if (rho(hi) < tau) {
    rep.diagnostics.push_back("fragility reached the 1e6 cap; target is very close to Pi0");
  } else {
    Tolerances width_only = tol;
    width_only.root_residual = 0.0;
    const auto root = bisect(rho, lo, hi, tau, true, width_only, true);
    k = root.x;
    rep.iterations = root.iterations;
  }
  rep.k_pp = k;
  rep.p_pp = optimal_price_given_k(dist, k, tol);
  rep.rho_at_solution = rho_pp(dist, rep.p_pp, k);
  rep.residual = std::abs(rep.rho_at_solution - tau);
  if (rep.residual > tol.root_residual) {
    std::ostringstream os;
    os << "target residual " << rep.residual << " above tolerance " << tol.root_residual;
    rep.diagnostics.push_back(os.str());
  }
  return rep;
}

PPSolveReport solve_pp_two_point(double v1, double a1, double v2, double a2, double tau) {
  if (!(v1 > 0.0 && v1 < v2 && v2 <= 1.0)) throw_invalid("two-point reference needs 0 < v1 < v2 <= 1");
  if (!(a1 > 0.0 && a2 > 0.0) || std::abs(a1 + a2 - 1.0) > 1e-12)
    throw_invalid("two-point masses must be positive and sum to 1");
  if (!(tau > 0.0)) throw_invalid("revenue target must be positive");
  PPSolveReport rep;
  rep.tau = tau;
  const double hi_rev = (1.0 - a1) * v2;
  rep.pi0 = std::max(v1, hi_rev);
  if (tau > rep.pi0) {
    std::ostringstream os;
    os.precision(12);
    os << "revenue target tau = " << tau << " is infeasible: it must not exceed Pi0 = " << rep.pi0;
    throw InfeasibleTargetError(tau, rep.pi0, os.str());
  }
  const double pivot = (1.0 - a1) * v1;
  const double band = 1e-12;
  if (std::abs(tau - pivot) <= band)
    rep.diagnostics.push_back("tau within 1e-12 of (1 - a1) v1; both branches agree there");
  if (std::abs(v1 - hi_rev) <= band)
    rep.diagnostics.push_back("v1 within 1e-12 of (1 - a1) v2; case boundary");
  const bool low_target = tau <= pivot + band;
  const bool spread = v1 <= hi_rev + band;
  const double mu0 = a1 * v1 + a2 * v2;

  double k = 0.0, top = v2;
  if (low_target) {
    const double d = v2 - v1;
    const double m = mu0 - tau;
    k = (m - std::sqrt(std::max(0.0, m * m - 4.0 * a1 * tau * d))) / (2.0 * a1 * d);
  } else {
    const double ceiling = spread ? hi_rev : v1;
    if (!(ceiling - tau > 0.0)) {
      std::ostringstream os;
      os.precision(12);
      os << "revenue target tau = " << tau << " equals Pi0 = " << rep.pi0
         << "; the fragility diverges";
      throw InfeasibleTargetError(tau, rep.pi0, os.str());
    }
    k = tau / (ceiling - tau);
    if (!spread) top = v1;
  }
  rep.k_pp = k;
  rep.p_pp = k / (k + 1.0) * top;
  const auto ref = Distribution::empirical({{v1, a1}, {v2, a2}});
  rep.rho_at_solution = rho_pp(ref, rep.p_pp, k);
  rep.residual = std::abs(rep.rho_at_solution - tau);
  return rep;
}

}  // namespace rsmech
