#include "rsmech/rs_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

constexpr double kFloorFactor = 1e-300;
constexpr double kMinK = 1e-9;
constexpr double kMaxK = 1e6;

double split(double lo, double hi) {
  if (lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
  return lo + 0.5 * (hi - lo);
}

}  // namespace

void check_target(double tau, double pi0) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw_invalid("revenue target must be positive");
  if (tau >= pi0 - 1e-9) {
    std::ostringstream os;
    os.precision(12);
    os << "revenue target tau = " << tau << " is infeasible: it must be below Pi0 = " << pi0;
    throw InfeasibleTargetError(tau, pi0, os.str());
  }
}

double fragility_adjusted_revenue(const Distribution& dist, double pi, double k,
                                  const Tolerances& tol) {
  if (!(k > 0.0)) throw_invalid("fragility must be positive");
  return pi + k * gap_only(dist, pi, tol);
}

PiStarResult pi_star_detail(const Distribution& dist, double k, const Tolerances& tol) {
  if (!(k > 0.0) || !std::isfinite(k)) throw_invalid("fragility must be positive and finite");
  const double pi0 = dist.max_posted_revenue().revenue;
  if (!(pi0 > 0.0)) throw_invalid("reference has zero posted-price revenue");
  const double target = 1.0 / k;
  PiStarResult out;

  IsoRevenueCut top = cut(dist, pi0, tol);
  if (top.log_sum >= target) {
    out.pi = pi0;
    out.cut = std::move(top);
    out.diagnostics.push_back("log_sum at Pi0 already reaches 1/k; pi* is the upper boundary");
    return out;
  }
  double lo = pi0 * kFloorFactor;
  IsoRevenueCut bottom = cut(dist, lo, tol);
  if (bottom.log_sum <= target) {
    out.pi = lo;
    out.cut = std::move(bottom);
    out.diagnostics.push_back("root lies below the representable floor; pi* clamped near 0");
    return out;
  }
  double hi = pi0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 400; ++it) {
    const double mid = split(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    IsoRevenueCut c = cut(dist, mid, tol);
    out.iterations = it + 1;
    const double err = std::abs(k * c.log_sum - 1.0);
    const bool larger = c.log_sum > target;
    if (err <= best_err) {
      best_err = err;
      out.pi = mid;
      out.cut = std::move(c);
    }
    if (larger)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol.root_width * hi) break;
  }
  return out;
}

double pi_star(const Distribution& dist, double k, const Tolerances& tol) {
  return pi_star_detail(dist, k, tol).pi;
}

double rho_star(const Distribution& dist, double k, const Tolerances& tol) {
  const auto ps = pi_star_detail(dist, k, tol);
  return ps.pi + k * ps.cut.gap;
}

SolveReport solve_rs(const Distribution& dist, double tau, const Tolerances& tol) {
  SolveReport rep;
  rep.tau = tau;
  rep.pi0 = dist.max_posted_revenue().revenue;
  check_target(tau, rep.pi0);

  const auto rho = [&](double k) { return rho_star(dist, k, tol); };
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

  auto ps = pi_star_detail(dist, k, tol);
  rep.k_star = k;
  rep.pi_star = ps.pi;
  rep.rho_at_solution = ps.pi + k * ps.cut.gap;
  rep.residual = std::abs(rep.rho_at_solution - tau);
  rep.diagnostics.insert(rep.diagnostics.end(), ps.diagnostics.begin(), ps.diagnostics.end());
  if (rep.residual > tol.root_residual) {
    std::ostringstream os;
    os << "target residual " << rep.residual << " above tolerance " << tol.root_residual;
    rep.diagnostics.push_back(os.str());
  }
  const double foc = std::abs(k * ps.cut.log_sum - 1.0);
  if (foc > 1e-8) {
    std::ostringstream os;
    os << "first-order condition |k log_sum - 1| = " << foc;
    rep.diagnostics.push_back(os.str());
  }
  rep.mechanism = RandomizedLogMechanism(k, ps.cut.intervals, ps.pi,
                                         dist.max_posted_revenue().price);
  rep.cut = std::move(ps.cut);
  return rep;
}

}  // namespace rsmech
