#include "rsmech/ro_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

struct ROLevel {
  double pi = 0.0;
  IsoRevenueCut cut;
  int iterations = 0;
};

void check_radius(const Distribution& dist, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw_invalid("ambiguity radius must be finite and >= 0");
  const double mu0 = dist.mean();
  if (r >= mu0) {
    std::ostringstream os;
    os.precision(12);
    os << "ambiguity radius r = " << r << " must be below the reference mean " << mu0;
    throw Error(ErrorCode::RadiusTooLarge, os.str());
  }
}

ROLevel solve_level(const Distribution& dist, double r, const Tolerances& tol) {
  check_radius(dist, r);
  const double pi0 = dist.max_posted_revenue().revenue;
  ROLevel out;
  if (r == 0.0) {
    out.pi = pi0;
    out.cut = cut(dist, pi0, tol);
    return out;
  }
  double lo = pi0 * 1e-300, hi = pi0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 400; ++it) {
    const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi)
                                                  : lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    IsoRevenueCut c = cut(dist, mid, tol);
    out.iterations = it + 1;
    const double err = std::abs(c.gap - r);
    const bool too_far = c.gap > r;
    if (err <= best_err) {
      best_err = err;
      out.pi = mid;
      out.cut = std::move(c);
    }
    if (too_far)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol.root_width * hi) break;
  }
  return out;
}

}  // namespace

double pi_ro_star(const Distribution& dist, double r, const Tolerances& tol) {
  return solve_level(dist, r, tol).pi;
}

ROSolveReport solve_ro(const Distribution& dist, double r, const Tolerances& tol) {
  ROSolveReport rep;
  rep.r = r;
  rep.pi0 = dist.max_posted_revenue().revenue;
  auto level = solve_level(dist, r, tol);
  rep.pi_ro_star = level.pi;
  rep.iterations = level.iterations;
  const double posted = dist.max_posted_revenue().price;
  if (level.cut.intervals.empty() || r == 0.0) {
    rep.alpha = 0.0;
    rep.mechanism = RandomizedLogMechanism(0.0, {}, level.pi, posted);
    rep.diagnostics.push_back("radius 0: mechanism collapses to the optimal posted price");
  } else {
    rep.alpha = 1.0 / level.cut.log_sum;
    rep.mechanism = RandomizedLogMechanism(rep.alpha, level.cut.intervals, level.pi, posted);
  }
  const double resid = std::abs(level.cut.gap - r);
  if (resid > 1e-9) {
    std::ostringstream os;
    os << "gap residual " << resid << " above 1e-9";
    rep.diagnostics.push_back(os.str());
  }
  if (dist.kind() == DistKind::Uniform && r <= 0.5) rep.pp_price_uniform = ro_pp_price_uniform(r);
  rep.cut = std::move(level.cut);
  return rep;
}

RandomizedLogMechanism build_ro_mechanism(const Distribution& dist, double r,
                                          const Tolerances& tol) {
  return solve_ro(dist, r, tol).mechanism;
}

double ro_pp_price_uniform(double r) {
  if (!(r >= 0.0 && r <= 0.5)) throw_domain("RO posted price needs r in [0, 0.5]");
  return (1.0 - std::sqrt(2.0 * r)) / 2.0;
}

double tau_equiv(const Distribution& dist, double r, const Tolerances& tol) {
  const auto level = solve_level(dist, r, tol);
  if (r == 0.0 || level.cut.intervals.empty()) return level.pi;
  return level.pi + r / level.cut.log_sum;
}

double radius_for_target(const Distribution& dist, double tau, const Tolerances& tol) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw_invalid("revenue target must be positive");
  return gap_only(dist, tau, tol);
}

}  // namespace rsmech
