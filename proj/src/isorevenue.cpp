#include "rsmech/isorevenue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

constexpr double kMinWidth = 1e-9;

// Bisects x * ccdf(x) = pi between two profile nodes. `up` means the revenue
// curve crosses the level from below. Returns the endpoint on the side where
// x * ccdf(x) >= pi.
double refine_crossing(const Distribution& d, double pi, double lo, double hi, bool up) {
  if (up && pi > lo && pi < hi) lo = pi;  // x * ccdf(x) <= x < pi below pi
  const auto above = [&](double x) { return x * d.ccdf(x) >= pi; };
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi)
                                                  : lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (above(mid) == up)
      hi = mid;
    else
      lo = mid;
  }
  return up ? hi : lo;
}

void check_level(const Distribution& dist, double pi) {
  if (!(pi >= 0.0) || !std::isfinite(pi)) throw_invalid("revenue level must be finite and >= 0");
  const double pi0 = dist.max_posted_revenue().revenue;
  if (pi > pi0 * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream os;
    os.precision(12);
    os << "revenue level " << pi << " exceeds the posted-price optimum Pi0 = " << pi0;
    throw InfeasibleTargetError(pi, pi0, os.str());
  }
}

IsoRevenueCut cut_empirical(const Distribution& dist, double pi) {
  IsoRevenueCut out;
  out.pi = pi;
  const auto atoms = dist.atoms();
  double level = 1.0;
  double left = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double right = atoms[i].value;
    if (right > left && level > 0.0) {
      const double start = pi / level;
      const double s = std::max(left, start);
      if (s < right) {
        const bool joins = !out.intervals.empty() && out.intervals.back().w == left;
        if (joins && start < left) {
          out.intervals.back().w = right;
        } else {
          if (joins) {
            std::ostringstream os;
            os << "tie: crossing pi/L coincides with atom " << left
               << "; intervals kept separate";
            out.diagnostics.push_back(os.str());
          }
          out.intervals.push_back({s, right});
        }
        const double piece = level * (right - s) - pi * std::log(right / s);
        out.gap += std::max(0.0, piece);
      }
    }
    level = dist.ccdf(right);
    left = right;
  }
  for (const auto& iv : out.intervals) out.log_sum += std::log(iv.w / iv.u);
  return out;
}

IsoRevenueCut cut_continuous(const Distribution& dist, double pi) {
  IsoRevenueCut out;
  out.pi = pi;
  const auto& prof = dist.revenue_profile();
  const auto& x = prof.x;
  const auto& r = prof.r;
  std::vector<Interval> segs;
  const auto push = [&](double a, double b) {
    if (!segs.empty() && segs.back().w == a)
      segs.back().w = b;
    else
      segs.push_back({a, b});
  };
  for (std::size_t k = 0; k + 1 < prof.run_bounds.size(); ++k) {
    const std::size_t i0 = prof.run_bounds[k];
    const std::size_t i1 = prof.run_bounds[k + 1];
    if (i1 <= i0) continue;
    const auto first = r.begin() + static_cast<std::ptrdiff_t>(i0);
    const auto last = r.begin() + static_cast<std::ptrdiff_t>(i1) + 1;
    if (r[i1] >= r[i0]) {
      const auto it = std::lower_bound(first, last, pi);
      if (it == last) continue;
      const auto j = static_cast<std::size_t>(it - r.begin());
      const double a = j == i0 ? x[i0] : refine_crossing(dist, pi, x[j - 1], x[j], true);
      push(a, x[i1]);
    } else {
      const auto it = std::partition_point(first, last, [&](double v) { return v >= pi; });
      const auto j = static_cast<std::size_t>(it - r.begin());
      if (j == i0) continue;
      const double b = j == i1 + 1 ? x[i1] : refine_crossing(dist, pi, x[j - 1], x[j], false);
      push(x[i0], b);
    }
  }
  for (const auto& s : segs) {
    if (s.w - s.u < kMinWidth) {
      std::ostringstream os;
      os << "dropped tangency interval [" << s.u << ", " << s.w << "]";
      out.diagnostics.push_back(os.str());
      continue;
    }
    out.intervals.push_back(s);
    out.log_sum += std::log(s.w / s.u);
    out.gap += std::max(0.0, dist.ccdf_integral(s.u, s.w) - pi * std::log(s.w / s.u));
  }
  return out;
}

}  // namespace

IsoRevenueCut cut(const Distribution& dist, double pi, const Tolerances&) {
  check_level(dist, pi);
  if (pi == 0.0) {
    IsoRevenueCut out;
    out.intervals.push_back({0.0, 1.0});
    out.gap = dist.mean();
    out.log_sum = std::numeric_limits<double>::infinity();
    return out;
  }
  if (dist.kind() == DistKind::Empirical) return cut_empirical(dist, pi);
  return cut_continuous(dist, pi);
}

double gap_only(const Distribution& dist, double pi, const Tolerances& tol) {
  return cut(dist, pi, tol).gap;
}

double worst_case_ccdf(const Distribution& dist, double pi, double x) {
  if (!(x > 0.0 && x <= 1.0)) throw_domain("worst_case_ccdf: valuation outside (0, 1]");
  if (!(pi >= 0.0)) throw_invalid("worst_case_ccdf: revenue level must be >= 0");
  return std::clamp(std::min(dist.ccdf(x), pi / x), 0.0, 1.0);
}

}  // namespace rsmech
