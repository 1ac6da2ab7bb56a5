#include "rsmech/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

double midpoint(double lo, double hi, bool geometric) {
  if (geometric && lo > 0.0 && hi > 4.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
  return lo + 0.5 * (hi - lo);
}

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
                int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         adaptive(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

double integrate_panel(const std::function<double(double)>& f, double a, double b, double tol,
                       int depth) {
  if (!(b > a)) return 0.0;
  // Evaluate slightly inside the panel so one-sided limits are used at split points.
  const double span = b - a;
  const double ea = a + span * 1e-15;
  const double eb = b - span * 1e-15;
  const double fa = f(ea);
  const double fb = f(eb);
  const double fm = f(0.5 * (a + b));
  return adaptive(f, {a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, tol, depth);
}

}  // namespace

RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double target,
                  bool increasing, const Tolerances& tol, bool geometric, int max_iterations) {
  if (!(hi >= lo)) throw_invalid("bisect: empty bracket");
  RootResult out;
  const auto below = [&](double v) { return increasing ? v < target : v > target; };
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = midpoint(lo, hi, geometric);
    const double v = f(mid);
    out.x = mid;
    out.value = v;
    out.iterations = it + 1;
    if (std::abs(v - target) <= tol.root_residual) {
      out.residual_met = true;
      return out;
    }
    if (below(v))
      lo = mid;
    else
      hi = mid;
    const double scale = std::max(std::abs(hi), std::numeric_limits<double>::min());
    if (hi - lo <= tol.root_width * scale) break;
  }
  out.x = midpoint(lo, hi, geometric);
  out.value = f(out.x);
  out.residual_met = std::abs(out.value - target) <= tol.root_residual;
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> splits, double abs_tol, int max_depth) {
  if (b < a) return -integrate(f, b, a, splits, abs_tol, max_depth);
  std::vector<double> cuts{a};
  for (double s : splits)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double per_panel = abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate_panel(f, cuts[i], cuts[i + 1], per_panel, max_depth);
  return total;
}

ScalarOptimum golden_max(const std::function<double(double)>& f, double lo, double hi,
                         int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarOptimum best{c, fc};
  if (fd > best.value) best = {d, fd};
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

ScalarOptimum golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iterations) {
  auto r = golden_max([&](double x) { return -f(x); }, lo, hi, iterations);
  return {r.x, -r.value};
}

}  // namespace rsmech
