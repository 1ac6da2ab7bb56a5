#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace rsmech {

/// Numerical tolerances shared by every solver. Defaults are the library
/// defaults; the CLI can override the root and quadrature tolerances.
struct Tolerances {
  double root_residual = 1e-10;  // |f(x) - target| accepted by bisection
  double root_width = 1e-12;     // bracket width (relative to |hi|) accepted by bisection
  double quad_abs = 1e-10;       // absolute tolerance of adaptive Simpson
  int quad_max_depth = 60;       // subdivision cap of adaptive Simpson
};

struct RootResult {
  double x = 0.0;
  double value = 0.0;  // f(x)
  int iterations = 0;
  bool residual_met = false;
};

/// Solves f(x) = target on [lo, hi] for a monotone f by bisection.
/// `increasing` gives the direction of f. When `geometric` is set and the
/// bracket spans more than a factor of four on the positive axis, the
/// midpoint is geometric, which resolves roots near zero in relative terms.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double target,
                  bool increasing, const Tolerances& tol, bool geometric = false,
                  int max_iterations = 400);

/// Adaptive Simpson on [a, b]. `splits` are interior points where the
/// integrand may have kinks or jumps; each sub-panel is integrated separately.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> splits, double abs_tol, int max_depth);

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const Tolerances& tol) {
  return integrate(f, a, b, {}, tol.quad_abs, tol.quad_max_depth);
}

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximisation of a unimodal function on [lo, hi].
ScalarOptimum golden_max(const std::function<double(double)>& f, double lo, double hi,
                         int iterations = 200);

/// Golden-section minimisation.
ScalarOptimum golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iterations = 200);

}  // namespace rsmech
