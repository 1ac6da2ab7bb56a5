#pragma once

#include <string>
#include <vector>

#include "rsmech/distribution.hpp"
#include "rsmech/numerics.hpp"

namespace rsmech {

struct Interval {
  double u = 0.0;
  double w = 0.0;
};

/// Where the reference CCDF weakly exceeds pi / x, and the Wasserstein gap
/// between the reference and min{ccdf, pi / x}.
struct IsoRevenueCut {
  double pi = 0.0;
  std::vector<Interval> intervals;
  double gap = 0.0;
  double log_sum = 0.0;  // sum of ln(w/u); +inf at pi = 0
  std::vector<std::string> diagnostics;
};

/// Errors: InfeasibleTargetError if pi exceeds the posted-price optimum,
/// InvalidArgument if pi < 0.
IsoRevenueCut cut(const Distribution& dist, double pi, const Tolerances& tol = {});

double gap_only(const Distribution& dist, double pi, const Tolerances& tol = {});

/// min{ccdf(x), pi / x} clipped to [0, 1], for x in (0, 1].
double worst_case_ccdf(const Distribution& dist, double pi, double x);

}  // namespace rsmech
