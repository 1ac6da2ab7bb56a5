#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsmech/isorevenue.hpp"
#include "rsmech/mechanism.hpp"

namespace rsmech {

struct ROSolveReport {
  double r = 0.0;
  double pi0 = 0.0;
  double pi_ro_star = 0.0;
  double alpha = 0.0;  // slope 1 / log_sum; 0 for the degenerate posted-price case
  IsoRevenueCut cut;
  RandomizedLogMechanism mechanism{0.0, {}, 0.0};
  std::optional<double> pp_price_uniform;
  int iterations = 0;
  std::vector<std::string> diagnostics;
};

/// Root of d(pi) = r. Throws RadiusTooLarge when r >= mean(dist).
double pi_ro_star(const Distribution& dist, double r, const Tolerances& tol = {});

ROSolveReport solve_ro(const Distribution& dist, double r, const Tolerances& tol = {});

RandomizedLogMechanism build_ro_mechanism(const Distribution& dist, double r,
                                          const Tolerances& tol = {});

/// (1 - sqrt(2 r)) / 2 for r in [0, 0.5].
double ro_pp_price_uniform(double r);

/// Target at which the RS mechanism coincides with the RO mechanism of radius r.
double tau_equiv(const Distribution& dist, double r, const Tolerances& tol = {});

/// Radius whose RO worst-case revenue equals tau, i.e. d(tau).
double radius_for_target(const Distribution& dist, double tau, const Tolerances& tol = {});

}  // namespace rsmech
