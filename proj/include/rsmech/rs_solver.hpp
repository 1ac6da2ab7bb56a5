#pragma once

#include <string>
#include <vector>

#include "rsmech/isorevenue.hpp"
#include "rsmech/mechanism.hpp"

namespace rsmech {

struct PiStarResult {
  double pi = 0.0;
  IsoRevenueCut cut;
  int iterations = 0;
  std::vector<std::string> diagnostics;
};

struct SolveReport {
  double tau = 0.0;
  double pi0 = 0.0;
  double k_star = 0.0;
  double pi_star = 0.0;
  double rho_at_solution = 0.0;
  IsoRevenueCut cut;
  RandomizedLogMechanism mechanism{0.0, {}, 0.0};
  int iterations = 0;
  double residual = 0.0;  // |rho*(k_star) - tau|
  std::vector<std::string> diagnostics;
};

/// rho(pi, k) = pi + k * d(pi).
double fragility_adjusted_revenue(const Distribution& dist, double pi, double k,
                                  const Tolerances& tol = {});

/// Root in (0, Pi0) of log_sum(pi) = 1 / k.
PiStarResult pi_star_detail(const Distribution& dist, double k, const Tolerances& tol = {});
double pi_star(const Distribution& dist, double k, const Tolerances& tol = {});

/// k times the reference mass integral over the cut at pi*(k).
double rho_star(const Distribution& dist, double k, const Tolerances& tol = {});

/// Smallest fragility meeting the target tau, and the optimal mechanism.
/// Throws InfeasibleTargetError when tau >= Pi0 - 1e-9.
SolveReport solve_rs(const Distribution& dist, double tau, const Tolerances& tol = {});

/// Shared by the fragility solvers: rejects tau <= 0 and tau >= Pi0 - 1e-9.
void check_target(double tau, double pi0);

}  // namespace rsmech
