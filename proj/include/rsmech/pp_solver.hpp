#pragma once

#include <string>
#include <vector>

#include "rsmech/distribution.hpp"
#include "rsmech/mechanism.hpp"
#include "rsmech/numerics.hpp"

namespace rsmech {

struct PPSolveReport {
  double tau = 0.0;
  double pi0 = 0.0;
  double k_pp = 0.0;
  double p_pp = 0.0;
  double rho_at_solution = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::vector<std::string> diagnostics;

  PostedPrice mechanism() const { return PostedPrice(p_pp); }
};

/// E[min{p, k (v - p)^+}] under the reference.
double rho_pp(const Distribution& dist, double p, double k);

/// Price maximising rho_pp(., k).
double optimal_price_given_k(const Distribution& dist, double k, const Tolerances& tol = {});

/// rho_pp at the optimal price.
double rho_pp_star(const Distribution& dist, double k, const Tolerances& tol = {});

PPSolveReport solve_pp(const Distribution& dist, double tau, const Tolerances& tol = {});

/// Closed form for a two-point reference {(v1, a1), (v2, a2)}.
PPSolveReport solve_pp_two_point(double v1, double a1, double v2, double a2, double tau);

}  // namespace rsmech
