#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsmech/distribution.hpp"
#include "rsmech/mechanism.hpp"
#include "rsmech/numerics.hpp"

namespace rsmech {

enum class EvalMethod { Quadrature, MonteCarlo };

const char* to_string(EvalMethod method) noexcept;

struct EvalOptions {
  EvalMethod method = EvalMethod::Quadrature;
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
};

struct EvalReport {
  std::string mechanism_id;
  std::string true_dist;
  double expected_revenue = 0.0;
  EvalMethod method = EvalMethod::Quadrature;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double standard_error = 0.0;  // Monte Carlo only
};

/// E_P[m(v)]. Quadrature integrates the CCDF of P against dm, which is exact
/// for the piecewise-linear payments used here; Monte Carlo samples P by
/// inverse CDF.
EvalReport expected_revenue(const Mechanism& mech, const Distribution& truth,
                            const EvalOptions& opts = {});

struct EtaReport {
  double ratio = 0.0;
  double revenue_pp = 0.0;
  double revenue_opt = 0.0;
  double price_pp = 0.0;
  std::vector<std::string> diagnostics;
};

/// Posted-price revenue over optimal RS revenue, both solved at tau on the
/// reference and evaluated under the truth.
EtaReport eta_rs(const Distribution& reference, double tau, const Distribution& truth,
                 const Tolerances& tol = {});

/// Same ratio for the RO pair at radius r. Uniform reference only.
EtaReport eta_ro(const Distribution& reference, double r, const Distribution& truth,
                 const Tolerances& tol = {});

struct CrossingReport {
  // First sign change of a - b for allocation, payment and surplus.
  std::optional<double> v_q, v_m, v_s;
  int changes_q = 0, changes_m = 0, changes_s = 0;
  double min_diff_s = 0.0;  // smallest surplus difference on the grid
  std::vector<std::string> diagnostics;
};

CrossingReport crossing_thresholds(const Mechanism& a, const Mechanism& b,
                                   std::size_t grid_points = 10000);

/// (k - ln k - 1) / (1/k + ln k - 1); tends to 1 as k -> 1+.
double theta_of_kappa(double kappa);

struct ThetaReport {
  double c = 0.0;
  double u = 0.0;
  double w = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double lhs = 0.0;  // R'(u)
  double rhs = 0.0;  // -theta * R'(w)
  bool holds = false;
};

/// Evaluates the sufficient condition R'(u) <= -theta R'(w) with central
/// differences (h = 1e-6). Throws Degenerate unless the cut at c is a single
/// non-trivial interval.
ThetaReport theta_condition(const Distribution& dist, double c, const Tolerances& tol = {});

struct SweepConfig {
  std::vector<double> alphas{0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> betas{0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> tau_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool include_pp = false;  // let PP compete in the preference label
  std::size_t mc_samples = 0;  // 0 disables the Monte Carlo columns
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double tau_over_pi0 = 0.0;
  double tau = 0.0;
  double r = 0.0;
  double rev_rs = 0.0;
  double rev_ro = 0.0;
  double rev_pp = 0.0;
  std::string preferred;  // RS, RO, PP, tie or skipped
  bool in_ambiguity_set = false;
  double wasserstein_to_ref = 0.0;
  bool skipped = false;
  std::string note;
  // Monte Carlo cross-check, present when mc_samples > 0.
  double mc_rs = 0.0, mc_ro = 0.0, mc_pp = 0.0;
  double se_rs = 0.0, se_ro = 0.0, se_pp = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;
};

/// Uniform reference; cells ordered by (alpha, beta, tau fraction).
SweepResult beta_sweep(const SweepConfig& config, const Tolerances& tol = {});

/// Label for the larger of the supplied revenues with a 1e-10 dead band.
std::string classify(double rev_rs, double rev_ro, std::optional<double> rev_pp);

}  // namespace rsmech
