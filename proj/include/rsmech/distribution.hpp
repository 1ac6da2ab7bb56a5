#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rsmech/numerics.hpp"

namespace rsmech {

enum class DistKind {
  Uniform,
  Power,
  TruncatedExponential,
  Beta,
  TruncatedPareto,
  Empirical,
  Mixture,
};

const char* to_string(DistKind kind) noexcept;

struct Atom {
  double value = 0.0;
  double mass = 0.0;
};

struct PostedOptimum {
  double revenue = 0.0;  // Pi0
  double price = 0.0;
};

/// Sampled revenue curve x * ccdf(x) on [0, 1], split into monotone runs.
/// Built lazily for kinds that are not purely discrete; the iso-revenue cut
/// uses it to bracket level crossings without rescanning the CCDF.
struct RevenueProfile {
  std::vector<double> x;
  std::vector<double> r;
  std::vector<std::size_t> run_bounds;  // run i covers indices [run_bounds[i], run_bounds[i+1]]
};

/// A valuation distribution supported on [0, 1].
///
/// Immutable value type: copies share the underlying parameters and lazily
/// computed caches, so it is cheap to pass around and safe to read from
/// several threads.
class Distribution {
 public:
  static Distribution uniform();
  /// CDF x^alpha, alpha >= 1.
  static Distribution power(double alpha);
  /// Exponential(rate) conditioned on [0, 1].
  static Distribution truncated_exponential(double rate);
  static Distribution beta(double alpha, double beta);
  /// CDF (1 - (1+x)^-shape) / (1 - 2^-shape) on [0, 1].
  static Distribution truncated_pareto(double shape);
  /// Atoms are sorted and equal values merged; masses must sum to 1 (within 1e-9).
  static Distribution empirical(std::vector<Atom> atoms);
  static Distribution dirac(double value);
  static Distribution mixture(std::vector<Distribution> components, std::vector<double> weights);

  DistKind kind() const noexcept;

  /// Prob(v > x). Domain error outside [0, 1].
  double ccdf(double x) const;
  /// Prob(v >= x). Domain error outside (0, 1].
  double ccdf_left(double x) const;
  double cdf(double x) const { return 1.0 - ccdf(x); }
  /// Density of the continuous part; zero for discrete kinds.
  double density(double x) const;
  /// Integral of ccdf over [a, b], analytic for every kind.
  double ccdf_integral(double a, double b) const;
  double mean() const;
  /// Posted-price revenue p * Prob(v >= p).
  double revenue(double p) const;
  PostedOptimum max_posted_revenue() const;
  /// Generalised inverse CDF: inf{x : cdf(x) >= u}.
  double quantile(double u) const;

  bool is_discrete() const noexcept;
  /// Atoms of an empirical distribution (empty otherwise).
  std::span<const Atom> atoms() const noexcept;
  /// Locations where the CCDF jumps, from this distribution or any mixture component.
  std::vector<double> jump_points() const;

  /// Myerson regularity (increasing virtual value), known analytically per kind.
  bool is_regular() const noexcept;
  /// Increasing hazard rate, known analytically per kind.
  bool has_increasing_hazard() const noexcept;

  const RevenueProfile& revenue_profile() const;

  /// Human-readable descriptor, e.g. "beta(2,5)".
  std::string describe() const;

  // Parameter access (meaningful only for the matching kind).
  double param_a() const noexcept;
  double param_b() const noexcept;
  std::span<const Distribution> components() const noexcept;
  std::span<const double> weights() const noexcept;

  struct Impl;

 private:
  explicit Distribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Type-1 Wasserstein distance: integral over [0, 1] of |ccdf_p - ccdf_q|.
/// Exact for two discrete distributions; otherwise the interval is split at
/// jumps and sign changes and each piece is integrated in closed form.
double wasserstein_distance(const Distribution& p, const Distribution& q,
                            const Tolerances& tol = {});

}  // namespace rsmech
