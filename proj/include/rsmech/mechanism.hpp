#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rsmech/isorevenue.hpp"

namespace rsmech {

struct PriceMoments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
};

/// Randomised pricing with price density slope / v on a union of intervals.
/// Allocation is slope * (sum of earlier ln(w/u) + ln(v/u_j)) inside interval
/// j, constant on gaps, and exactly 1 from the last upper endpoint on.
///
/// With no intervals the mechanism collapses to a posted price at `fallback`.
class RandomizedLogMechanism {
 public:
  RandomizedLogMechanism(double slope, std::vector<Interval> intervals, double pi,
                         double fallback_price = 0.0);

  double slope() const noexcept { return slope_; }
  double pi() const noexcept { return pi_; }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool degenerate() const noexcept { return intervals_.empty(); }
  double fallback_price() const noexcept { return fallback_; }
  double log_sum() const noexcept { return log_total_; }

  double allocation(double v) const;
  double payment(double v) const;
  double surplus(double v) const { return allocation(v) * v - payment(v); }

  /// Moments of the random price whose CDF is the allocation rule.
  PriceMoments price_statistics() const;
  /// Inverse of the allocation rule, i.e. a price draw from a uniform u.
  double sample_price(double u) const;
  /// Points where q or m are not smooth.
  std::vector<double> kinks() const;

 private:
  std::size_t locate(double v) const;  // index of the last interval with u <= v, or npos

  double slope_;
  std::vector<Interval> intervals_;
  double pi_;
  double fallback_;
  std::vector<double> cum_log_;  // cum_log_[j] = sum_{i<j} ln(w_i/u_i)
  std::vector<double> cum_len_;  // cum_len_[j] = sum_{i<j} (w_i - u_i)
  double log_total_ = 0.0;
  double len_total_ = 0.0;
};

class PostedPrice {
 public:
  explicit PostedPrice(double price);

  double price() const noexcept { return price_; }
  double allocation(double v) const;
  double payment(double v) const;
  double surplus(double v) const { return allocation(v) * v - payment(v); }
  std::vector<double> kinks() const { return {price_}; }

 private:
  double price_;
};

using Mechanism = std::variant<RandomizedLogMechanism, PostedPrice>;

double allocation(const Mechanism& mech, double v);
double payment(const Mechanism& mech, double v);
double surplus(const Mechanism& mech, double v);
std::vector<double> kinks(const Mechanism& mech);
std::string describe(const Mechanism& mech);

struct MechanismRow {
  double v, q, m, surplus;
};

/// Evaluates the mechanism on `points` equally spaced valuations in [0, 1].
std::vector<MechanismRow> tabulate(const Mechanism& mech, std::size_t points);

}  // namespace rsmech
