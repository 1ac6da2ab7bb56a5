#include "rsmech/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

void check_valuation(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw_domain("mechanism: valuation outside [0, 1]");
}

}  // namespace

RandomizedLogMechanism::RandomizedLogMechanism(double slope, std::vector<Interval> intervals,
                                               double pi, double fallback_price)
    : slope_(slope), intervals_(std::move(intervals)), pi_(pi), fallback_(fallback_price) {
  if (!intervals_.empty() && !(slope_ > 0.0 && std::isfinite(slope_)))
    throw_invalid("mechanism slope must be positive and finite");
  for (std::size_t j = 0; j < intervals_.size(); ++j) {
    const auto& iv = intervals_[j];
    if (!(iv.u > 0.0 && iv.u < iv.w && iv.w <= 1.0))
      throw_invalid("mechanism intervals must satisfy 0 < u < w <= 1");
    if (j > 0 && iv.u < intervals_[j - 1].w) throw_invalid("mechanism intervals must be ordered");
  }
  cum_log_.reserve(intervals_.size());
  cum_len_.reserve(intervals_.size());
  for (const auto& iv : intervals_) {
    cum_log_.push_back(log_total_);
    cum_len_.push_back(len_total_);
    log_total_ += std::log(iv.w / iv.u);
    len_total_ += iv.w - iv.u;
  }
}

std::size_t RandomizedLogMechanism::locate(double v) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), v,
                             [](double x, const Interval& iv) { return x < iv.u; });
  if (it == intervals_.begin()) return npos;
  return static_cast<std::size_t>(it - intervals_.begin()) - 1;
}

double RandomizedLogMechanism::allocation(double v) const {
  check_valuation(v);
  if (intervals_.empty()) return v >= fallback_ ? 1.0 : 0.0;
  if (v >= intervals_.back().w) return 1.0;
  const std::size_t j = locate(v);
  if (j == npos) return 0.0;
  const auto& iv = intervals_[j];
  const double inner = v < iv.w ? std::log(v / iv.u) : std::log(iv.w / iv.u);
  return std::min(1.0, slope_ * (cum_log_[j] + inner));
}

double RandomizedLogMechanism::payment(double v) const {
  check_valuation(v);
  if (intervals_.empty()) return v >= fallback_ ? fallback_ : 0.0;
  if (v >= intervals_.back().w) return slope_ * len_total_;
  const std::size_t j = locate(v);
  if (j == npos) return 0.0;
  const auto& iv = intervals_[j];
  return slope_ * (cum_len_[j] + (std::min(v, iv.w) - iv.u));
}

PriceMoments RandomizedLogMechanism::price_statistics() const {
  PriceMoments out;
  if (intervals_.empty()) {
    out.mean = fallback_;
    return out;
  }
  // E[p^n] = slope * sum (w^n - u^n) / n, plus any mass left at the top endpoint.
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (const auto& iv : intervals_) {
    e1 += iv.w - iv.u;
    e2 += (iv.w * iv.w - iv.u * iv.u) / 2.0;
    e3 += (iv.w * iv.w * iv.w - iv.u * iv.u * iv.u) / 3.0;
  }
  e1 *= slope_;
  e2 *= slope_;
  e3 *= slope_;
  const double residual = 1.0 - slope_ * log_total_;
  if (residual > 0.0) {
    const double top = intervals_.back().w;
    e1 += residual * top;
    e2 += residual * top * top;
    e3 += residual * top * top * top;
  }
  out.mean = e1;
  out.variance = std::max(0.0, e2 - e1 * e1);
  if (out.variance > 0.0) {
    const double sd = std::sqrt(out.variance);
    out.skewness = (e3 - 3.0 * e1 * out.variance - e1 * e1 * e1) / (sd * sd * sd);
  }
  return out;
}

double RandomizedLogMechanism::sample_price(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw_domain("sample_price: probability outside [0, 1]");
  if (intervals_.empty()) return fallback_;
  for (std::size_t j = 0; j < intervals_.size(); ++j) {
    const double top = slope_ * (cum_log_[j] + std::log(intervals_[j].w / intervals_[j].u));
    if (u <= top) {
      const double x = intervals_[j].u * std::exp(u / slope_ - cum_log_[j]);
      return std::clamp(x, intervals_[j].u, intervals_[j].w);
    }
  }
  return intervals_.back().w;
}

std::vector<double> RandomizedLogMechanism::kinks() const {
  std::vector<double> out;
  if (intervals_.empty()) {
    out.push_back(fallback_);
    return out;
  }
  for (const auto& iv : intervals_) {
    out.push_back(iv.u);
    out.push_back(iv.w);
  }
  return out;
}

PostedPrice::PostedPrice(double price) : price_(price) {
  if (!(price >= 0.0 && price <= 1.0)) throw_invalid("posted price outside [0, 1]");
}

double PostedPrice::allocation(double v) const {
  check_valuation(v);
  return v >= price_ ? 1.0 : 0.0;
}

double PostedPrice::payment(double v) const {
  check_valuation(v);
  return v >= price_ ? price_ : 0.0;
}

double allocation(const Mechanism& mech, double v) {
  return std::visit([v](const auto& m) { return m.allocation(v); }, mech);
}

double payment(const Mechanism& mech, double v) {
  return std::visit([v](const auto& m) { return m.payment(v); }, mech);
}

double surplus(const Mechanism& mech, double v) {
  return std::visit([v](const auto& m) { return m.surplus(v); }, mech);
}

std::vector<double> kinks(const Mechanism& mech) {
  return std::visit([](const auto& m) { return m.kinks(); }, mech);
}

std::string describe(const Mechanism& mech) {
  std::ostringstream os;
  os.precision(10);
  if (const auto* pp = std::get_if<PostedPrice>(&mech)) {
    os << "posted_price(p=" << pp->price() << ")";
  } else {
    const auto& rl = std::get<RandomizedLogMechanism>(mech);
    if (rl.degenerate())
      os << "randomized_log(degenerate, p=" << rl.fallback_price() << ")";
    else
      os << "randomized_log(slope=" << rl.slope() << ", J=" << rl.intervals().size() << ")";
  }
  return os.str();
}

std::vector<MechanismRow> tabulate(const Mechanism& mech, std::size_t points) {
  if (points < 2) throw_invalid("mechanism table needs at least 2 points");
  std::vector<MechanismRow> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double v = i + 1 == points ? 1.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const double q = allocation(mech, v);
    const double m = payment(mech, v);
    rows.push_back({v, q, m, q * v - m});
  }
  return rows;
}

}  // namespace rsmech
