#include "rsmech/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "rsmech/errors.hpp"

namespace rsmech {

// Quantile table for kinds without a closed-form inverse: nodes x_j at
// probabilities j / N and the slopes dx/du = 1 / density there.
struct QuantileTable {
  std::vector<double> x;
  std::vector<double> slope;  // NaN where the density vanishes or blows up
};

struct Distribution::Impl {
  DistKind kind = DistKind::Uniform;
  double a = 0.0;     // alpha / rate / shape
  double b = 0.0;     // beta
  double norm = 1.0;  // truncation constant
  std::vector<Atom> atoms;
  std::vector<double> above;  // above[i] = mass strictly greater than atoms[i].value
  std::vector<Distribution> comps;
  std::vector<double> weights;

  mutable std::once_flag profile_once;
  mutable std::unique_ptr<RevenueProfile> profile;
  mutable std::once_flag optimum_once;
  mutable PostedOptimum optimum;
  mutable std::once_flag quantile_once;
  mutable std::unique_ptr<QuantileTable> quantile_table;
};

namespace {

constexpr std::size_t kProfileIntervals = 100000;
constexpr std::size_t kQuantileNodes = 1024;

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << what << ": valuation " << x << " outside [0, 1]";
    throw_domain(os.str());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Mass strictly above x for sorted atoms.
double mass_above(const Distribution::Impl& d, double x) {
  auto it = std::upper_bound(d.atoms.begin(), d.atoms.end(), x,
                             [](double v, const Atom& a) { return v < a.value; });
  if (it == d.atoms.begin()) return 1.0;
  return d.above[static_cast<std::size_t>(it - d.atoms.begin()) - 1];
}

// Mass at or above x.
double mass_at_or_above(const Distribution::Impl& d, double x) {
  auto it = std::lower_bound(d.atoms.begin(), d.atoms.end(), x,
                             [](const Atom& a, double v) { return a.value < v; });
  if (it == d.atoms.begin()) return 1.0;
  return d.above[static_cast<std::size_t>(it - d.atoms.begin()) - 1];
}

double empirical_ccdf_integral(const Distribution::Impl& d, double a, double b) {
  // ccdf is 1 on [0, v1), above[i] on [v_i, v_{i+1}), 0 after v_N.
  double total = 0.0;
  double level = 1.0;
  double left = 0.0;
  for (std::size_t i = 0; i <= d.atoms.size(); ++i) {
    const double right = i < d.atoms.size() ? d.atoms[i].value : 1.0;
    const double lo = std::max(left, a);
    const double hi = std::min(right, b);
    if (hi > lo) total += level * (hi - lo);
    if (i < d.atoms.size()) {
      level = d.above[i];
      left = right;
    }
  }
  return total;
}

double bisect_cdf(const Distribution& dist, double u, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(hi, 1e-300); ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (dist.cdf(mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

void build_quantile_table(const Distribution& dist, QuantileTable& t) {
  t.x.assign(kQuantileNodes + 1, 0.0);
  t.slope.assign(kQuantileNodes + 1, std::numeric_limits<double>::quiet_NaN());
  t.x.back() = 1.0;
  for (std::size_t j = 1; j < kQuantileNodes; ++j)
    t.x[j] = bisect_cdf(dist, static_cast<double>(j) / kQuantileNodes, t.x[j - 1], 1.0);
  if (!dist.jump_points().empty()) return;
  for (std::size_t j = 1; j < kQuantileNodes; ++j) {
    const double f = dist.density(t.x[j]);
    if (f > 0.0 && std::isfinite(f)) t.slope[j] = 1.0 / f;
  }
}

// Cubic Hermite guess inside table cell j, refined by Newton on the CDF with a
// bisection safeguard. Stops once a Newton step is below 1e-8 of the distance
// to the nearer endpoint, which leaves an error of order 1e-16 there thanks to
// quadratic convergence even where the density is singular.
double table_quantile(const Distribution& dist, const QuantileTable& t, double u) {
  const auto j = std::min(static_cast<std::size_t>(u * kQuantileNodes), kQuantileNodes - 1);
  double lo = t.x[j], hi = t.x[j + 1];
  if (hi <= lo) return lo;
  const bool smooth = !std::isnan(t.slope[j]) && !std::isnan(t.slope[j + 1]);
  if (!smooth && !dist.jump_points().empty()) return bisect_cdf(dist, u, lo, hi);
  const double h = 1.0 / kQuantileNodes;
  const double s = (u - static_cast<double>(j) * h) / h;
  double x = lo + s * (hi - lo);
  if (smooth) {
    const double s2 = s * s, s3 = s2 * s;
    x = (2 * s3 - 3 * s2 + 1) * lo + (s3 - 2 * s2 + s) * h * t.slope[j] +
        (-2 * s3 + 3 * s2) * hi + (s3 - s2) * h * t.slope[j + 1];
    if (!(x > lo && x < hi)) x = lo + s * (hi - lo);
  }
  for (int it = 0; it < 100; ++it) {
    const double f = dist.cdf(x) - u;
    if (f == 0.0) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double dens = dist.density(x);
    double next = dens > 0.0 && std::isfinite(dens) ? x - f / dens : lo + 0.5 * (hi - lo);
    const bool newton = next > lo && next < hi;
    if (!newton) next = lo + 0.5 * (hi - lo);
    if (newton && std::abs(next - x) <= 1e-8 * std::min(x, 1.0 - x)) return next;
    if (hi - lo <= 1e-15 * hi) return next;
    x = next;
  }
  return lo + 0.5 * (hi - lo);
}

void build_profile(const Distribution& dist, RevenueProfile& prof) {
  std::vector<double> xs(kProfileIntervals + 1);
  for (std::size_t i = 0; i <= kProfileIntervals; ++i)
    xs[i] = static_cast<double>(i) / static_cast<double>(kProfileIntervals);
  for (double j : dist.jump_points()) {
    xs.push_back(j);
    if (j > 0.0) xs.push_back(std::nextafter(j, 0.0));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const auto rev = [&](double x) { return x * dist.ccdf(x); };
  auto sample = [&](std::vector<double> grid) {
    prof.x = std::move(grid);
    prof.r.resize(prof.x.size());
    for (std::size_t i = 0; i < prof.x.size(); ++i) prof.r[i] = rev(prof.x[i]);
  };
  auto turning_points = [&]() {
    std::vector<std::size_t> turns;
    int dir = 0;
    for (std::size_t i = 0; i + 1 < prof.r.size(); ++i) {
      const double diff = prof.r[i + 1] - prof.r[i];
      const int d = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
      if (d == 0) continue;
      if (dir != 0 && d != dir) turns.push_back(i);
      dir = d;
    }
    return turns;
  };

  sample(std::move(xs));
  const auto jumps = dist.jump_points();
  auto near_jump = [&](double x) {
    return std::any_of(jumps.begin(), jumps.end(), [&](double j) {
      return x == j || x == std::nextafter(j, 0.0);
    });
  };
  // Refine interior extrema between grid nodes so narrow bumps are not lost.
  std::vector<double> extra;
  for (std::size_t t : turning_points()) {
    if (t == 0 || t + 1 >= prof.x.size() || near_jump(prof.x[t])) continue;
    const bool is_max = prof.r[t] >= prof.r[t - 1];
    const auto opt = is_max ? golden_max(rev, prof.x[t - 1], prof.x[t + 1], 120)
                            : golden_min(rev, prof.x[t - 1], prof.x[t + 1], 120);
    extra.push_back(opt.x);
  }
  if (!extra.empty()) {
    std::vector<double> grid = prof.x;
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    sample(std::move(grid));
  }
  prof.run_bounds.clear();
  prof.run_bounds.push_back(0);
  for (std::size_t t : turning_points()) prof.run_bounds.push_back(t);
  prof.run_bounds.push_back(prof.x.size() - 1);
}

}  // namespace

const char* to_string(DistKind kind) noexcept {
  switch (kind) {
    case DistKind::Uniform: return "uniform";
    case DistKind::Power: return "power";
    case DistKind::TruncatedExponential: return "truncated_exponential";
    case DistKind::Beta: return "beta";
    case DistKind::TruncatedPareto: return "truncated_pareto";
    case DistKind::Empirical: return "empirical";
    case DistKind::Mixture: return "mixture";
  }
  return "unknown";
}

Distribution Distribution::uniform() {
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::Uniform;
  return Distribution(std::move(impl));
}

Distribution Distribution::power(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw_invalid("power distribution requires alpha >= 1, got " + fmt(alpha));
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::Power;
  impl->a = alpha;
  return Distribution(std::move(impl));
}

Distribution Distribution::truncated_exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw_invalid("truncated exponential requires rate > 0, got " + fmt(rate));
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::TruncatedExponential;
  impl->a = rate;
  impl->norm = -std::expm1(-rate);
  return Distribution(std::move(impl));
}

Distribution Distribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw_invalid("beta distribution requires alpha, beta > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::Beta;
  impl->a = alpha;
  impl->b = beta;
  return Distribution(std::move(impl));
}

Distribution Distribution::truncated_pareto(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw_invalid("truncated pareto requires shape > 0, got " + fmt(shape));
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::TruncatedPareto;
  impl->a = shape;
  impl->norm = 1.0 / (1.0 - std::pow(2.0, -shape));
  return Distribution(std::move(impl));
}

Distribution Distribution::empirical(std::vector<Atom> atoms) {
  if (atoms.empty()) throw_invalid("empirical distribution needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.value >= 0.0 && a.value <= 1.0))
      throw_invalid("empirical atom " + fmt(a.value) + " outside [0, 1]");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw_invalid("empirical atom masses must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.value < r.value; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  const double total = std::accumulate(merged.begin(), merged.end(), 0.0,
                                       [](double s, const Atom& a) { return s + a.mass; });
  if (std::abs(total - 1.0) > 1e-9)
    throw_invalid("empirical masses must sum to 1, got " + fmt(total));
  for (auto& a : merged) a.mass /= total;

  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::Empirical;
  impl->above.resize(merged.size());
  double tail = 0.0;
  for (std::size_t i = merged.size(); i-- > 0;) {
    impl->above[i] = tail;
    tail += merged[i].mass;
  }
  impl->atoms = std::move(merged);
  return Distribution(std::move(impl));
}

Distribution Distribution::dirac(double value) { return empirical({{value, 1.0}}); }

Distribution Distribution::mixture(std::vector<Distribution> components,
                                   std::vector<double> weights) {
  if (components.empty() || components.size() != weights.size())
    throw_invalid("mixture needs matching, non-empty components and weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw_invalid("mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw_invalid("mixture weights must sum to 1");
  for (double& w : weights) w /= total;
  auto impl = std::make_shared<Impl>();
  impl->kind = DistKind::Mixture;
  impl->comps = std::move(components);
  impl->weights = std::move(weights);
  return Distribution(std::move(impl));
}

DistKind Distribution::kind() const noexcept { return impl_->kind; }

double Distribution::ccdf(double x) const {
  check_unit(x, "ccdf");
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform: return 1.0 - x;
    case DistKind::Power: return 1.0 - std::pow(x, d.a);
    case DistKind::TruncatedExponential:
      return std::max(0.0, (std::exp(-d.a * x) - std::exp(-d.a)) / d.norm);
    case DistKind::Beta:
      if (x <= 0.0) return 1.0;
      if (x >= 1.0) return 0.0;
      return boost::math::ibetac(d.a, d.b, x);
    case DistKind::TruncatedPareto:
      return std::max(0.0, d.norm * (std::pow(1.0 + x, -d.a) - std::pow(2.0, -d.a)));
    case DistKind::Empirical: return mass_above(d, x);
    case DistKind::Mixture: {
      double s = 0.0;
      for (std::size_t i = 0; i < d.comps.size(); ++i) s += d.weights[i] * d.comps[i].ccdf(x);
      return s;
    }
  }
  return 0.0;
}

double Distribution::ccdf_left(double x) const {
  if (!(x > 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "ccdf_left: valuation " << x << " outside (0, 1]";
    throw_domain(os.str());
  }
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Empirical: return mass_at_or_above(d, x);
    case DistKind::Mixture: {
      double s = 0.0;
      for (std::size_t i = 0; i < d.comps.size(); ++i)
        s += d.weights[i] * d.comps[i].ccdf_left(x);
      return s;
    }
    default: return ccdf(x);
  }
}

double Distribution::density(double x) const {
  check_unit(x, "density");
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform: return 1.0;
    case DistKind::Power: return d.a * std::pow(x, d.a - 1.0);
    case DistKind::TruncatedExponential: return d.a * std::exp(-d.a * x) / d.norm;
    case DistKind::Beta: return boost::math::ibeta_derivative(d.a, d.b, x);
    case DistKind::TruncatedPareto: return d.norm * d.a * std::pow(1.0 + x, -d.a - 1.0);
    case DistKind::Empirical: return 0.0;
    case DistKind::Mixture: {
      double s = 0.0;
      for (std::size_t i = 0; i < d.comps.size(); ++i) s += d.weights[i] * d.comps[i].density(x);
      return s;
    }
  }
  return 0.0;
}

double Distribution::ccdf_integral(double a, double b) const {
  if (a > b) return -ccdf_integral(b, a);
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (!(b > a)) return 0.0;
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform: return (b - a) - 0.5 * (b * b - a * a);
    case DistKind::Power:
      return (b - a) - (std::pow(b, d.a + 1.0) - std::pow(a, d.a + 1.0)) / (d.a + 1.0);
    case DistKind::TruncatedExponential: {
      const double lam = d.a;
      const double head = std::exp(-lam * a) * (-std::expm1(-lam * (b - a))) / lam;
      return (head - std::exp(-lam) * (b - a)) / d.norm;
    }
    case DistKind::Beta: {
      // Integration by parts: int ccdf = [x ccdf(x)] + E[v; a < v <= b].
      namespace bm = boost::math;
      const double s = d.a / (d.a + d.b);
      const double partial = s * (bm::ibeta(d.a + 1.0, d.b, b) - bm::ibeta(d.a + 1.0, d.b, a));
      return b * ccdf(b) - a * ccdf(a) + partial;
    }
    case DistKind::TruncatedPareto: {
      const double s = d.a;
      const double body = std::abs(s - 1.0) < 1e-12
                              ? std::log((1.0 + b) / (1.0 + a))
                              : (std::pow(1.0 + a, 1.0 - s) - std::pow(1.0 + b, 1.0 - s)) / (s - 1.0);
      return d.norm * (body - std::pow(2.0, -s) * (b - a));
    }
    case DistKind::Empirical: return empirical_ccdf_integral(d, a, b);
    case DistKind::Mixture: {
      double s = 0.0;
      for (std::size_t i = 0; i < d.comps.size(); ++i)
        s += d.weights[i] * d.comps[i].ccdf_integral(a, b);
      return s;
    }
  }
  return 0.0;
}

double Distribution::mean() const {
  const Impl& d = *impl_;
  if (d.kind == DistKind::Beta) return d.a / (d.a + d.b);
  if (d.kind == DistKind::Empirical) {
    double s = 0.0;
    for (const auto& at : d.atoms) s += at.value * at.mass;
    return s;
  }
  return ccdf_integral(0.0, 1.0);
}

double Distribution::revenue(double p) const {
  check_unit(p, "revenue");
  if (p == 0.0) return 0.0;
  return p * ccdf_left(p);
}

PostedOptimum Distribution::max_posted_revenue() const {
  const Impl& d = *impl_;
  std::call_once(d.optimum_once, [&] {
    PostedOptimum best{0.0, 0.0};
    auto consider = [&](double p) {
      if (!(p > 0.0 && p <= 1.0)) return;
      const double r = revenue(p);
      if (r > best.revenue) best = {r, p};
    };
    if (d.kind == DistKind::Empirical) {
      for (const auto& at : d.atoms) consider(at.value);
    } else if (d.kind == DistKind::Uniform) {
      best = {0.25, 0.5};
    } else {
      const auto& prof = revenue_profile();
      for (std::size_t i = 0; i < prof.x.size(); ++i)
        if (prof.r[i] > best.revenue) best = {prof.r[i], prof.x[i]};
      for (double j : jump_points()) consider(j);
      // Interior maxima were refined while the profile was built; refine once
      // more around the winner with the left-continuous revenue.
      auto it = std::lower_bound(prof.x.begin(), prof.x.end(), best.price);
      const std::size_t i = static_cast<std::size_t>(it - prof.x.begin());
      const double lo = prof.x[i > 0 ? i - 1 : 0];
      const double hi = prof.x[std::min(i + 1, prof.x.size() - 1)];
      const auto opt = golden_max([&](double p) { return p > 0.0 ? revenue(p) : 0.0; }, lo, hi);
      consider(opt.x);
    }
    d.optimum = best;
  });
  return d.optimum;
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw_domain("quantile: probability outside [0, 1]");
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform: return u;
    case DistKind::Power: return std::pow(u, 1.0 / d.a);
    case DistKind::TruncatedExponential:
      return std::min(1.0, -std::log1p(-u * d.norm) / d.a);
    case DistKind::TruncatedPareto:
      return std::clamp(std::pow(1.0 - u / d.norm, -1.0 / d.a) - 1.0, 0.0, 1.0);
    case DistKind::Beta:
    case DistKind::Mixture: {
      if (u >= 1.0) return d.kind == DistKind::Beta ? 1.0 : bisect_cdf(*this, u, 0.0, 1.0);
      if (cdf(0.0) >= u) return 0.0;
      std::call_once(d.quantile_once, [&] {
        d.quantile_table = std::make_unique<QuantileTable>();
        build_quantile_table(*this, *d.quantile_table);
      });
      return table_quantile(*this, *d.quantile_table, u);
    }
    case DistKind::Empirical: {
      double cum = 0.0;
      for (const auto& at : d.atoms) {
        cum += at.mass;
        if (cum >= u) return at.value;
      }
      return d.atoms.back().value;
    }
  }
  return 0.0;
}

bool Distribution::is_discrete() const noexcept {
  const Impl& d = *impl_;
  if (d.kind == DistKind::Empirical) return true;
  if (d.kind == DistKind::Mixture)
    return std::all_of(d.comps.begin(), d.comps.end(),
                       [](const Distribution& c) { return c.is_discrete(); });
  return false;
}

std::span<const Atom> Distribution::atoms() const noexcept { return impl_->atoms; }

std::vector<double> Distribution::jump_points() const {
  const Impl& d = *impl_;
  std::vector<double> out;
  if (d.kind == DistKind::Empirical) {
    for (const auto& at : d.atoms) out.push_back(at.value);
  } else if (d.kind == DistKind::Mixture) {
    for (const auto& c : d.comps) {
      auto j = c.jump_points();
      out.insert(out.end(), j.begin(), j.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

bool Distribution::is_regular() const noexcept {
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform:
    case DistKind::Power:
    case DistKind::TruncatedExponential:
    case DistKind::TruncatedPareto: return true;
    case DistKind::Beta: return d.a >= 1.0 && d.b >= 1.0;
    default: return false;
  }
}

bool Distribution::has_increasing_hazard() const noexcept {
  const Impl& d = *impl_;
  switch (d.kind) {
    case DistKind::Uniform:
    case DistKind::Power:
    case DistKind::TruncatedExponential: return true;
    case DistKind::Beta: return d.a >= 1.0 && d.b >= 1.0;
    default: return false;
  }
}

const RevenueProfile& Distribution::revenue_profile() const {
  const Impl& d = *impl_;
  std::call_once(d.profile_once, [&] {
    auto prof = std::make_unique<RevenueProfile>();
    build_profile(*this, *prof);
    d.profile = std::move(prof);
  });
  return *d.profile;
}

std::string Distribution::describe() const {
  const Impl& d = *impl_;
  std::ostringstream os;
  switch (d.kind) {
    case DistKind::Uniform: os << "uniform"; break;
    case DistKind::Power: os << "power(" << d.a << ")"; break;
    case DistKind::TruncatedExponential: os << "truncated_exponential(" << d.a << ")"; break;
    case DistKind::Beta: os << "beta(" << d.a << "," << d.b << ")"; break;
    case DistKind::TruncatedPareto: os << "truncated_pareto(" << d.a << ")"; break;
    case DistKind::Empirical: {
      os << "empirical{";
      for (std::size_t i = 0; i < d.atoms.size(); ++i)
        os << (i ? "," : "") << "(" << d.atoms[i].value << "," << d.atoms[i].mass << ")";
      os << "}";
      break;
    }
    case DistKind::Mixture: {
      os << "mixture{";
      for (std::size_t i = 0; i < d.comps.size(); ++i)
        os << (i ? "," : "") << d.weights[i] << "*" << d.comps[i].describe();
      os << "}";
      break;
    }
  }
  return os.str();
}

double Distribution::param_a() const noexcept { return impl_->a; }
double Distribution::param_b() const noexcept { return impl_->b; }
std::span<const Distribution> Distribution::components() const noexcept { return impl_->comps; }
std::span<const double> Distribution::weights() const noexcept { return impl_->weights; }

double wasserstein_distance(const Distribution& p, const Distribution& q, const Tolerances& tol) {
  std::vector<double> breaks = p.jump_points();
  auto qj = q.jump_points();
  breaks.insert(breaks.end(), qj.begin(), qj.end());
  breaks.push_back(0.0);
  breaks.push_back(1.0);

  const auto diff = [&](double x) { return p.ccdf(x) - q.ccdf(x); };
  if (!(p.is_discrete() && q.is_discrete())) {
    // Locate sign changes of the CCDF difference between breakpoints.
    constexpr int kScan = 2000;
    std::vector<double> scan(breaks);
    for (int i = 1; i < kScan; ++i) scan.push_back(static_cast<double>(i) / kScan);
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      // Evaluate just inside the cell so jumps at the ends do not count.
      const double span = scan[i + 1] - scan[i];
      double lo = scan[i] + 1e-12 * span, hi = scan[i + 1] - 1e-12 * span;
      const double flo = diff(lo), fhi = diff(hi);
      if ((flo > 0.0 && fhi < 0.0) || (flo < 0.0 && fhi > 0.0)) {
        const bool increasing = fhi > flo;
        auto root = bisect(diff, lo, hi, 0.0, increasing,
                           Tolerances{0.0, 1e-15, tol.quad_abs, tol.quad_max_depth});
        breaks.push_back(root.x);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    total += std::abs(p.ccdf_integral(a, b) - q.ccdf_integral(a, b));
  }
  return total;
}

}  // namespace rsmech
