#include "rsmech/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rsmech/errors.hpp"

namespace rsmech {

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field \"") + key + "\"");
  if (!j.at(key).is_number())
    throw Error(ErrorCode::Parse, std::string("field \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

json intervals_json(const std::vector<Interval>& ivs) {
  json arr = json::array();
  for (const auto& iv : ivs) arr.push_back({iv.u, iv.w});
  return arr;
}

json moments_json(const PriceMoments& m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"skewness", m.skewness}};
}

json crossings_json(const CrossingReport& c) {
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"v_q", opt(c.v_q)},
          {"v_m", opt(c.v_m)},
          {"v_s", opt(c.v_s)},
          {"sign_changes", {{"q", c.changes_q}, {"m", c.changes_m}, {"surplus", c.changes_s}}},
          {"min_surplus_difference", c.min_diff_s},
          {"diagnostics", c.diagnostics}};
}

json eta_json(const EtaReport& e) {
  return {{"ratio", std::isfinite(e.ratio) ? json(e.ratio) : json("inf")},
          {"revenue_pp", e.revenue_pp},
          {"revenue_opt", e.revenue_opt},
          {"price_pp", e.price_pp},
          {"diagnostics", e.diagnostics}};
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.at(key).is_array()) throw Error(ErrorCode::Parse, std::string(key) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorCode::Parse, std::string(key) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Distribution distribution_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "distribution must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorCode::Parse, "distribution needs a string field \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return Distribution::uniform();
  if (kind == "power") return Distribution::power(get_number(j, "alpha"));
  if (kind == "beta") return Distribution::beta(get_number(j, "alpha"), get_number(j, "beta"));
  if (kind == "truncated_exponential")
    return Distribution::truncated_exponential(get_number(j, "rate"));
  if (kind == "truncated_pareto") return Distribution::truncated_pareto(get_number(j, "shape"));
  if (kind == "empirical") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw Error(ErrorCode::Parse, "empirical distribution needs an \"atoms\" array");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw Error(ErrorCode::Parse, "each atom must be [value, mass]");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    return Distribution::empirical(std::move(atoms));
  }
  if (kind == "mixture") {
    if (!j.contains("components") || !j.at("components").is_array())
      throw Error(ErrorCode::Parse, "mixture needs a \"components\" array");
    if (!j.contains("weights")) throw Error(ErrorCode::Parse, "mixture needs \"weights\"");
    std::vector<Distribution> comps;
    for (const auto& c : j.at("components")) comps.push_back(distribution_from_json(c));
    return Distribution::mixture(std::move(comps), number_list(j, "weights"));
  }
  throw Error(ErrorCode::Parse, "unknown distribution kind \"" + kind + "\"");
}

Distribution distribution_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
  return distribution_from_json(j);
}

json distribution_to_json(const Distribution& dist) {
  switch (dist.kind()) {
    case DistKind::Uniform: return {{"kind", "uniform"}};
    case DistKind::Power: return {{"kind", "power"}, {"alpha", dist.param_a()}};
    case DistKind::Beta:
      return {{"kind", "beta"}, {"alpha", dist.param_a()}, {"beta", dist.param_b()}};
    case DistKind::TruncatedExponential:
      return {{"kind", "truncated_exponential"}, {"rate", dist.param_a()}};
    case DistKind::TruncatedPareto:
      return {{"kind", "truncated_pareto"}, {"shape", dist.param_a()}};
    case DistKind::Empirical: {
      json atoms = json::array();
      for (const auto& a : dist.atoms()) atoms.push_back({a.value, a.mass});
      return {{"kind", "empirical"}, {"atoms", atoms}};
    }
    case DistKind::Mixture: {
      json comps = json::array();
      for (const auto& c : dist.components()) comps.push_back(distribution_to_json(c));
      const auto w = dist.weights();
      return {{"kind", "mixture"}, {"components", comps}, {"weights", std::vector<double>(w.begin(), w.end())}};
    }
  }
  return {};
}

json cut_to_json(const IsoRevenueCut& c) {
  return {{"pi", c.pi},
          {"intervals", intervals_json(c.intervals)},
          {"gap", c.gap},
          {"log_sum", std::isfinite(c.log_sum) ? json(c.log_sum) : json("inf")},
          {"diagnostics", c.diagnostics}};
}

json mechanism_to_json(const Mechanism& mech) {
  if (const auto* pp = std::get_if<PostedPrice>(&mech))
    return {{"type", "posted_price"}, {"price", pp->price()}};
  const auto& rl = std::get<RandomizedLogMechanism>(mech);
  if (rl.degenerate())
    return {{"type", "posted_price"}, {"price", rl.fallback_price()}, {"pi", rl.pi()}};
  return {{"type", "randomized_log"},
          {"slope", rl.slope()},
          {"pi", rl.pi()},
          {"intervals", intervals_json(rl.intervals())}};
}

json mechanism_table_json(const Mechanism& mech, std::size_t points) {
  json rows = json::array();
  for (const auto& r : tabulate(mech, points))
    rows.push_back({{"v", r.v}, {"q", r.q}, {"m", r.m}, {"surplus", r.surplus}});
  return rows;
}

std::string mechanism_table_csv(const Mechanism& mech, std::size_t points) {
  std::string out = "v,q,m,surplus\n";
  for (const auto& r : tabulate(mech, points))
    out += num(r.v) + "," + num(r.q) + "," + num(r.m) + "," + num(r.surplus) + "\n";
  return out;
}

json rs_report_json(const Distribution& ref, const SolveReport& rep, std::size_t table_points) {
  const Mechanism mech = rep.mechanism;
  return {{"schema", kSchemaVersion},
          {"command", "solve-rs"},
          {"reference", distribution_to_json(ref)},
          {"tau", rep.tau},
          {"pi0", rep.pi0},
          {"k_star", rep.k_star},
          {"pi_star", rep.pi_star},
          {"rho_at_solution", rep.rho_at_solution},
          {"intervals", intervals_json(rep.cut.intervals)},
          {"log_sum", rep.cut.log_sum},
          {"mechanism", mechanism_to_json(mech)},
          {"price_statistics", moments_json(rep.mechanism.price_statistics())},
          {"mechanism_table", mechanism_table_json(mech, table_points)},
          {"diagnostics",
           {{"iterations", rep.iterations}, {"residual", rep.residual}, {"messages", rep.diagnostics}}}};
}

json pp_report_json(const Distribution& ref, const PPSolveReport& rep, std::size_t table_points) {
  const Mechanism mech = rep.mechanism();
  return {{"schema", kSchemaVersion},
          {"command", "solve-pp"},
          {"reference", distribution_to_json(ref)},
          {"tau", rep.tau},
          {"pi0", rep.pi0},
          {"k_pp", rep.k_pp},
          {"p_pp", rep.p_pp},
          {"rho_at_solution", rep.rho_at_solution},
          {"mechanism", mechanism_to_json(mech)},
          {"mechanism_table", mechanism_table_json(mech, table_points)},
          {"diagnostics",
           {{"iterations", rep.iterations}, {"residual", rep.residual}, {"messages", rep.diagnostics}}}};
}

json ro_report_json(const Distribution& ref, const ROSolveReport& rep, std::size_t table_points) {
  const Mechanism mech = rep.mechanism;
  json out = {{"schema", kSchemaVersion},
              {"command", "solve-ro"},
              {"reference", distribution_to_json(ref)},
              {"r", rep.r},
              {"pi0", rep.pi0},
              {"pi_ro_star", rep.pi_ro_star},
              {"alpha", rep.alpha},
              {"intervals", intervals_json(rep.cut.intervals)},
              {"gap", rep.cut.gap},
              {"mechanism", mechanism_to_json(mech)},
              {"price_statistics", moments_json(rep.mechanism.price_statistics())},
              {"mechanism_table", mechanism_table_json(mech, table_points)},
              {"diagnostics", {{"iterations", rep.iterations}, {"messages", rep.diagnostics}}}};
  out["pp_price_uniform"] = rep.pp_price_uniform ? json(*rep.pp_price_uniform) : json(nullptr);
  return out;
}

json eval_report_json(const EvalReport& rep) {
  json out = {{"mechanism_id", rep.mechanism_id},
              {"true_dist", rep.true_dist},
              {"expected_revenue", rep.expected_revenue},
              {"method", to_string(rep.method)}};
  if (rep.method == EvalMethod::MonteCarlo) {
    out["seed"] = rep.seed;
    out["samples"] = rep.samples;
    out["standard_error"] = rep.standard_error;
  }
  return out;
}

json compare_json(const Distribution& ref, double tau, const std::optional<Distribution>& truth,
                  const Tolerances& tol, std::size_t table_points) {
  const auto rs = solve_rs(ref, tau, tol);
  const auto pp = solve_pp(ref, tau, tol);
  const double r = radius_for_target(ref, tau, tol);
  const auto ro = solve_ro(ref, r, tol);
  const Mechanism m_rs = rs.mechanism, m_ro = ro.mechanism, m_pp = pp.mechanism();

  json out = {{"schema", kSchemaVersion},
              {"command", "compare"},
              {"reference", distribution_to_json(ref)},
              {"tau", tau},
              {"r", r},
              {"pi0", rs.pi0},
              {"rs", {{"k_star", rs.k_star},
                      {"pi_star", rs.pi_star},
                      {"intervals", intervals_json(rs.cut.intervals)},
                      {"price_statistics", moments_json(rs.mechanism.price_statistics())},
                      {"mechanism_table", mechanism_table_json(m_rs, table_points)}}},
              {"ro", {{"pi_ro_star", ro.pi_ro_star},
                      {"alpha", ro.alpha},
                      {"intervals", intervals_json(ro.cut.intervals)},
                      {"price_statistics", moments_json(ro.mechanism.price_statistics())},
                      {"mechanism_table", mechanism_table_json(m_ro, table_points)}}},
              {"pp", {{"k_pp", pp.k_pp}, {"p_pp", pp.p_pp}}},
              {"crossings_rs_vs_ro", crossings_json(crossing_thresholds(m_rs, m_ro))},
              {"crossings_rs_vs_pp", crossings_json(crossing_thresholds(m_rs, m_pp))}};
  out["ro"]["pp_price_uniform"] = ro.pp_price_uniform ? json(*ro.pp_price_uniform) : json(nullptr);
  const auto revenues = [&](const Distribution& d) {
    return json{{"rs", expected_revenue(m_rs, d).expected_revenue},
                {"ro", expected_revenue(m_ro, d).expected_revenue},
                {"pp", expected_revenue(m_pp, d).expected_revenue}};
  };
  out["revenue_under_reference"] = revenues(ref);
  if (truth) {
    out["true_dist"] = distribution_to_json(*truth);
    out["revenue_under_truth"] = revenues(*truth);
    out["wasserstein_to_reference"] = wasserstein_distance(*truth, ref, tol);
    out["eta_rs"] = eta_json(eta_rs(ref, tau, *truth, tol));
    if (ref.kind() == DistKind::Uniform) out["eta_ro"] = eta_json(eta_ro(ref, r, *truth, tol));
  }
  return out;
}

json evaluate_json(const Distribution& ref, double tau, const Distribution& truth,
                   const EvalOptions& opts, const Tolerances& tol) {
  const auto rs = solve_rs(ref, tau, tol);
  const auto pp = solve_pp(ref, tau, tol);
  const double r = radius_for_target(ref, tau, tol);
  const auto ro = solve_ro(ref, r, tol);
  const Mechanism m_rs = rs.mechanism, m_ro = ro.mechanism, m_pp = pp.mechanism();
  json out = {{"schema", kSchemaVersion},
              {"command", "evaluate"},
              {"reference", distribution_to_json(ref)},
              {"true_dist", distribution_to_json(truth)},
              {"tau", tau},
              {"r", r},
              {"k_star", rs.k_star},
              {"k_pp", pp.k_pp},
              {"p_pp", pp.p_pp},
              {"wasserstein_to_reference", wasserstein_distance(truth, ref, tol)},
              {"rs", eval_report_json(expected_revenue(m_rs, truth, opts))},
              {"ro", eval_report_json(expected_revenue(m_ro, truth, opts))},
              {"pp", eval_report_json(expected_revenue(m_pp, truth, opts))},
              {"eta_rs", eta_json(eta_rs(ref, tau, truth, tol))}};
  if (ref.kind() == DistKind::Uniform) out["eta_ro"] = eta_json(eta_ro(ref, r, truth, tol));
  return out;
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "sweep grid must be a JSON object");
  SweepConfig cfg;
  if (j.contains("alphas")) cfg.alphas = number_list(j, "alphas");
  if (j.contains("betas")) cfg.betas = number_list(j, "betas");
  if (j.contains("tau_over_pi0")) cfg.tau_fractions = number_list(j, "tau_over_pi0");
  if (j.contains("include_pp")) cfg.include_pp = j.at("include_pp").get<bool>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
  if (j.contains("mc_samples")) cfg.mc_samples = j.at("mc_samples").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (cfg.alphas.empty() || cfg.betas.empty() || cfg.tau_fractions.empty())
    throw Error(ErrorCode::Parse, "sweep grids must be non-empty");
  for (double a : cfg.alphas)
    if (!(a > 0.0)) throw Error(ErrorCode::Parse, "sweep alphas must be positive");
  for (double b : cfg.betas)
    if (!(b > 0.0)) throw Error(ErrorCode::Parse, "sweep betas must be positive");
  for (double f : cfg.tau_fractions)
    if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::Parse, "tau_over_pi0 entries must lie in (0, 1)");
  return cfg;
}

json sweep_json(const SweepResult& res) {
  json cells = json::array();
  for (const auto& c : res.cells) {
    json cell = {{"alpha", c.alpha},
                 {"beta", c.beta},
                 {"tau_over_pi0", c.tau_over_pi0},
                 {"tau", c.tau},
                 {"r", c.r},
                 {"rev_rs", c.rev_rs},
                 {"rev_ro", c.rev_ro},
                 {"rev_pp", c.rev_pp},
                 {"preferred", c.preferred},
                 {"in_ambiguity_set", c.in_ambiguity_set},
                 {"wasserstein_to_ref", c.wasserstein_to_ref}};
    if (c.skipped) cell["note"] = c.note;
    if (res.config.mc_samples > 0) {
      cell["mc"] = {{"rs", c.mc_rs}, {"ro", c.mc_ro}, {"pp", c.mc_pp},
                    {"se_rs", c.se_rs}, {"se_ro", c.se_ro}, {"se_pp", c.se_pp}};
    }
    cells.push_back(std::move(cell));
  }
  const auto& cfg = res.config;
  return {{"schema", kSchemaVersion},
          {"command", "sweep"},
          {"reference", {{"kind", "uniform"}}},
          {"grid", {{"alphas", cfg.alphas},
                    {"betas", cfg.betas},
                    {"tau_over_pi0", cfg.tau_fractions},
                    {"include_pp", cfg.include_pp},
                    {"mc_samples", cfg.mc_samples},
                    {"seed", cfg.seed},
                    {"note", "grid resolution is a configurable default, not the published figure grid"}}},
          {"cells", cells}};
}

std::string sweep_csv(const SweepResult& res) {
  std::string out =
      "alpha,beta,tau_over_pi0,rev_rs,rev_ro,rev_pp,preferred,in_ambiguity_set,wasserstein_to_ref\n";
  for (const auto& c : res.cells) {
    out += num(c.alpha) + "," + num(c.beta) + "," + num(c.tau_over_pi0) + "," + num(c.rev_rs) +
           "," + num(c.rev_ro) + "," + num(c.rev_pp) + "," + c.preferred + "," +
           (c.in_ambiguity_set ? "true" : "false") + "," + num(c.wasserstein_to_ref) + "\n";
  }
  return out;
}

}  // namespace rsmech
