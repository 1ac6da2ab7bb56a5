#include "rsmech/rsmech.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "rsmech/errors.hpp"
#include "rsmech/report.hpp"

struct rsm_distribution {
  rsmech::Distribution dist;
};

struct rsm_mechanism {
  rsmech::Mechanism mech;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_requested = 0.0;
thread_local double g_ceiling = 0.0;

rsm_status map_code(rsmech::ErrorCode code) {
  using rsmech::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return RSM_INVALID_ARGUMENT;
    case ErrorCode::Domain: return RSM_DOMAIN;
    case ErrorCode::InfeasibleTarget: return RSM_INFEASIBLE;
    case ErrorCode::RadiusTooLarge: return RSM_RADIUS_TOO_LARGE;
    case ErrorCode::Unsupported: return RSM_UNSUPPORTED;
    case ErrorCode::Degenerate: return RSM_DEGENERATE;
    case ErrorCode::Parse: return RSM_PARSE;
  }
  return RSM_INTERNAL;
}

template <class F>
rsm_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RSM_OK;
  } catch (const rsmech::InfeasibleTargetError& e) {
    g_last_error = e.what();
    g_requested = e.requested();
    g_ceiling = e.ceiling();
    return RSM_INFEASIBLE;
  } catch (const rsmech::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return RSM_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RSM_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RSM_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return RSM_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw rsmech::Error(rsmech::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

rsm_options defaults() {
  rsm_options o;
  rsm_options_init(&o);
  return o;
}

rsmech::Tolerances tolerances(const rsm_options* opts) {
  const rsm_options o = opts ? *opts : defaults();
  rsmech::Tolerances t;
  if (o.tol_root > 0.0) t.root_width = o.tol_root;
  if (o.tol_residual > 0.0) t.root_residual = o.tol_residual;
  if (o.tol_quad > 0.0) t.quad_abs = o.tol_quad;
  return t;
}

std::size_t table_points(const rsm_options* opts) {
  const std::size_t n = opts ? opts->table_points : defaults().table_points;
  return n < 2 ? 2 : n;
}

std::string dump(const rsmech::json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

void rsm_options_init(rsm_options* opts) {
  if (!opts) return;
  opts->tol_root = 1e-12;
  opts->tol_residual = 1e-10;
  opts->tol_quad = 1e-10;
  opts->seed = 42;
  opts->mc_samples = 0;
  opts->table_points = 101;
  opts->threads = 1;
}

const char* rsm_version(void) { return "1.0.0"; }

const char* rsm_last_error(void) { return g_last_error.c_str(); }

void rsm_last_infeasible(double* requested, double* ceiling) {
  if (requested) *requested = g_requested;
  if (ceiling) *ceiling = g_ceiling;
}

void rsm_string_free(char* s) { std::free(s); }

rsm_status rsm_distribution_from_json(const char* json, rsm_distribution** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = new rsm_distribution{rsmech::distribution_from_string(json)};
  });
}

void rsm_distribution_free(rsm_distribution* d) { delete d; }

rsm_status rsm_distribution_to_json(const rsm_distribution* d, char** out_json) {
  return guard([&] {
    require(d, "distribution");
    require(out_json, "out_json");
    *out_json = dup(rsmech::distribution_to_json(d->dist).dump());
  });
}

rsm_status rsm_ccdf(const rsm_distribution* d, double x, double* out) {
  return guard([&] {
    require(d, "distribution");
    require(out, "out");
    *out = d->dist.ccdf(x);
  });
}

rsm_status rsm_ccdf_left(const rsm_distribution* d, double x, double* out) {
  return guard([&] {
    require(d, "distribution");
    require(out, "out");
    *out = d->dist.ccdf_left(x);
  });
}

rsm_status rsm_mean(const rsm_distribution* d, double* out) {
  return guard([&] {
    require(d, "distribution");
    require(out, "out");
    *out = d->dist.mean();
  });
}

rsm_status rsm_revenue(const rsm_distribution* d, double p, double* out) {
  return guard([&] {
    require(d, "distribution");
    require(out, "out");
    *out = d->dist.revenue(p);
  });
}

rsm_status rsm_max_posted_revenue(const rsm_distribution* d, double* out_pi0, double* out_price) {
  return guard([&] {
    require(d, "distribution");
    const auto opt = d->dist.max_posted_revenue();
    if (out_pi0) *out_pi0 = opt.revenue;
    if (out_price) *out_price = opt.price;
  });
}

rsm_status rsm_wasserstein(const rsm_distribution* p, const rsm_distribution* q, double* out) {
  return guard([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    *out = rsmech::wasserstein_distance(p->dist, q->dist);
  });
}

rsm_status rsm_gap(const rsm_distribution* d, double pi, double* out) {
  return guard([&] {
    require(d, "distribution");
    require(out, "out");
    *out = rsmech::gap_only(d->dist, pi);
  });
}

rsm_status rsm_cut_json(const rsm_distribution* d, double pi, char** out_json) {
  return guard([&] {
    require(d, "distribution");
    require(out_json, "out_json");
    auto j = rsmech::cut_to_json(rsmech::cut(d->dist, pi));
    j["schema"] = rsmech::kSchemaVersion;
    *out_json = dup(dump(j));
  });
}

rsm_status rsm_solve_rs(const rsm_distribution* ref, double tau, const rsm_options* opts,
                        rsm_mechanism** out_mech, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    const auto rep = rsmech::solve_rs(ref->dist, tau, tolerances(opts));
    std::string text;
    if (out_json) text = dump(rsmech::rs_report_json(ref->dist, rep, table_points(opts)));
    if (out_mech) *out_mech = new rsm_mechanism{rep.mechanism};
    if (out_json) *out_json = dup(text);
  });
}

rsm_status rsm_solve_pp(const rsm_distribution* ref, double tau, const rsm_options* opts,
                        rsm_mechanism** out_mech, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    const auto rep = rsmech::solve_pp(ref->dist, tau, tolerances(opts));
    std::string text;
    if (out_json) text = dump(rsmech::pp_report_json(ref->dist, rep, table_points(opts)));
    if (out_mech) *out_mech = new rsm_mechanism{rep.mechanism()};
    if (out_json) *out_json = dup(text);
  });
}

rsm_status rsm_solve_ro(const rsm_distribution* ref, double r, const rsm_options* opts,
                        rsm_mechanism** out_mech, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    const auto rep = rsmech::solve_ro(ref->dist, r, tolerances(opts));
    std::string text;
    if (out_json) text = dump(rsmech::ro_report_json(ref->dist, rep, table_points(opts)));
    if (out_mech) *out_mech = new rsm_mechanism{rep.mechanism};
    if (out_json) *out_json = dup(text);
  });
}

rsm_status rsm_tau_equiv(const rsm_distribution* ref, double r, const rsm_options* opts,
                         double* out_tau, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    const auto tol = tolerances(opts);
    const double tau = rsmech::tau_equiv(ref->dist, r, tol);
    if (out_tau) *out_tau = tau;
    if (out_json) {
      const rsmech::json j = {{"schema", rsmech::kSchemaVersion},
                              {"command", "tau-equiv"},
                              {"reference", rsmech::distribution_to_json(ref->dist)},
                              {"r", r},
                              {"pi_ro_star", rsmech::pi_ro_star(ref->dist, r, tol)},
                              {"pi0", ref->dist.max_posted_revenue().revenue},
                              {"tau_equiv", tau}};
      *out_json = dup(dump(j));
    }
  });
}

rsm_status rsm_radius_for_target(const rsm_distribution* ref, double tau, const rsm_options* opts,
                                 double* out_r) {
  return guard([&] {
    require(ref, "reference");
    require(out_r, "out_r");
    *out_r = rsmech::radius_for_target(ref->dist, tau, tolerances(opts));
  });
}

void rsm_mechanism_free(rsm_mechanism* m) { delete m; }

rsm_status rsm_mechanism_eval(const rsm_mechanism* m, double v, double* q, double* pay,
                              double* surplus) {
  return guard([&] {
    require(m, "mechanism");
    const double qq = rsmech::allocation(m->mech, v);
    const double mm = rsmech::payment(m->mech, v);
    if (q) *q = qq;
    if (pay) *pay = mm;
    if (surplus) *surplus = qq * v - mm;
  });
}

rsm_status rsm_mechanism_table_csv(const rsm_mechanism* m, size_t points, char** out_csv) {
  return guard([&] {
    require(m, "mechanism");
    require(out_csv, "out_csv");
    *out_csv = dup(rsmech::mechanism_table_csv(m->mech, points));
  });
}

rsm_status rsm_expected_revenue(const rsm_mechanism* m, const rsm_distribution* truth,
                                rsm_eval_method method, const rsm_options* opts,
                                double* out_revenue, double* out_stderr) {
  return guard([&] {
    require(m, "mechanism");
    require(truth, "truth");
    require(out_revenue, "out_revenue");
    const rsm_options o = opts ? *opts : defaults();
    rsmech::EvalOptions eo;
    eo.method = method == RSM_MONTE_CARLO ? rsmech::EvalMethod::MonteCarlo
                                          : rsmech::EvalMethod::Quadrature;
    eo.seed = o.seed;
    if (o.mc_samples > 0) eo.samples = o.mc_samples;
    const auto rep = rsmech::expected_revenue(m->mech, truth->dist, eo);
    *out_revenue = rep.expected_revenue;
    if (out_stderr) *out_stderr = rep.standard_error;
  });
}

rsm_status rsm_compare_json(const rsm_distribution* ref, double tau, const rsm_distribution* truth,
                            const rsm_options* opts, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    require(out_json, "out_json");
    std::optional<rsmech::Distribution> t;
    if (truth) t = truth->dist;
    *out_json = dup(dump(rsmech::compare_json(ref->dist, tau, t, tolerances(opts), table_points(opts))));
  });
}

rsm_status rsm_evaluate_json(const rsm_distribution* ref, double tau, const rsm_distribution* truth,
                             const rsm_options* opts, char** out_json) {
  return guard([&] {
    require(ref, "reference");
    require(truth, "truth");
    require(out_json, "out_json");
    const rsm_options o = opts ? *opts : defaults();
    rsmech::EvalOptions eo;
    eo.seed = o.seed;
    if (o.mc_samples > 0) {
      eo.method = rsmech::EvalMethod::MonteCarlo;
      eo.samples = o.mc_samples;
    }
    *out_json = dup(dump(rsmech::evaluate_json(ref->dist, tau, truth->dist, eo, tolerances(opts))));
  });
}

rsm_status rsm_sweep(const char* config_json, const rsm_options* opts, char** out_json,
                     char** out_csv) {
  return guard([&] {
    const rsm_options o = opts ? *opts : defaults();
    rsmech::json cfg_json = rsmech::json::object();
    if (config_json && *config_json) {
      try {
        cfg_json = rsmech::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw rsmech::Error(rsmech::ErrorCode::Parse, std::string("invalid grid JSON: ") + e.what());
      }
    }
    if (!cfg_json.contains("seed")) cfg_json["seed"] = o.seed;
    if (!cfg_json.contains("mc_samples")) cfg_json["mc_samples"] = o.mc_samples;
    if (!cfg_json.contains("threads")) cfg_json["threads"] = o.threads;
    const auto cfg = rsmech::sweep_config_from_json(cfg_json);
    const auto res = rsmech::beta_sweep(cfg, tolerances(opts));
    std::string j, c;
    if (out_json) j = dump(rsmech::sweep_json(res));
    if (out_csv) c = rsmech::sweep_csv(res);
    if (out_json) *out_json = dup(j);
    if (out_csv) *out_csv = dup(c);
  });
}

}  // extern "C"
