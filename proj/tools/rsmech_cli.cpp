#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rsmech/rsmech.h"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string reference;
  std::string truth;
  std::optional<double> tau;
  std::optional<double> r;
  std::uint64_t seed = 42;
  std::string out;
  std::string table;
  std::string grid;
  std::size_t mc_n = 0;
  std::size_t points = 101;
  unsigned threads = 1;
  double tol_root = 0.0;
  double tol_quad = 0.0;
};

using DistPtr = std::unique_ptr<rsm_distribution, decltype(&rsm_distribution_free)>;
using MechPtr = std::unique_ptr<rsm_mechanism, decltype(&rsm_mechanism_free)>;

struct CString {
  char* p = nullptr;
  ~CString() { rsm_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

// A status other than RSM_OK unwinds to main as this exception.
struct Failure {
  rsm_status status;
};

void check(rsm_status s) {
  if (s != RSM_OK) throw Failure{s};
}

std::string read_text(const std::string& arg, const char* flag) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  std::ifstream in(arg);
  if (!in) throw UsageError(std::string(flag) + ": cannot open '" + arg + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DistPtr load(const std::string& arg, const char* flag) {
  if (arg.empty()) throw UsageError(std::string(flag) + " is required");
  rsm_distribution* d = nullptr;
  const auto text = read_text(arg, flag);
  const rsm_status s = rsm_distribution_from_json(text.c_str(), &d);
  if (s != RSM_OK)
    throw UsageError(std::string(flag) + ": " + rsm_last_error());
  return DistPtr(d, &rsm_distribution_free);
}

void write_out(const std::string& path, const std::string& text, const char* flag) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(std::string(flag) + ": cannot write '" + path + "'");
  out << text;
}

rsm_options options(const Args& a) {
  rsm_options o;
  rsm_options_init(&o);
  o.seed = a.seed;
  o.mc_samples = a.mc_n;
  o.table_points = a.points;
  o.threads = a.threads;
  if (a.tol_root > 0.0) o.tol_root = a.tol_root;
  if (a.tol_quad > 0.0) o.tol_quad = a.tol_quad;
  return o;
}

double need_tau(const Args& a, const char* cmd) {
  if (a.r) throw UsageError(std::string(cmd) + " takes --tau, not --r");
  if (!a.tau) throw UsageError(std::string(cmd) + " requires --tau");
  return *a.tau;
}

double need_r(const Args& a, const char* cmd) {
  if (a.tau) throw UsageError(std::string(cmd) + " takes --r, not --tau");
  if (!a.r) throw UsageError(std::string(cmd) + " requires --r");
  return *a.r;
}

using Solver = rsm_status (*)(const rsm_distribution*, double, const rsm_options*, rsm_mechanism**,
                              char**);

void run_solve(const Args& a, Solver solver, double value) {
  auto ref = load(a.reference, "--reference");
  const auto o = options(a);
  rsm_mechanism* raw = nullptr;
  CString report;
  check(solver(ref.get(), value, &o, &raw, &report.p));
  MechPtr mech(raw, &rsm_mechanism_free);
  write_out(a.out, report.str(), "--out");
  if (!a.table.empty()) {
    CString csv;
    check(rsm_mechanism_table_csv(mech.get(), a.points, &csv.p));
    write_out(a.table, csv.str(), "--table");
  }
}

void run_compare(const Args& a) {
  const double tau = need_tau(a, "compare");
  auto ref = load(a.reference, "--reference");
  std::optional<DistPtr> truth;
  if (!a.truth.empty()) truth.emplace(load(a.truth, "--true"));
  const auto o = options(a);
  CString report;
  check(rsm_compare_json(ref.get(), tau, truth ? truth->get() : nullptr, &o, &report.p));
  write_out(a.out, report.str(), "--out");
}

void run_evaluate(const Args& a) {
  const double tau = need_tau(a, "evaluate");
  auto ref = load(a.reference, "--reference");
  auto truth = load(a.truth, "--true");
  const auto o = options(a);
  CString report;
  check(rsm_evaluate_json(ref.get(), tau, truth.get(), &o, &report.p));
  write_out(a.out, report.str(), "--out");
}

void run_sweep(const Args& a) {
  const std::string grid = a.grid.empty() ? std::string("{}") : read_text(a.grid, "--grid");
  const auto o = options(a);
  CString report, csv;
  const rsm_status s = rsm_sweep(grid.c_str(), &o, &report.p, &csv.p);
  if (s == RSM_PARSE) throw UsageError(std::string("--grid: ") + rsm_last_error());
  check(s);
  write_out(a.out, report.str(), "--out");
  if (!a.table.empty()) write_out(a.table, csv.str(), "--table");
}

void run_tau_equiv(const Args& a) {
  const double r = need_r(a, "tau-equiv");
  auto ref = load(a.reference, "--reference");
  const auto o = options(a);
  CString report;
  double tau = 0.0;
  check(rsm_tau_equiv(ref.get(), r, &o, &tau, &report.p));
  write_out(a.out, report.str(), "--out");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust satisficing and robust optimization selling mechanisms"};
  app.require_subcommand(1);
  Args a;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--reference", a.reference, "Reference distribution (path or inline JSON)");
    sub->add_option("--seed", a.seed, "Seed for Monte Carlo draws")->capture_default_str();
    sub->add_option("--out", a.out, "Write the JSON report here instead of stdout");
    sub->add_option("--tol-root", a.tol_root, "Relative bracket width of the bisections");
    sub->add_option("--tol-quad", a.tol_quad, "Absolute quadrature tolerance");
  };
  const auto targets = [&](CLI::App* sub) {
    sub->add_option("--tau", a.tau, "Revenue target");
    sub->add_option("--r", a.r, "Ambiguity radius");
  };
  const auto table = [&](CLI::App* sub) {
    sub->add_option("--table", a.table, "Write the sampled mechanism table (CSV) here");
    sub->add_option("--points", a.points, "Rows of the mechanism table")->capture_default_str();
  };

  auto* rs = app.add_subcommand("solve-rs", "Optimal robust satisficing mechanism");
  auto* pp = app.add_subcommand("solve-pp", "Optimal robust satisficing posted price");
  auto* ro = app.add_subcommand("solve-ro", "Optimal robust optimization mechanism");
  auto* cmp = app.add_subcommand("compare", "RS, RO and PP side by side at one target");
  auto* ev = app.add_subcommand("evaluate", "Out-of-sample revenue under a true distribution");
  auto* sw = app.add_subcommand("sweep", "Beta(alpha, beta) out-of-sample sweep");
  auto* te = app.add_subcommand("tau-equiv", "Target at which RS and RO coincide");
  for (auto* sub : {rs, pp, ro, cmp, ev, sw, te}) common(sub);
  for (auto* sub : {rs, pp, ro, cmp, ev, te}) targets(sub);
  for (auto* sub : {rs, pp, ro}) table(sub);
  for (auto* sub : {cmp, ev}) sub->add_option("--true", a.truth, "True distribution (path or inline JSON)");
  for (auto* sub : {ev, sw}) sub->add_option("--mc-n", a.mc_n, "Monte Carlo draws (0 = quadrature)");
  sw->add_option("--grid", a.grid, "Grid JSON (path or inline): alphas, betas, tau_over_pi0");
  sw->add_option("--table", a.table, "Write the sweep CSV here");
  sw->add_option("--threads", a.threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (rs->parsed()) run_solve(a, rsm_solve_rs, need_tau(a, "solve-rs"));
    else if (pp->parsed()) run_solve(a, rsm_solve_pp, need_tau(a, "solve-pp"));
    else if (ro->parsed()) run_solve(a, rsm_solve_ro, need_r(a, "solve-ro"));
    else if (cmp->parsed()) run_compare(a);
    else if (ev->parsed()) run_evaluate(a);
    else if (sw->parsed()) run_sweep(a);
    else if (te->parsed()) run_tau_equiv(a);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Failure& f) {
    if (f.status == RSM_INFEASIBLE) {
      double requested = 0.0, ceiling = 0.0;
      rsm_last_infeasible(&requested, &ceiling);
      std::cerr << "infeasible: requested target " << requested << " but Pi0 = " << ceiling
                << "\n  " << rsm_last_error() << "\n";
      return 2;
    }
    if (f.status == RSM_RADIUS_TOO_LARGE) {
      std::cerr << "infeasible radius: " << rsm_last_error() << "\n";
      return 2;
    }
    std::cerr << "error: " << rsm_last_error() << "\n";
    return 1;
  }
  return 0;
}
