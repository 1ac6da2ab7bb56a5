#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "rsmech/evaluation.hpp"
#include "rsmech/isorevenue.hpp"
#include "rsmech/mechanism.hpp"
#include "rsmech/pp_solver.hpp"
#include "rsmech/ro_solver.hpp"
#include "rsmech/rs_solver.hpp"

namespace rsmech {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Parses {"kind": ...}. Throws Error(Parse) on malformed input and
/// Error(InvalidArgument) on bad parameters.
Distribution distribution_from_json(const json& j);
Distribution distribution_from_string(const std::string& text);
json distribution_to_json(const Distribution& dist);

json cut_to_json(const IsoRevenueCut& c);
json mechanism_to_json(const Mechanism& mech);
json mechanism_table_json(const Mechanism& mech, std::size_t points);
/// Header v,q,m,surplus.
std::string mechanism_table_csv(const Mechanism& mech, std::size_t points);

json rs_report_json(const Distribution& ref, const SolveReport& rep, std::size_t table_points);
json pp_report_json(const Distribution& ref, const PPSolveReport& rep, std::size_t table_points);
json ro_report_json(const Distribution& ref, const ROSolveReport& rep, std::size_t table_points);
json eval_report_json(const EvalReport& rep);

/// RS, PP and matched-target RO at tau on the reference, with crossings and
/// price statistics; revenues under `truth` when given.
json compare_json(const Distribution& ref, double tau, const std::optional<Distribution>& truth,
                  const Tolerances& tol, std::size_t table_points);

/// Out-of-sample revenue of the RS, PP and matched RO mechanisms at tau.
json evaluate_json(const Distribution& ref, double tau, const Distribution& truth,
                   const EvalOptions& opts, const Tolerances& tol);

SweepConfig sweep_config_from_json(const json& j);
json sweep_json(const SweepResult& res);
std::string sweep_csv(const SweepResult& res);

}  // namespace rsmech
