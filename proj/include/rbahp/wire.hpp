#pragma once

// JSON documents shared by the CLI and the HTTP service. Field names follow
// the domain types; doubles are written at full round-trip precision.

#include <string>
#include <vector>

#include "json.hpp"

#include "rbahp/authorizer.hpp"
#include "rbahp/role_graph.hpp"

namespace rbahp::wire {

using nlohmann::json;

inline json to_json(const ValidationReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    issues.push_back({{"severity", to_string(issue.severity)},
                      {"code", issue.code},
                      {"message", issue.message},
                      {"location", issue.location}});
  }
  return {{"ok", report.ok}, {"issues", std::move(issues)}};
}

template <typename Tag>
json to_json(const std::vector<Token<Tag>>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

inline json to_json(const CriterionSpec& spec) {
  return {{"id", spec.id}, {"orientation", to_string(spec.orientation)}, {"firstRowPreference", spec.first_row_preference}};
}

inline json to_json(const AuthorizationQuery& query) {
  json required = json::array();
  for (const auto& p : query.required.required) required.push_back(p.str());
  json specs = json::array();
  for (const auto& spec : query.criteria) specs.push_back(to_json(spec));
  return {{"required", std::move(required)},
          {"s", query.s},
          {"criteria", std::move(specs)},
          {"alpha", query.alpha},
          {"lambda", query.lambda}};
}

inline json to_json(const RoleScore& score) {
  return {{"role", score.role.str()},
          {"dp", score.dp},
          {"dr", score.dr},
          {"extended", score.extended},
          {"perCriterionWeight", score.per_criterion_weight},
          {"probability", score.probability}};
}

inline json to_json(const RankingResult& result) {
  json scores = json::array();
  for (const auto& score : result.scores) scores.push_back(to_json(score));
  return {{"mode", to_string(result.mode)},
          {"scores", std::move(scores)},
          {"selected", result.selected.str()},
          {"parameters", to_json(result.parameters)}};
}

inline json to_json(const SweepResult& sweep) {
  json rankings = json::array();
  for (const auto& r : sweep.rankings) rankings.push_back(to_json(r));
  json changes = json::array();
  for (const auto& c : sweep.change_points) {
    changes.push_back({{"sBefore", c.s_before},
                       {"sAfter", c.s_after},
                       {"orderBefore", to_json(c.order_before)},
                       {"orderAfter", to_json(c.order_after)}});
  }
  return {{"grid", sweep.grid}, {"rankings", std::move(rankings)}, {"changePoints", std::move(changes)}};
}

inline json error_document(ErrorCode code, const std::string& message) {
  return {{"error", to_string(code)}, {"message", message}};
}

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) {
  throw Error(ErrorCode::invalid_parameter, "malformed request: " + what);
}

inline double number_field(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) malformed(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

/// Reads a query document: {"required": [...], "s", "criteria", "alpha", "lambda"}.
/// "require" is accepted as an alias of "required". Criteria entries are
/// either ids or {"id", "firstRowPreference"} objects. Malformed documents
/// throw Error(invalid_parameter).
inline AuthorizationQuery query_from_json(const json& doc) {
  if (!doc.is_object()) detail::malformed("body must be a JSON object");
  AuthorizationQuery query;

  const char* key = doc.contains("required") ? "required" : "require";
  if (!doc.contains(key)) detail::malformed("'required' is missing");
  const auto& required = doc.at(key);
  if (!required.is_array()) detail::malformed("'required' must be an array of permission ids");
  for (const auto& item : required) {
    if (!item.is_string()) detail::malformed("permission ids must be strings");
    query.required.required.emplace(item.get<std::string>());
  }

  query.s = detail::number_field(doc, "s", 1.0);
  query.alpha = detail::number_field(doc, "alpha", 1.0);
  query.lambda = detail::number_field(doc, "lambda", 1.0);

  if (doc.contains("criteria")) {
    const auto& list = doc.at("criteria");
    if (!list.is_array()) detail::malformed("'criteria' must be an array");
    query.criteria.clear();
    for (const auto& item : list) {
      if (item.is_string()) {
        query.criteria.push_back(make_criterion(item.get<std::string>()));
      } else if (item.is_object() && item.contains("id") && item.at("id").is_string()) {
        query.criteria.push_back(make_criterion(item.at("id").get<std::string>(),
                                                detail::number_field(item, "firstRowPreference", 1.0)));
      } else {
        detail::malformed("criteria entries must be ids or objects with an 'id'");
      }
    }
  }
  return query;
}

}  // namespace rbahp::wire
