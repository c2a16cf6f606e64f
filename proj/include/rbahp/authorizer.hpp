#pragma once

/**
 * Role selection for user authorization.
 *
 * Candidate roles are those whose effective permissions cover the request.
 * Each candidate is scored on leakage criteria (extra permissions dp and
 * dominated roles dr, both cost-oriented) plus optional availability,
 * integrity and manager-cost criteria. Per-criterion weights use the closed
 * forms from ahp.hpp, criteria weights come from the first-row preferences
 * (the subordinate-roles entry is 1/s), and the combined score P(r) orders
 * the candidates. A candidate with dp = 0 fits the request exactly and ends
 * the computation.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rbahp/ahp.hpp"
#include "rbahp/error.hpp"
#include "rbahp/role_graph.hpp"

namespace rbahp {

namespace criteria {
inline constexpr std::string_view extra_permissions = "extra-permissions";
inline constexpr std::string_view subordinate_roles = "subordinate-roles";
inline constexpr std::string_view availability = "availability";
inline constexpr std::string_view integrity = "integrity";
inline constexpr std::string_view manager_cost = "manager-cost";

inline bool is_base(std::string_view id) { return id == extra_permissions || id == subordinate_roles; }

inline bool is_extended(std::string_view id) { return id == availability || id == integrity || id == manager_cost; }
}  // namespace criteria

/// Criterion with the orientation fixed by its id.
[[nodiscard]] inline CriterionSpec make_criterion(std::string_view id, double first_row_preference = 1.0) {
  if (!criteria::is_base(id) && !criteria::is_extended(id)) {
    throw Error(ErrorCode::unknown_criterion, "unknown criterion '" + std::string(id) + "'");
  }
  const auto orientation = id == criteria::availability ? Orientation::benefit : Orientation::cost;
  return {std::string(id), orientation, first_row_preference};
}

/// The two leakage criteria for danger ratio s: t = (1, 1/s).
[[nodiscard]] inline std::vector<CriterionSpec> base_criteria(double s = 1.0) {
  return {make_criterion(criteria::extra_permissions, 1.0), make_criterion(criteria::subordinate_roles, 1.0 / s)};
}

struct AuthorizationQuery {
  PermissionRequest required;
  double s = 1.0;
  std::vector<CriterionSpec> criteria = base_criteria();
  double alpha = 1.0;
  double lambda = 1.0;

  friend bool operator==(const AuthorizationQuery&, const AuthorizationQuery&) = default;
};

/// Criteria actually used for a query: extra-permissions first with
/// preference 1, subordinate-roles second with preference 1/s, then the
/// extended criteria in the order given. Base entries in query.criteria
/// only mark position; s is authoritative for their preferences.
[[nodiscard]] inline std::vector<CriterionSpec> resolve_criteria(const AuthorizationQuery& query) {
  auto out = base_criteria(query.s);
  for (const auto& spec : query.criteria) {
    if (criteria::is_base(spec.id)) continue;
    auto resolved = make_criterion(spec.id, spec.first_row_preference);
    for (const auto& existing : out) {
      if (existing.id == resolved.id) {
        throw Error(ErrorCode::invalid_parameter, "criterion '" + spec.id + "' listed twice");
      }
    }
    if (!(resolved.first_row_preference > 0.0) || !std::isfinite(resolved.first_row_preference)) {
      throw Error(ErrorCode::non_positive_preference,
                  "criterion '" + spec.id + "' has a non-positive first-row preference");
    }
    out.push_back(std::move(resolved));
  }
  return out;
}

struct RoleScore {
  RoleId role;
  std::size_t dp = 0;
  std::size_t dr = 1;
  std::map<std::string, double> extended;
  std::map<std::string, double> per_criterion_weight;
  double probability = 0.0;

  friend bool operator==(const RoleScore&, const RoleScore&) = default;
};

enum class RankingMode { exact_match, ranked };

inline constexpr std::string_view to_string(RankingMode mode) noexcept {
  return mode == RankingMode::exact_match ? "exact-match" : "ranked";
}

struct RankingResult {
  RankingMode mode = RankingMode::ranked;
  std::vector<RoleScore> scores;
  RoleId selected;
  AuthorizationQuery parameters;

  [[nodiscard]] std::vector<RoleId> order() const {
    std::vector<RoleId> out;
    out.reserve(scores.size());
    for (const auto& s : scores) out.push_back(s.role);
    return out;
  }

  friend bool operator==(const RankingResult&, const RankingResult&) = default;
};

struct ChangePoint {
  double s_before = 0.0;
  double s_after = 0.0;
  std::vector<RoleId> order_before;
  std::vector<RoleId> order_after;

  friend bool operator==(const ChangePoint&, const ChangePoint&) = default;
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<RankingResult> rankings;
  std::vector<ChangePoint> change_points;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Probabilities closer than this are ties and fall through to dp, dr, id.
inline constexpr double kProbabilityTieTolerance = 1e-12;

namespace detail {

inline std::vector<std::size_t> indices_of(const RoleGraph& graph, const std::vector<RoleId>& candidates) {
  std::vector<std::size_t> out;
  out.reserve(candidates.size());
  for (const auto& role : candidates) out.push_back(graph.role_index(role));
  return out;
}

inline void check_parameters(const AuthorizationQuery& query) {
  if (!(query.s > 0.0) || !std::isfinite(query.s)) throw Error(ErrorCode::invalid_parameter, "s must be positive");
  if (!(query.lambda > 0.0) || !std::isfinite(query.lambda)) {
    throw Error(ErrorCode::invalid_parameter, "lambda must be positive");
  }
  if (!(query.alpha >= 0.0) || !std::isfinite(query.alpha)) {
    throw Error(ErrorCode::invalid_parameter, "alpha must be non-negative");
  }
}

inline ScoreVector extended_scores(const RoleGraph& graph, const std::vector<std::size_t>& candidates,
                                   std::string_view id, double alpha, double lambda) {
  std::vector<double> values;
  values.reserve(candidates.size());
  for (auto r : candidates) {
    if (id == criteria::availability) {
      values.push_back(static_cast<double>(graph.effective_count(r)));
    } else if (id == criteria::integrity) {
      values.push_back(static_cast<double>(graph.danger_count(r)) + 1.0);
    } else if (id == criteria::manager_cost) {
      const double dm = static_cast<double>(graph.direct_subordinates(r));
      values.push_back(std::pow(dm + 1.0, alpha) * std::pow(lambda, alpha));
    } else {
      throw Error(ErrorCode::unknown_criterion, "unknown extended criterion '" + std::string(id) + "'");
    }
  }
  return ScoreVector(std::move(values));
}

// Orders by probability descending; runs of probabilities within the tie
// tolerance of their neighbour are re-ordered by dp, dr, then role id.
inline void sort_scores(std::vector<RoleScore>& scores) {
  auto tie_break = [](const RoleScore& a, const RoleScore& b) {
    if (a.dp != b.dp) return a.dp < b.dp;
    if (a.dr != b.dr) return a.dr < b.dr;
    return a.role < b.role;
  };
  std::sort(scores.begin(), scores.end(), [&](const RoleScore& a, const RoleScore& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return tie_break(a, b);
  });
  std::size_t start = 0;
  for (std::size_t i = 1; i <= scores.size(); ++i) {
    if (i == scores.size() || scores[i - 1].probability - scores[i].probability > kProbabilityTieTolerance) {
      std::sort(scores.begin() + static_cast<std::ptrdiff_t>(start), scores.begin() + static_cast<std::ptrdiff_t>(i),
                tie_break);
      start = i;
    }
  }
}

}  // namespace detail

/// dp_i = |effective(r_i)| - |PU|.
[[nodiscard]] inline std::vector<std::size_t> compute_dp(const RoleGraph& graph, const std::vector<RoleId>& candidates,
                                                         const PermissionRequest& request) {
  const Bits mask = graph.request_mask(request);
  const std::size_t required = mask.count();
  std::vector<std::size_t> out;
  out.reserve(candidates.size());
  for (auto r : detail::indices_of(graph, candidates)) {
    if (!mask.is_subset_of(graph.effective_mask(r))) {
      throw Error(ErrorCode::candidate_not_superset,
                  "role '" + graph.roles()[r].str() + "' does not cover the requested permissions");
    }
    out.push_back(graph.effective_count(r) - required);
  }
  return out;
}

/// dr_i = |dominated_roles(r_i)|, at least 1 since dominance is reflexive.
[[nodiscard]] inline std::vector<std::size_t> compute_dr(const RoleGraph& graph, const std::vector<RoleId>& candidates) {
  std::vector<std::size_t> out;
  out.reserve(candidates.size());
  for (auto r : detail::indices_of(graph, candidates)) out.push_back(graph.dominated_count(r));
  return out;
}

/// Raw values for an extended criterion:
///   availability  |effective(r)|                   (benefit)
///   integrity     |effective(r) & danger| + 1      (cost)
///   manager-cost  (dm + 1)^alpha * lambda^alpha    (cost)
[[nodiscard]] inline ScoreVector extended_scores(const RoleGraph& graph, const std::vector<RoleId>& candidates,
                                                 std::string_view criterion_id, double alpha = 1.0,
                                                 double lambda = 1.0) {
  if (!criteria::is_extended(criterion_id)) {
    throw Error(ErrorCode::unknown_criterion, "unknown extended criterion '" + std::string(criterion_id) + "'");
  }
  return detail::extended_scores(graph, detail::indices_of(graph, candidates), criterion_id, alpha, lambda);
}

[[nodiscard]] inline RankingResult rank_roles(const RoleGraph& graph, const AuthorizationQuery& query) {
  detail::check_parameters(query);
  RankingResult result;
  result.parameters = query;
  result.parameters.criteria = resolve_criteria(query);
  const auto& specs = result.parameters.criteria;

  const Bits mask = graph.request_mask(query.required);
  const auto candidates = graph.candidate_indices(mask);
  if (candidates.empty()) throw Error(ErrorCode::no_candidate, "no role grants all requested permissions");

  const std::size_t k = candidates.size();
  const std::size_t required = mask.count();
  std::vector<std::size_t> dp(k);
  std::vector<std::size_t> dr(k);
  for (std::size_t i = 0; i < k; ++i) {
    dp[i] = graph.effective_count(candidates[i]) - required;
    dr[i] = graph.dominated_count(candidates[i]);
  }

  std::vector<std::map<std::string, double>> extended(k);
  for (const auto& spec : specs) {
    if (!criteria::is_extended(spec.id)) continue;
    const auto raw = detail::extended_scores(graph, candidates, spec.id, query.alpha, query.lambda);
    for (std::size_t i = 0; i < k; ++i) extended[i][spec.id] = raw[i];
  }

  // Exact fit: smallest dr, then first in lexicographic order.
  std::size_t exact = k;
  for (std::size_t i = 0; i < k; ++i) {
    if (dp[i] == 0 && (exact == k || dr[i] < dr[exact])) exact = i;
  }
  if (exact != k) {
    result.mode = RankingMode::exact_match;
    result.selected = graph.roles()[candidates[exact]];
    result.scores.push_back({result.selected, 0, dr[exact], extended[exact], {}, 1.0});
    return result;
  }

  std::vector<WeightVector> alternative_weights;
  alternative_weights.reserve(specs.size());
  for (const auto& spec : specs) {
    std::vector<double> raw(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (spec.id == criteria::extra_permissions) {
        raw[i] = static_cast<double>(dp[i]);
      } else if (spec.id == criteria::subordinate_roles) {
        raw[i] = static_cast<double>(dr[i]);
      } else {
        raw[i] = extended[i].at(spec.id);
      }
    }
    alternative_weights.push_back(weights_from_scores(ScoreVector(std::move(raw)), spec.orientation));
  }
  const auto criterion_weights = criteria_weights(specs);
  const auto probability = combine(criterion_weights, alternative_weights);

  result.mode = RankingMode::ranked;
  result.scores.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    RoleScore score{graph.roles()[candidates[i]], dp[i], dr[i], std::move(extended[i]), {}, probability[i]};
    for (std::size_t c = 0; c < specs.size(); ++c) score.per_criterion_weight[specs[c].id] = alternative_weights[c][i];
    result.scores.push_back(std::move(score));
  }
  detail::sort_scores(result.scores);
  result.selected = result.scores.front().role;
  return result;
}

[[nodiscard]] inline RoleId authorize(const RoleGraph& graph, const AuthorizationQuery& query) {
  return rank_roles(graph, query).selected;
}

/// Geometrically spaced grid from s_min to s_max inclusive.
[[nodiscard]] inline std::vector<double> log_grid(double s_min, double s_max, int steps) {
  if (!(s_min > 0.0) || !std::isfinite(s_min) || !std::isfinite(s_max) || !(s_max > s_min)) {
    throw Error(ErrorCode::invalid_parameter, "sweep bounds must satisfy 0 < sMin < sMax");
  }
  if (steps < 2) throw Error(ErrorCode::invalid_parameter, "sweep needs at least 2 steps");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  const double ratio = std::log(s_max / s_min);
  for (int i = 0; i < steps; ++i) {
    grid[static_cast<std::size_t>(i)] = s_min * std::exp(ratio * i / (steps - 1));
  }
  grid.front() = s_min;
  grid.back() = s_max;
  return grid;
}

/// Re-ranks at each grid value of s and records where the ordering changes.
[[nodiscard]] inline SweepResult sensitivity_sweep(const RoleGraph& graph, const std::vector<double>& grid,
                                                   const AuthorizationQuery& base) {
  if (grid.empty()) throw Error(ErrorCode::invalid_parameter, "sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw Error(ErrorCode::invalid_parameter, "sweep grid values must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::invalid_parameter, "sweep grid must be strictly increasing");
    }
  }

  SweepResult result;
  result.grid = grid;
  result.rankings.reserve(grid.size());
  for (double s : grid) {
    auto query = base;
    query.s = s;
    result.rankings.push_back(rank_roles(graph, query));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    auto before = result.rankings[i - 1].order();
    auto after = result.rankings[i].order();
    if (before != after) result.change_points.push_back({grid[i - 1], grid[i], std::move(before), std::move(after)});
  }
  return result;
}

}  // namespace rbahp
