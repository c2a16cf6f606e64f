#pragma once

/**
 * Role hierarchy model.
 *
 * A RoleGraph is an immutable RBAC policy: declared roles and permissions,
 * direct grants, direct strict dominance edges (senior -> junior) and the set
 * of integrity-dangerous permissions. Dominance closures and effective
 * permission sets are computed once at construction and stored as bit
 * vectors over a frozen lexicographic index of roles and permissions, so
 * every query afterwards is a read-only bit operation.
 *
 * Hierarchies are read from the line-based RHF text format:
 *
 *     # comment
 *     permission <id>
 *     role <id>
 *     grant <role-id> <perm-id>
 *     dominates <senior-id> <junior-id>
 *     danger <perm-id>
 *
 * Names must be declared before use and may be declared only once.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rbahp/error.hpp"
#include "rbahp/token.hpp"

namespace rbahp {

using Bits = boost::dynamic_bitset<std::uint64_t>;

enum class Severity { warning, error };

inline constexpr std::string_view to_string(Severity severity) noexcept {
  return severity == Severity::error ? "error" : "warning";
}

struct ValidationIssue {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string location;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  void add(Severity severity, std::string code, std::string message, std::string location = {}) {
    if (severity == Severity::error) ok = false;
    issues.push_back({severity, std::move(code), std::move(message), std::move(location)});
  }

  void add(ErrorCode code, std::string message, std::string location = {}) {
    add(Severity::error, std::string(to_string(code)), std::move(message), std::move(location));
  }

  void merge(const ValidationReport& other) {
    for (const auto& issue : other.issues) add(issue.severity, issue.code, issue.message, issue.location);
  }

  [[nodiscard]] const ValidationIssue* first_error() const noexcept {
    for (const auto& issue : issues) {
      if (issue.severity == Severity::error) return &issue;
    }
    return nullptr;
  }
};

/// The requested permission set PU.
struct PermissionRequest {
  std::set<PermissionId> required;

  PermissionRequest() = default;
  explicit PermissionRequest(std::set<PermissionId> ids) : required(std::move(ids)) {}
  PermissionRequest(std::initializer_list<const char*> ids) {
    for (const char* id : ids) required.emplace(id);
  }

  friend bool operator==(const PermissionRequest&, const PermissionRequest&) = default;
};

namespace detail {

inline std::string line_location(int line) {
  return line > 0 ? "line " + std::to_string(line) : std::string{};
}

inline ErrorCode error_code_from_string(std::string_view code) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::invalid_parameter); ++i) {
    auto candidate = static_cast<ErrorCode>(i);
    if (to_string(candidate) == code) return candidate;
  }
  return ErrorCode::syntax;
}

}  // namespace detail

class RoleGraph {
 public:
  class Builder;

  RoleGraph() = default;

  [[nodiscard]] std::size_t role_count() const noexcept { return roles_.size(); }
  [[nodiscard]] std::size_t permission_count() const noexcept { return permissions_.size(); }

  /// Roles in lexicographic order; positions are the frozen role indices.
  [[nodiscard]] const std::vector<RoleId>& roles() const noexcept { return roles_; }
  /// Permissions in lexicographic order; positions are bit positions.
  [[nodiscard]] const std::vector<PermissionId>& permissions() const noexcept { return permissions_; }

  [[nodiscard]] bool has_role(const RoleId& role) const { return role_index_.contains(role.str()); }
  [[nodiscard]] bool has_permission(const PermissionId& perm) const {
    return permission_index_.contains(perm.str());
  }

  [[nodiscard]] std::size_t role_index(const RoleId& role) const {
    auto it = role_index_.find(role.str());
    if (it == role_index_.end()) throw Error(ErrorCode::unknown_role, "unknown role '" + role.str() + "'");
    return it->second;
  }

  [[nodiscard]] std::size_t permission_index(const PermissionId& perm) const {
    auto it = permission_index_.find(perm.str());
    if (it == permission_index_.end()) {
      throw Error(ErrorCode::unknown_permission, "unknown permission '" + perm.str() + "'");
    }
    return it->second;
  }

  // Index-level views used by the authorizer.
  [[nodiscard]] const Bits& direct_mask(std::size_t role) const { return direct_grants_.at(role); }
  [[nodiscard]] const Bits& effective_mask(std::size_t role) const { return effective_.at(role); }
  [[nodiscard]] const Bits& dominated_mask(std::size_t role) const { return dominated_.at(role); }
  [[nodiscard]] const Bits& danger_mask() const noexcept { return danger_; }
  [[nodiscard]] const std::vector<std::size_t>& direct_juniors(std::size_t role) const {
    return juniors_.at(role);
  }

  [[nodiscard]] std::size_t effective_count(std::size_t role) const { return effective_.at(role).count(); }
  [[nodiscard]] std::size_t dominated_count(std::size_t role) const { return dominated_.at(role).count(); }
  [[nodiscard]] std::size_t direct_subordinates(std::size_t role) const { return juniors_.at(role).size(); }
  [[nodiscard]] std::size_t danger_count(std::size_t role) const { return (effective_.at(role) & danger_).count(); }

  [[nodiscard]] std::set<PermissionId> direct_permissions(const RoleId& role) const {
    return permission_set(direct_grants_[role_index(role)]);
  }

  [[nodiscard]] std::set<PermissionId> effective_permissions(const RoleId& role) const {
    return permission_set(effective_[role_index(role)]);
  }

  [[nodiscard]] std::set<RoleId> dominated_roles(const RoleId& role) const {
    std::set<RoleId> out;
    const Bits& mask = dominated_[role_index(role)];
    for (auto i = mask.find_first(); i != Bits::npos; i = mask.find_next(i)) out.insert(roles_[i]);
    return out;
  }

  [[nodiscard]] std::size_t direct_subordinates_count(const RoleId& role) const {
    return juniors_[role_index(role)].size();
  }

  [[nodiscard]] std::set<PermissionId> danger_permissions() const { return permission_set(danger_); }

  /// Bit vector of PU over the frozen permission index.
  [[nodiscard]] Bits request_mask(const PermissionRequest& request) const {
    if (request.required.empty()) throw Error(ErrorCode::empty_request, "permission request is empty");
    Bits mask(permissions_.size());
    for (const auto& perm : request.required) mask.set(permission_index(perm));
    return mask;
  }

  /// Role indices whose effective permissions include the request, ascending.
  [[nodiscard]] std::vector<std::size_t> candidate_indices(const Bits& request) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < roles_.size(); ++i) {
      if (request.is_subset_of(effective_[i])) out.push_back(i);
    }
    return out;
  }

  /// The candidate set RU, in lexicographic order. Throws no_candidate when empty.
  [[nodiscard]] std::vector<RoleId> candidate_roles(const PermissionRequest& request) const {
    auto indices = candidate_indices(request_mask(request));
    if (indices.empty()) {
      throw Error(ErrorCode::no_candidate, "no role grants all requested permissions");
    }
    std::vector<RoleId> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(roles_[i]);
    return out;
  }

  /// Direct grants as (role, permission) pairs, sorted.
  [[nodiscard]] std::vector<std::pair<RoleId, PermissionId>> grants() const {
    std::vector<std::pair<RoleId, PermissionId>> out;
    for (std::size_t r = 0; r < roles_.size(); ++r) {
      const Bits& mask = direct_grants_[r];
      for (auto p = mask.find_first(); p != Bits::npos; p = mask.find_next(p)) {
        out.emplace_back(roles_[r], permissions_[p]);
      }
    }
    return out;
  }

  /// Direct dominance edges as (senior, junior) pairs, sorted.
  [[nodiscard]] std::vector<std::pair<RoleId, RoleId>> dominance() const {
    std::vector<std::pair<RoleId, RoleId>> out;
    for (std::size_t r = 0; r < roles_.size(); ++r) {
      for (auto j : juniors_[r]) out.emplace_back(roles_[r], roles_[j]);
    }
    return out;
  }

  friend bool operator==(const RoleGraph& a, const RoleGraph& b) {
    return a.roles_ == b.roles_ && a.permissions_ == b.permissions_ && a.direct_grants_ == b.direct_grants_ &&
           a.juniors_ == b.juniors_ && a.danger_ == b.danger_;
  }

 private:
  [[nodiscard]] std::set<PermissionId> permission_set(const Bits& mask) const {
    std::set<PermissionId> out;
    for (auto i = mask.find_first(); i != Bits::npos; i = mask.find_next(i)) out.insert(permissions_[i]);
    return out;
  }

  std::vector<RoleId> roles_;
  std::vector<PermissionId> permissions_;
  std::unordered_map<std::string, std::size_t> role_index_;
  std::unordered_map<std::string, std::size_t> permission_index_;
  std::vector<Bits> direct_grants_;
  std::vector<std::vector<std::size_t>> juniors_;
  Bits danger_;
  std::vector<Bits> dominated_;
  std::vector<Bits> effective_;
};

/// Accumulates directives in declaration order, diagnoses them, and freezes
/// them into a RoleGraph.
class RoleGraph::Builder {
 public:
  enum class Kind { permission, role, grant, dominates, danger };

  struct Directive {
    Kind kind;
    std::string first;
    std::string second;
    int line = 0;
  };

  Builder& permission(std::string id, int line = 0) { return push(Kind::permission, std::move(id), {}, line); }
  Builder& role(std::string id, int line = 0) { return push(Kind::role, std::move(id), {}, line); }
  Builder& grant(std::string role, std::string perm, int line = 0) {
    return push(Kind::grant, std::move(role), std::move(perm), line);
  }
  Builder& dominates(std::string senior, std::string junior, int line = 0) {
    return push(Kind::dominates, std::move(senior), std::move(junior), line);
  }
  Builder& danger(std::string perm, int line = 0) { return push(Kind::danger, std::move(perm), {}, line); }

  /// All structural errors: invalid tokens, duplicates, references to
  /// undeclared names and dominance cycles.
  [[nodiscard]] ValidationReport diagnose() const {
    ValidationReport report;
    std::set<std::string> roles;
    std::set<std::string> perms;
    std::set<std::pair<std::string, std::string>> grants;
    std::set<std::pair<std::string, std::string>> edges;
    std::set<std::string> danger;
    std::vector<const Directive*> edge_directives;

    auto check_token = [&](const std::string& id, const Directive& d) {
      if (is_valid_token(id)) return true;
      report.add(ErrorCode::syntax, "invalid identifier '" + id + "'", detail::line_location(d.line));
      return false;
    };

    for (const auto& d : directives_) {
      const auto where = detail::line_location(d.line);
      switch (d.kind) {
        case Kind::permission:
        case Kind::role: {
          if (!check_token(d.first, d)) break;
          auto& names = d.kind == Kind::role ? roles : perms;
          const char* what = d.kind == Kind::role ? "role" : "permission";
          if (!names.insert(d.first).second) {
            report.add(ErrorCode::duplicate_declaration, std::string(what) + " '" + d.first + "' declared twice",
                       where);
          }
          break;
        }
        case Kind::grant: {
          if (!check_token(d.first, d) || !check_token(d.second, d)) break;
          bool known = true;
          if (!roles.contains(d.first)) {
            report.add(ErrorCode::unknown_reference, "grant names undeclared role '" + d.first + "'", where);
            known = false;
          }
          if (!perms.contains(d.second)) {
            report.add(ErrorCode::unknown_reference, "grant names undeclared permission '" + d.second + "'",
                       where);
            known = false;
          }
          if (known && !grants.emplace(d.first, d.second).second) {
            report.add(ErrorCode::duplicate_declaration, "grant " + d.first + " " + d.second + " repeated", where);
          }
          break;
        }
        case Kind::dominates: {
          if (!check_token(d.first, d) || !check_token(d.second, d)) break;
          bool known = true;
          for (const auto* id : {&d.first, &d.second}) {
            if (!roles.contains(*id)) {
              report.add(ErrorCode::unknown_reference, "dominates names undeclared role '" + *id + "'", where);
              known = false;
            }
          }
          if (!known) break;
          if (d.first == d.second) {
            report.add(ErrorCode::cycle, "role '" + d.first + "' cannot strictly dominate itself", where);
          } else if (!edges.emplace(d.first, d.second).second) {
            report.add(ErrorCode::duplicate_declaration, "dominates " + d.first + " " + d.second + " repeated",
                       where);
          } else {
            edge_directives.push_back(&d);
          }
          break;
        }
        case Kind::danger: {
          if (!check_token(d.first, d)) break;
          if (!perms.contains(d.first)) {
            report.add(ErrorCode::unknown_reference, "danger names undeclared permission '" + d.first + "'", where);
          } else if (!danger.insert(d.first).second) {
            report.add(ErrorCode::duplicate_declaration, "danger " + d.first + " repeated", where);
          }
          break;
        }
      }
    }

    if (report.ok) report_cycles(roles, edge_directives, report);
    return report;
  }

  /// Freezes the directives. Throws the first structural error.
  [[nodiscard]] RoleGraph build() const {
    auto report = diagnose();
    if (const auto* issue = report.first_error()) {
      std::string message = issue->message;
      if (!issue->location.empty()) message = issue->location + ": " + message;
      throw Error(detail::error_code_from_string(issue->code), message);
    }
    return freeze();
  }

 private:
  Builder& push(Kind kind, std::string first, std::string second, int line) {
    directives_.push_back({kind, std::move(first), std::move(second), line});
    return *this;
  }

  // Depth-first search over direct edges; reports one issue per back edge.
  static void report_cycles(const std::set<std::string>& roles, const std::vector<const Directive*>& edges,
                            ValidationReport& report) {
    std::unordered_map<std::string, std::vector<const Directive*>> out;
    for (const auto* e : edges) out[e->first].push_back(e);

    enum class Mark { none, active, done };
    std::unordered_map<std::string, Mark> mark;
    std::vector<std::string> path;

    // Iterative DFS so deep chains do not exhaust the stack.
    for (const auto& start : roles) {
      if (mark[start] != Mark::none) continue;
      std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
      mark[start] = Mark::active;
      path.push_back(start);
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        auto& succ = out[node];
        if (next < succ.size()) {
          const Directive* edge = succ[next++];
          const std::string& junior = edge->second;
          Mark& m = mark[junior];
          if (m == Mark::active) {
            auto from = std::find(path.begin(), path.end(), junior);
            std::string cycle;
            for (auto it = from; it != path.end(); ++it) cycle += *it + " -> ";
            cycle += junior;
            report.add(ErrorCode::cycle, "dominance cycle " + cycle, detail::line_location(edge->line));
          } else if (m == Mark::none) {
            m = Mark::active;
            path.push_back(junior);
            stack.emplace_back(junior, 0);
          }
        } else {
          mark[node] = Mark::done;
          path.pop_back();
          stack.pop_back();
        }
      }
    }
  }

  [[nodiscard]] RoleGraph freeze() const {
    RoleGraph g;
    std::vector<std::string> roles;
    std::vector<std::string> perms;
    for (const auto& d : directives_) {
      if (d.kind == Kind::role) roles.push_back(d.first);
      if (d.kind == Kind::permission) perms.push_back(d.first);
    }
    std::sort(roles.begin(), roles.end());
    std::sort(perms.begin(), perms.end());

    const std::size_t n = roles.size();
    const std::size_t m = perms.size();
    for (std::size_t i = 0; i < n; ++i) {
      g.role_index_.emplace(roles[i], i);
      g.roles_.emplace_back(roles[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      g.permission_index_.emplace(perms[i], i);
      g.permissions_.emplace_back(perms[i]);
    }

    g.direct_grants_.assign(n, Bits(m));
    g.juniors_.assign(n, {});
    g.danger_ = Bits(m);
    for (const auto& d : directives_) {
      switch (d.kind) {
        case Kind::grant: g.direct_grants_[g.role_index_.at(d.first)].set(g.permission_index_.at(d.second)); break;
        case Kind::dominates: g.juniors_[g.role_index_.at(d.first)].push_back(g.role_index_.at(d.second)); break;
        case Kind::danger: g.danger_.set(g.permission_index_.at(d.first)); break;
        default: break;
      }
    }
    for (auto& j : g.juniors_) std::sort(j.begin(), j.end());

    // Closures in reverse topological order: every junior is finished
    // before any of its seniors.
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& j : g.juniors_) {
      for (auto k : j) ++indegree[k];
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) order.push_back(i);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (auto k : g.juniors_[order[head]]) {
        if (--indegree[k] == 0) order.push_back(k);
      }
    }

    g.dominated_.assign(n, Bits(n));
    g.effective_ = g.direct_grants_;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t r = *it;
      g.dominated_[r].set(r);
      for (auto k : g.juniors_[r]) {
        g.dominated_[r] |= g.dominated_[k];
        g.effective_[r] |= g.effective_[k];
      }
    }
    return g;
  }

  std::vector<Directive> directives_;
};

struct ParseOutcome {
  std::optional<RoleGraph> graph;
  ValidationReport report;
};

/// Structural and graph-level findings on an already-built graph. Only
/// warnings are possible since construction rejects structural errors.
[[nodiscard]] inline ValidationReport validate(const RoleGraph& graph) {
  ValidationReport report;
  Bits granted(graph.permission_count());
  for (std::size_t r = 0; r < graph.role_count(); ++r) granted |= graph.direct_mask(r);
  for (std::size_t p = 0; p < graph.permission_count(); ++p) {
    if (!granted.test(p)) {
      const auto& id = graph.permissions()[p].str();
      report.add(Severity::warning, "UNUSED_PERMISSION", "permission '" + id + "' is granted to no role",
                 "permission " + id);
    }
  }
  for (std::size_t r = 0; r < graph.role_count(); ++r) {
    if (graph.effective_mask(r).none()) {
      const auto& id = graph.roles()[r].str();
      report.add(Severity::warning, "EMPTY_ROLE", "role '" + id + "' has no permissions", "role " + id);
    }
  }
  return report;
}

/// Parses RHF text, collecting every issue instead of stopping at the first.
[[nodiscard]] inline ParseOutcome parse_hierarchy_report(std::string_view text) {
  ParseOutcome outcome;
  RoleGraph::Builder builder;

  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  int line_no = 0;
  std::istringstream lines{std::string(text)};
  for (std::string raw; std::getline(lines, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string> words;
    std::istringstream in{std::string(line)};
    for (std::string w; in >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;

    const auto where = detail::line_location(line_no);
    const std::string& verb = words[0];
    auto arity = [&](std::size_t expected) {
      if (words.size() == expected + 1) return true;
      outcome.report.add(ErrorCode::syntax,
                         "'" + verb + "' expects " + std::to_string(expected) + " argument(s), got " +
                             std::to_string(words.size() - 1),
                         where);
      return false;
    };

    if (verb == "permission") {
      if (arity(1)) builder.permission(words[1], line_no);
    } else if (verb == "role") {
      if (arity(1)) builder.role(words[1], line_no);
    } else if (verb == "grant") {
      if (arity(2)) builder.grant(words[1], words[2], line_no);
    } else if (verb == "dominates") {
      if (arity(2)) builder.dominates(words[1], words[2], line_no);
    } else if (verb == "danger") {
      if (arity(1)) builder.danger(words[1], line_no);
    } else {
      outcome.report.add(ErrorCode::syntax, "unknown directive '" + verb + "'", where);
    }
  }

  outcome.report.merge(builder.diagnose());
  if (outcome.report.ok) {
    outcome.graph = builder.build();
    outcome.report.merge(validate(*outcome.graph));
  }
  return outcome;
}

/// Parses RHF text. Throws Error carrying the code of the first structural
/// problem (syntax, duplicate_declaration, unknown_reference, cycle).
[[nodiscard]] inline RoleGraph parse_hierarchy(std::string_view text) {
  auto outcome = parse_hierarchy_report(text);
  if (const auto* issue = outcome.report.first_error()) {
    std::string message = issue->message;
    if (!issue->location.empty()) message = issue->location + ": " + message;
    throw Error(detail::error_code_from_string(issue->code), message);
  }
  return std::move(*outcome.graph);
}

/// Canonical RHF: directive classes in declaration order, sorted within each.
[[nodiscard]] inline std::string serialize_hierarchy(const RoleGraph& graph) {
  std::ostringstream out;
  for (const auto& p : graph.permissions()) out << "permission " << p << '\n';
  for (const auto& r : graph.roles()) out << "role " << r << '\n';
  for (const auto& [r, p] : graph.grants()) out << "grant " << r << ' ' << p << '\n';
  for (const auto& [senior, junior] : graph.dominance()) out << "dominates " << senior << ' ' << junior << '\n';
  for (const auto& p : graph.danger_permissions()) out << "danger " << p << '\n';
  return out.str();
}

inline std::set<PermissionId> effective_permissions(const RoleGraph& graph, const RoleId& role) {
  return graph.effective_permissions(role);
}

inline std::set<RoleId> dominated_roles(const RoleGraph& graph, const RoleId& role) {
  return graph.dominated_roles(role);
}

inline std::size_t direct_subordinates_count(const RoleGraph& graph, const RoleId& role) {
  return graph.direct_subordinates_count(role);
}

inline std::vector<RoleId> candidate_roles(const RoleGraph& graph, const PermissionRequest& request) {
  return graph.candidate_roles(request);
}

}  // namespace rbahp
