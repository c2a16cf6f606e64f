#pragma once

// Random DAG hierarchies for property tests. The description is kept as
// plain index lists so the oracles can work without touching RoleGraph.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rbahp::fixtures {

struct RandomHierarchy {
  std::vector<std::string> roles;
  std::vector<std::string> permissions;
  std::vector<std::pair<std::size_t, std::size_t>> grants;  // (role, permission)
  std::vector<std::pair<std::size_t, std::size_t>> edges;   // (senior, junior)
  std::vector<std::size_t> danger;

  // Declarations in a shuffled-but-valid order to exercise the parser.
  [[nodiscard]] std::string to_rhf() const {
    std::string out = "# generated\n";
    for (const auto& p : permissions) out += "permission " + p + "\n";
    for (const auto& r : roles) out += "role " + r + "\n";
    for (auto [r, p] : grants) out += "grant " + roles[r] + " " + permissions[p] + "\n";
    for (auto [a, b] : edges) out += "dominates " + roles[a] + " " + roles[b] + "\n";
    for (auto p : danger) out += "danger " + permissions[p] + "\n";
    return out;
  }
};

/// n roles and m permissions; edges only go from lower to higher position
/// in a random permutation, so the result is acyclic.
inline RandomHierarchy random_hierarchy(std::mt19937_64& rng, std::size_t n, std::size_t m, double edge_p = 0.3,
                                        double grant_p = 0.35, double danger_p = 0.2) {
  RandomHierarchy h;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) h.roles.push_back("role" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) h.permissions.push_back("perm" + std::to_string(i));
  std::shuffle(h.roles.begin(), h.roles.end(), rng);

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::shuffle(rank.begin(), rank.end(), rng);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng) < edge_p) h.edges.emplace_back(rank[a], rank[b]);
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t p = 0; p < m; ++p) {
      if (coin(rng) < grant_p) h.grants.emplace_back(r, p);
    }
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (coin(rng) < danger_p) h.danger.push_back(p);
  }
  std::shuffle(h.grants.begin(), h.grants.end(), rng);
  std::shuffle(h.edges.begin(), h.edges.end(), rng);
  return h;
}

}  // namespace rbahp::fixtures
