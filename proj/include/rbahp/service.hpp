#pragma once

// HTTP front end over a single swappable hierarchy snapshot.
//
//   PUT  /hierarchy   RHF text body; replaces the snapshot on success
//   GET  /roles       per-role summary of the current snapshot
//   POST /authorize   query document -> ranking document
//   POST /sweep       query document + sMin/sMax/steps -> sweep document
//   GET  /health
//
// Handlers are plain member functions returning (status, JSON) so they can
// be exercised without a socket; mount() wires them onto an httplib server.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "httplib.h"
#include "json.hpp"

#include "rbahp/authorizer.hpp"
#include "rbahp/role_graph.hpp"
#include "rbahp/wire.hpp"

namespace rbahp {

struct HierarchySnapshot {
  RoleGraph graph;
  std::uint64_t version = 0;
  std::chrono::system_clock::time_point loaded_at;
};

/// Readers take a reference-counted snapshot; the lock covers only the
/// pointer copy. Writers serialize among themselves.
class SnapshotStore {
 public:
  [[nodiscard]] std::shared_ptr<const HierarchySnapshot> current() const {
    std::lock_guard lock(pointer_mutex_);
    return current_;
  }

  std::uint64_t replace(RoleGraph graph) {
    std::lock_guard write(write_mutex_);
    auto next = std::make_shared<const HierarchySnapshot>(
        HierarchySnapshot{std::move(graph), version_ + 1, std::chrono::system_clock::now()});
    {
      std::lock_guard lock(pointer_mutex_);
      current_ = std::move(next);
    }
    return ++version_;
  }

  [[nodiscard]] std::uint64_t version() const {
    std::lock_guard write(write_mutex_);
    return version_;
  }

 private:
  mutable std::mutex pointer_mutex_;
  mutable std::mutex write_mutex_;
  std::shared_ptr<const HierarchySnapshot> current_;
  std::uint64_t version_ = 0;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  static constexpr double kMaxSweepSteps = 10000.0;

  Response put_hierarchy(std::string_view body) {
    auto outcome = parse_hierarchy_report(body);
    if (!outcome.graph) {
      return {400, {{"version", store_.version()}, {"report", wire::to_json(outcome.report)}}};
    }
    const auto version = store_.replace(std::move(*outcome.graph));
    return {200, {{"version", version}, {"report", wire::to_json(outcome.report)}}};
  }

  [[nodiscard]] Response get_roles() const {
    auto snap = store_.current();
    if (!snap) return no_hierarchy();
    const auto& g = snap->graph;
    nlohmann::json roles = nlohmann::json::array();
    for (std::size_t r = 0; r < g.role_count(); ++r) {
      roles.push_back({{"id", g.roles()[r].str()},
                       {"directPermissionCount", g.direct_mask(r).count()},
                       {"effectivePermissionCount", g.effective_count(r)},
                       {"dr", g.dominated_count(r)},
                       {"dm", g.direct_subordinates(r)},
                       {"juniors", juniors_of(g, r)}});
    }
    return {200, {{"version", snap->version}, {"roles", std::move(roles)}}};
  }

  [[nodiscard]] Response post_authorize(std::string_view body) const {
    auto snap = store_.current();
    if (!snap) return no_hierarchy();
    return guarded([&] {
      auto query = wire::query_from_json(parse_body(body));
      auto doc = wire::to_json(rank_roles(snap->graph, query));
      doc["version"] = snap->version;
      return Response{200, std::move(doc)};
    });
  }

  [[nodiscard]] Response post_sweep(std::string_view body) const {
    auto snap = store_.current();
    if (!snap) return no_hierarchy();
    return guarded([&] {
      const auto doc = parse_body(body);
      auto query = wire::query_from_json(doc);
      const double s_min = number_or(doc, "sMin", 0.1);
      const double s_max = number_or(doc, "sMax", 10.0);
      const double steps = number_or(doc, "steps", 21.0);
      if (!(steps >= 2.0 && steps <= kMaxSweepSteps) || steps != std::floor(steps)) {
        throw Error(ErrorCode::invalid_parameter, "'steps' must be an integer between 2 and 10000");
      }
      auto grid = log_grid(s_min, s_max, static_cast<int>(steps));
      auto out = wire::to_json(sensitivity_sweep(snap->graph, grid, query));
      out["version"] = snap->version;
      return Response{200, std::move(out)};
    });
  }

  [[nodiscard]] Response health() const {
    auto snap = store_.current();
    nlohmann::json version = snap ? nlohmann::json(snap->version) : nlohmann::json(nullptr);
    return {200, {{"status", "ok"}, {"version", std::move(version)}}};
  }

  [[nodiscard]] const SnapshotStore& store() const noexcept { return store_; }

  /// Registers the API routes; static files under static_dir are served at /.
  void mount(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir = std::nullopt) {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Put("/hierarchy", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, put_hierarchy(req.body));
    });
    server.Get("/roles", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, get_roles()); });
    server.Post("/authorize", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, post_authorize(req.body));
    });
    server.Post("/sweep", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, post_sweep(req.body));
    });
    server.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    if (static_dir && std::filesystem::is_directory(*static_dir)) {
      server.set_mount_point("/", static_dir->string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("rbahp service: PUT /hierarchy, GET /roles, POST /authorize, POST /sweep, GET /health\n",
                        "text/plain");
      });
    }
  }

 private:
  static Response no_hierarchy() {
    return {409, {{"error", "NO_HIERARCHY"}, {"message", "no hierarchy loaded"}}};
  }

  static nlohmann::json juniors_of(const RoleGraph& g, std::size_t r) {
    nlohmann::json out = nlohmann::json::array();
    for (auto j : g.direct_juniors(r)) out.push_back(g.roles()[j].str());
    return out;
  }

  static nlohmann::json parse_body(std::string_view body) {
    auto doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::invalid_parameter, "malformed request: body is not valid JSON");
    return doc;
  }

  static double number_or(const nlohmann::json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number()) throw Error(ErrorCode::invalid_parameter, std::string("'") + key + "' must be a number");
    return doc.at(key).get<double>();
  }

  static int status_for(ErrorCode code) {
    switch (code) {
      case ErrorCode::no_candidate:
      case ErrorCode::unknown_permission: return 422;
      default: return 400;
    }
  }

  template <typename F>
  static Response guarded(F&& handler) {
    try {
      return handler();
    } catch (const Error& e) {
      return {status_for(e.code()), wire::error_document(e.code(), e.what())};
    } catch (const nlohmann::json::exception& e) {
      return {400, wire::error_document(ErrorCode::invalid_parameter, e.what())};
    }
  }

  SnapshotStore store_;
};

}  // namespace rbahp
