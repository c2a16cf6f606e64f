#pragma once

// Command-line front end.
//
//   rbahp validate  --hierarchy FILE
//   rbahp rank      --hierarchy FILE --require IDS [--s S] [--criterion ID[=T]]... [--alpha A] [--lambda L]
//   rbahp authorize --hierarchy FILE --require IDS [...]
//   rbahp sweep     --hierarchy FILE --require IDS --s-min A --s-max B --steps N [...]
//   rbahp serve     [--hierarchy FILE] [--port 8080] [--host H] [--static-dir DIR]
//
// IDS is a comma-separated list or @file with one id per line.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rbahp/authorizer.hpp"
#include "rbahp/role_graph.hpp"
#include "rbahp/service.hpp"
#include "rbahp/wire.hpp"

namespace rbahp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { tsv, json };

struct CliConfig {
  std::string command;
  std::string hierarchy_path;
  std::string require;
  double s = 1.0;
  std::vector<std::string> criteria;
  double alpha = 1.0;
  double lambda = 1.0;
  OutputFormat output = OutputFormat::tsv;
  double s_min = 0.1;
  double s_max = 10.0;
  int steps = 21;
  int port = 8080;
  std::string host = "0.0.0.0";
  std::string static_dir;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline PermissionRequest parse_require(const std::string& spec) {
  std::vector<std::string> ids;
  if (spec.starts_with("@")) {
    std::istringstream lines(read_file(spec.substr(1)));
    for (std::string line; std::getline(lines, line);) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (auto id = trim(line); !id.empty()) ids.push_back(std::move(id));
    }
  } else {
    std::istringstream parts(spec);
    for (std::string part; std::getline(parts, part, ',');) {
      auto id = trim(part);
      if (id.empty()) throw UsageError("--require contains an empty id");
      ids.push_back(std::move(id));
    }
  }
  if (ids.empty()) throw UsageError("--require names no permissions");
  PermissionRequest request;
  for (auto& id : ids) request.required.emplace(std::move(id));
  return request;
}

inline CriterionSpec parse_criterion(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return make_criterion(text);
  double t = 0.0;
  try {
    std::size_t used = 0;
    t = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw UsageError("--criterion expects ID or ID=PREFERENCE, got '" + text + "'");
  }
  return make_criterion(text.substr(0, eq), t);
}

inline AuthorizationQuery make_query(const CliConfig& config) {
  AuthorizationQuery query;
  query.required = parse_require(config.require);
  query.s = config.s;
  query.alpha = config.alpha;
  query.lambda = config.lambda;
  for (const auto& c : config.criteria) query.criteria.push_back(parse_criterion(c));
  return query;
}

inline std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

// Integral raw values print without decimals, others at 6 decimals.
inline std::string raw_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return fixed6(v);
}

inline std::string short_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline void write_ranking_rows(std::ostream& out, const RankingResult& r, const std::string& prefix = {}) {
  std::size_t rank = 0;
  for (const auto& score : r.scores) {
    out << prefix << ++rank << '\t' << score.role << '\t' << fixed6(score.probability) << '\t' << score.dp << '\t'
        << score.dr;
    for (const auto& spec : r.parameters.criteria) {
      if (criteria::is_extended(spec.id)) out << '\t' << raw_value(score.extended.at(spec.id));
    }
    out << '\n';
  }
}

inline std::string join(const std::vector<RoleId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id.str();
  }
  return out;
}

inline int cmd_validate(const CliConfig& config, std::ostream& out) {
  auto outcome = parse_hierarchy_report(read_file(config.hierarchy_path));
  if (config.output == OutputFormat::json) {
    out << wire::to_json(outcome.report).dump(2) << '\n';
  } else {
    for (const auto& issue : outcome.report.issues) {
      out << to_string(issue.severity) << '\t' << issue.code << '\t' << issue.location << '\t' << issue.message
          << '\n';
    }
    if (outcome.graph) {
      out << "ok\t" << outcome.graph->role_count() << " roles\t" << outcome.graph->permission_count()
          << " permissions\n";
    } else {
      out << "invalid\n";
    }
  }
  return outcome.report.ok ? kExitOk : kExitDomain;
}

inline int cmd_rank(const CliConfig& config, std::ostream& out) {
  const auto graph = parse_hierarchy(read_file(config.hierarchy_path));
  const auto result = rank_roles(graph, make_query(config));
  if (config.output == OutputFormat::json) {
    out << wire::to_json(result).dump(2) << '\n';
  } else {
    write_ranking_rows(out, result);
  }
  return kExitOk;
}

inline int cmd_authorize(const CliConfig& config, std::ostream& out) {
  const auto graph = parse_hierarchy(read_file(config.hierarchy_path));
  const auto result = rank_roles(graph, make_query(config));
  if (config.output == OutputFormat::json) {
    nlohmann::json doc{{"mode", to_string(result.mode)},
                       {"selected", result.selected.str()},
                       {"probability", result.scores.front().probability}};
    out << doc.dump(2) << '\n';
  } else {
    out << to_string(result.mode) << ' ' << result.selected << '\n';
  }
  return kExitOk;
}

inline int cmd_sweep(const CliConfig& config, std::ostream& out) {
  const auto graph = parse_hierarchy(read_file(config.hierarchy_path));
  const auto sweep = sensitivity_sweep(graph, log_grid(config.s_min, config.s_max, config.steps), make_query(config));
  if (config.output == OutputFormat::json) {
    out << wire::to_json(sweep).dump(2) << '\n';
    return kExitOk;
  }
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    write_ranking_rows(out, sweep.rankings[i], short_number(sweep.grid[i]) + '\t');
  }
  for (const auto& c : sweep.change_points) {
    out << "change\t" << short_number(c.s_before) << '\t' << short_number(c.s_after) << '\t' << join(c.order_before)
        << '\t' << join(c.order_after) << '\n';
  }
  return kExitOk;
}

inline int cmd_serve(const CliConfig& config, std::ostream& out, std::ostream& err) {
  Service service;
  if (!config.hierarchy_path.empty()) {
    auto response = service.put_hierarchy(read_file(config.hierarchy_path));
    if (response.status != 200) {
      err << "error: hierarchy rejected\n" << response.body.dump(2) << '\n';
      return kExitDomain;
    }
  }
  httplib::Server server;
  std::optional<std::filesystem::path> static_dir;
  if (!config.static_dir.empty()) static_dir = config.static_dir;
  service.mount(server, static_dir);
  out << "listening on " << config.host << ':' << config.port << std::endl;
  if (!server.listen(config.host, config.port)) {
    err << "error: cannot listen on " << config.host << ':' << config.port << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

inline void add_query_options(CLI::App* cmd, CliConfig& config) {
  cmd->add_option("--hierarchy", config.hierarchy_path, "RHF hierarchy file")->required();
  cmd->add_option("--require", config.require, "Requested permissions: comma-separated ids or @file")->required();
  cmd->add_option("-s,--s", config.s, "Danger ratio of extra permissions over subordinate roles")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--criterion", config.criteria,
                  "Extended criterion availability|integrity|manager-cost, optionally =PREFERENCE");
  cmd->add_option("--alpha", config.alpha, "Manager-cost exponent")->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda", config.lambda, "Manager-cost unit cost")->check(CLI::PositiveNumber);
}

inline void add_output_option(CLI::App* cmd, CliConfig& config) {
  cmd->add_option("--output", config.output, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"tsv", OutputFormat::tsv},
                                                                               {"json", OutputFormat::json}}))
      ->option_text("tsv|json (default tsv)");
}

}  // namespace detail

/// Runs the CLI with argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig config;
  CLI::App app{"Role selection for user authorization by analytic hierarchy process scoring", "rbahp"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check a hierarchy file");
  validate_cmd->add_option("--hierarchy", config.hierarchy_path, "RHF hierarchy file")->required();
  detail::add_output_option(validate_cmd, config);

  auto* rank_cmd = app.add_subcommand("rank", "Rank candidate roles for a permission request");
  detail::add_query_options(rank_cmd, config);
  detail::add_output_option(rank_cmd, config);

  auto* authorize_cmd = app.add_subcommand("authorize", "Print the selected role");
  detail::add_query_options(authorize_cmd, config);
  detail::add_output_option(authorize_cmd, config);

  auto* sweep_cmd = app.add_subcommand("sweep", "Re-rank over a geometric grid of s values");
  detail::add_query_options(sweep_cmd, config);
  detail::add_output_option(sweep_cmd, config);
  sweep_cmd->add_option("--s-min", config.s_min, "Smallest s")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--s-max", config.s_max, "Largest s")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--steps", config.steps, "Grid points (>= 2)")->check(CLI::Range(2, 100000));

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--hierarchy", config.hierarchy_path, "Preload this RHF hierarchy file");
  serve_cmd->add_option("--port", config.port, "Listen port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", config.host, "Listen address");
  serve_cmd->add_option("--static-dir", config.static_dir, "Directory of admin UI assets served at /");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return detail::cmd_validate(config, out);
    if (rank_cmd->parsed()) return detail::cmd_rank(config, out);
    if (authorize_cmd->parsed()) return detail::cmd_authorize(config, out);
    if (sweep_cmd->parsed()) {
      if (!(config.s_max > config.s_min)) throw UsageError("--s-max must exceed --s-min");
      return detail::cmd_sweep(config, out);
    }
    if (serve_cmd->parsed()) return detail::cmd_serve(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace rbahp::cli
