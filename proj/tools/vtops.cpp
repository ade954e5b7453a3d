// vtops: operations CLI for the lift monitoring service.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "vt/api.hpp"
#include "vt/event_codec.hpp"
#include "vt/render.hpp"
#include "vt/simulator.hpp"

namespace {

using namespace vt;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitStorage = 3;
constexpr int kExitNoRoute = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::StorageFailure: return kExitStorage;
    case ErrorCode::NoRoute: return kExitNoRoute;
    case ErrorCode::BindFailure:
    case ErrorCode::SinkUnavailable: return kExitFailure;
    default: return kExitValidation;
  }
}

int fail(const Error& e) {
  std::cerr << "vtops: " << e.describe() << "\n";
  return exit_code_for(e.code);
}

/// Where a command finds its site and store: a service config, or explicit paths.
struct Sources {
  std::string config;
  std::string site;
  std::string store;

  void add_to(CLI::App* cmd, bool store_required) {
    cmd->add_option("--config", config, "service config file (provides site and store)");
    cmd->add_option("--site", site, "site topology file");
    cmd->add_option("--store", store, store_required ? "store directory" : "store directory (optional)");
  }

  Result<ServiceConfig> resolve(bool need_store) const {
    ServiceConfig cfg;
    if (!config.empty()) {
      auto loaded = load_service_config(config);
      if (!loaded) return loaded.error();
      cfg = std::move(loaded).value();
    } else if (const char* env = std::getenv("VT_CONFIG"); env && *env && site.empty()) {
      auto loaded = load_service_config(env);
      if (!loaded) return loaded.error();
      cfg = std::move(loaded).value();
    } else {
      if (site.empty()) return make_error(ErrorCode::ConfigError, "give --config or --site");
      cfg.site_path = site;
    }
    if (!site.empty()) cfg.site_path = site;
    if (!store.empty()) {
      cfg.store_dir = std::filesystem::path(store);
      cfg.outbox_path = *cfg.store_dir / "outbox.jsonl";
    }
    if (need_store && !cfg.store_dir) return make_error(ErrorCode::ConfigError, "a store directory is required");
    return cfg;
  }
};

Result<SiteConfig> load_site(const ServiceConfig& cfg) {
  auto site = SiteConfig::load(cfg.site_path);
  if (!site) return make_error(ErrorCode::ConfigError, site.error().describe());
  return site;
}

std::optional<std::string_view> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::string_view(s);
}

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

int cmd_serve(const std::string& config_path) {
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("VT_CONFIG")) path = env;
  }
  if (path.empty()) return fail(make_error(ErrorCode::ConfigError, "give --config or set VT_CONFIG"));
  auto cfg = load_service_config(path);
  if (!cfg) return fail(cfg.error());
  auto service = Service::open(std::move(cfg).value());
  if (!service) return fail(service.error());
  auto port = (*service)->start();
  if (!port) return fail(port.error());
  std::cout << "listening on " << (*service)->config().bind << ":" << *port << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  (*service)->stop();
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path) {
  auto cfg = load_sim_config(config_path);
  if (!cfg) return fail(cfg.error());
  auto config = std::move(cfg).value();
  if (seed) config.seed = *seed;
  auto events = simulate(config);
  if (!events) return fail(events.error());
  if (out_path.empty() || out_path == "-") {
    write_sim_output(config, *events, std::cout);
    return std::cout ? kExitOk : kExitStorage;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return fail(make_error(ErrorCode::StorageFailure, "cannot write " + out_path));
  write_sim_output(config, *events, out);
  out.close();
  if (!out) return fail(make_error(ErrorCode::StorageFailure, "write failed for " + out_path));
  std::cerr << "wrote " << events->size() << " events to " << out_path << "\n";
  return kExitOk;
}

int cmd_ingest(const Sources& sources, const std::string& file, const std::string& logger_id,
               const std::string& sent_at_text) {
  auto cfg = sources.resolve(true);
  if (!cfg) return fail(cfg.error());
  auto site = load_site(*cfg);
  if (!site) return fail(site.error());

  std::ifstream in(file, std::ios::binary);
  if (!in) return fail(make_error(ErrorCode::StorageFailure, "cannot read " + file));
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string payload = buf.str();

  // A replayed log was sent no earlier than its newest event.
  Timestamp sent_at = system_now();
  if (!sent_at_text.empty()) {
    auto t = parse_timestamp(sent_at_text);
    if (!t) return fail(make_error(ErrorCode::MalformedPayload, "bad --sent-at"));
    sent_at = *t;
  } else {
    std::istringstream lines(payload);
    std::string line;
    while (std::getline(lines, line)) {
      if (is_skippable_line(line)) continue;
      auto candidate = decode_event_line(line);
      if (candidate && candidate->occurred_at > sent_at) sent_at = candidate->occurred_at;
    }
  }

  try {
    auto service = Service::open(std::move(cfg).value(), std::move(site).value());
    if (!service) return fail(service.error());
    auto frame = decode_frame(payload, (*service)->store().site(), logger_id, sent_at);
    if (!frame) return fail(frame.error());
    const auto appended = (*service)->ingestor().ingest_frame(*frame, system_now());
    std::cout << "appended " << appended << " events\n";
  } catch (const Failure& f) {
    return fail(make_error(f.code(), f.what()));
  }
  return kExitOk;
}

struct ReportArgs {
  std::string kind = "wait-times";
  std::string building;
  std::string lift;
  std::string start;
  std::string end;
  std::string stat = "mean";
  std::string format = "table";
};

int cmd_report(const Sources& sources, const ReportArgs& args) {
  const auto kind = parse_report_kind(args.kind);
  if (!kind) return fail(make_error(ErrorCode::ConfigError, "unknown report kind '" + args.kind + "'"));
  const auto stat = parse_wait_stat(args.stat);
  if (!stat) return fail(make_error(ErrorCode::ConfigError, "stat must be mean, max or min"));
  const auto format = parse_output_format(args.format);
  if (!format) return fail(make_error(ErrorCode::ConfigError, "format must be table, csv or json"));
  auto cfg = sources.resolve(true);
  if (!cfg) return fail(cfg.error());
  auto site = load_site(*cfg);
  if (!site) return fail(site.error());
  auto scope = resolve_scope(*site, opt(args.building), opt(args.lift));
  if (!scope) return fail(scope.error());
  auto window = resolve_window(opt(args.start), opt(args.end), system_now());
  if (!window) return fail(window.error());
  try {
    const EventStore store(std::move(site).value(), cfg->store_dir);
    const auto data = compute_report(store, *kind, *scope, *window);
    std::cout << render_report(*kind, data, *scope, *window, *stat, *format);
  } catch (const Failure& f) {
    return fail(make_error(f.code(), f.what()));
  }
  return kExitOk;
}

Result<Place> parse_place(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) {
    return make_error(ErrorCode::UnknownNode, "place must look like B8:L4, got '" + std::string(text) + "'");
  }
  auto level = text.substr(colon + 1);
  if (!level.empty() && (level.front() == 'L' || level.front() == 'l')) level.remove_prefix(1);
  int value = 0;
  bool negative = !level.empty() && level.front() == '-';
  if (negative) level.remove_prefix(1);
  if (level.empty() || level.size() > 6) return make_error(ErrorCode::UnknownNode, "bad level in '" + std::string(text) + "'");
  for (char c : level) {
    if (c < '0' || c > '9') return make_error(ErrorCode::UnknownNode, "bad level in '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return Place{std::string(text.substr(0, colon)), negative ? -value : value};
}

int cmd_route(const Sources& sources, const std::string& from, const std::string& to, const std::string& at_text,
              bool json_output) {
  auto origin = parse_place(from);
  if (!origin) return fail(origin.error());
  auto destination = parse_place(to);
  if (!destination) return fail(destination.error());
  auto cfg = sources.resolve(false);
  if (!cfg) return fail(cfg.error());
  auto site = load_site(*cfg);
  if (!site) return fail(site.error());
  Timestamp at = system_now();
  if (!at_text.empty()) {
    auto t = parse_timestamp(at_text);
    if (!t) return fail(make_error(ErrorCode::InvalidWindow, "bad --at"));
    at = *t;
  }
  const RouteQuery query{*origin, *destination, at, default_window(at)};
  const auto graph = build_graph(*site, cfg->planner);

  Result<RoutePlan> plan = make_error(ErrorCode::NoRoute, "not planned");
  try {
    if (cfg->store_dir) {
      // Live lift status and wait history come from the store.
      MemorySink sink;
      EventStore store(*site, cfg->store_dir);
      StatusTracker status(*site, sink, &store);
      plan = plan_route(query, graph, make_planner_context(store, status), cfg->planner);
    } else {
      PlannerContext context;
      context.mean_wait = [](const std::string&, Direction, const TimeWindow&) { return std::optional<double>(); };
      context.lift_working = [](const LiftId&) { return true; };
      plan = plan_route(query, graph, context, cfg->planner);
    }
  } catch (const Failure& f) {
    return fail(make_error(f.code(), f.what()));
  }
  if (!plan) return fail(plan.error());
  if (json_output) {
    std::cout << to_json(*plan).dump(2) << "\n";
  } else {
    std::cout << render_route(*plan);
  }
  return kExitOk;
}

std::string read_password(const std::string& given) {
  if (!given.empty()) return given;
  std::string line;
  std::getline(std::cin, line);
  return line;
}

int cmd_user_add(const Sources& sources, const std::string& id, const std::string& name, const std::string& role_text,
                 const std::string& password) {
  const auto role = parse_role(role_text);
  if (!role) return fail(make_error(ErrorCode::ConfigError, "role must be admin or vt_staff"));
  auto cfg = sources.resolve(true);
  if (!cfg) return fail(cfg.error());
  auto site = load_site(*cfg);
  if (!site) return fail(site.error());
  const auto secret = read_password(password);
  if (secret.empty()) return fail(make_error(ErrorCode::ConfigError, "empty password"));
  try {
    EventStore store(std::move(site).value(), cfg->store_dir);
    store.upsert_user(UserAccount{id, name, *role, hash_password(secret)});
  } catch (const Failure& f) {
    return fail(make_error(f.code(), f.what()));
  }
  std::cout << "saved user " << id << "\n";
  return kExitOk;
}

int cmd_user_list(const Sources& sources) {
  auto cfg = sources.resolve(true);
  if (!cfg) return fail(cfg.error());
  auto site = load_site(*cfg);
  if (!site) return fail(site.error());
  try {
    const EventStore store(std::move(site).value(), cfg->store_dir);
    for (const auto& u : store.users()) {
      std::cout << u.id << "\t" << to_string(u.role) << "\t" << u.display_name << "\n";
    }
  } catch (const Failure& f) {
    return fail(make_error(f.code(), f.what()));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift monitoring service: serve, simulate, ingest, report, route"};
  app.require_subcommand(1);

  std::string serve_config;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--config", serve_config, "service config file (default: $VT_CONFIG)");

  std::string sim_config;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic event log");
  sim->add_option("--config", sim_config, "simulation config file")->required();
  sim->add_option("--seed", sim_seed, "override the configured seed");
  sim->add_option("--out", sim_out, "output file (default: stdout)");

  Sources ingest_sources;
  std::string ingest_path;
  std::string ingest_logger = "replay";
  std::string ingest_sent_at;
  auto* ingest = app.add_subcommand("ingest-file", "replay a JSON-lines event log into the store");
  ingest->add_option("path", ingest_path, "event log")->required();
  ingest_sources.add_to(ingest, true);
  ingest->add_option("--logger-id", ingest_logger, "logger id recorded for the frame");
  ingest->add_option("--sent-at", ingest_sent_at, "frame send time (default: newest event or now)");

  Sources report_sources;
  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "print an analytics report");
  report_sources.add_to(report, true);
  report->add_option("--kind", report_args.kind,
                     "wait-times|hall-calls|direction-split|mode-split|log-general|log-hall|log-emergency");
  report->add_option("--building", report_args.building, "restrict to one building");
  report->add_option("--lift", report_args.lift, "restrict to one lift, e.g. B8-L1");
  report->add_option("--start", report_args.start, "window start (UTC, e.g. 2026-03-02T00:00:00Z)");
  report->add_option("--end", report_args.end, "window end, exclusive (default: the current second included)");
  report->add_option("--stat", report_args.stat, "mean|max|min");
  report->add_option("--format", report_args.format, "table|csv|json");

  Sources route_sources;
  std::string route_from;
  std::string route_to;
  std::string route_at;
  bool route_json = false;
  auto* route = app.add_subcommand("route", "plan the fastest route between two places");
  route->add_option("origin", route_from, "e.g. B8:L4")->required();
  route->add_option("destination", route_to, "e.g. B10:L2")->required();
  route_sources.add_to(route, false);
  route->add_option("--at", route_at, "departure time (default: now)");
  route->add_flag("--json", route_json, "print the plan as JSON");

  auto* user = app.add_subcommand("user", "manage portal accounts");
  user->require_subcommand(1);
  Sources user_sources;
  std::string user_id;
  std::string user_name;
  std::string user_role = "vt_staff";
  std::string user_password;
  auto* user_add = user->add_subcommand("add", "create or replace an account");
  user_sources.add_to(user_add, true);
  user_add->add_option("--id", user_id, "user id")->required();
  user_add->add_option("--name", user_name, "display name");
  user_add->add_option("--role", user_role, "admin|vt_staff");
  user_add->add_option("--password", user_password, "password (default: read a line from stdin)");
  auto* user_list = user->add_subcommand("list", "list accounts");
  user_sources.add_to(user_list, true);
  std::string hash_input;
  auto* user_hash = user->add_subcommand("hash-password", "print a credential hash for a config file");
  user_hash->add_option("--password", hash_input, "password (default: read a line from stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*serve) return cmd_serve(serve_config);
  if (*sim) return cmd_simulate(sim_config, sim_seed, sim_out);
  if (*ingest) return cmd_ingest(ingest_sources, ingest_path, ingest_logger, ingest_sent_at);
  if (*report) return cmd_report(report_sources, report_args);
  if (*route) return cmd_route(route_sources, route_from, route_to, route_at, route_json);
  if (*user_add) return cmd_user_add(user_sources, user_id, user_name, user_role, user_password);
  if (*user_list) return cmd_user_list(user_sources);
  if (*user_hash) {
    std::cout << hash_password(read_password(hash_input)) << "\n";
    return kExitOk;
  }
  return kExitValidation;
}
