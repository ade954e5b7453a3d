#include "vt/api.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <condition_variable>
#include <iostream>
#include <thread>

#include "httplib.h"
#include "vt/analytics.hpp"
#include "vt/planner.hpp"
#include "vt/render.hpp"
#include "vt/serialize.hpp"

namespace vt {

std::optional<std::string_view> ApiRequest::param(const std::string& name) const {
  auto it = query.find(name);
  if (it == query.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::optional<std::string_view> ApiRequest::header(std::string name) const {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  auto it = headers.find(name);
  if (it == headers.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::string_view to_string(Access access) {
  switch (access) {
    case Access::Public: return "public";
    case Access::Session: return "session";
    case Access::Authorised: return "authorised";
    case Access::AdminOnly: return "admin";
    case Access::Logger: return "logger";
  }
  return "public";
}

const std::vector<EndpointInfo>& api_endpoints() {
  static const std::vector<EndpointInfo> endpoints = {
      {"GET", "/api/v1/status", Access::Public},
      {"GET", "/api/v1/notices", Access::Public},
      {"GET", "/api/v1/site", Access::Public},
      {"GET", "/api/v1/panel/{building}/{level}", Access::Public},
      {"POST", "/api/v1/route", Access::Public},
      {"POST", "/api/v1/events", Access::Logger},
      {"GET", "/api/v1/analytics/wait-times", Access::Authorised},
      {"GET", "/api/v1/analytics/hall-calls", Access::Authorised},
      {"GET", "/api/v1/analytics/direction-split", Access::Authorised},
      {"GET", "/api/v1/analytics/mode-split", Access::Authorised},
      {"GET", "/api/v1/logs/{kind}", Access::Authorised},
      {"GET", "/api/v1/signin-history", Access::AdminOnly},
      {"POST", "/api/v1/lifts/{id}/mode", Access::Authorised},
      {"POST", "/api/v1/session", Access::Public},
      {"DELETE", "/api/v1/session", Access::Session},
  };
  return endpoints;
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoRoute: return 422;
    case ErrorCode::StorageFailure: return 500;
    case ErrorCode::SinkUnavailable: return 503;
    default: return 400;
  }
}

namespace {

using nlohmann::json;

ApiResponse json_response(int status, const Json& body) { return ApiResponse{status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view code, const std::string& message,
                           std::optional<std::size_t> line = std::nullopt) {
  Json err;
  err["code"] = code;
  err["message"] = message;
  if (line) err["line"] = *line;
  Json body;
  body["error"] = std::move(err);
  return json_response(status, body);
}

ApiResponse error_response(const Error& e) {
  return error_response(http_status_for(e.code), to_string(e.code), e.message, e.line);
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    parts.push_back(path.substr(pos, next - pos));
    pos = next;
  }
  return parts;
}

bool match_template(std::string_view tmpl, std::string_view path, std::map<std::string, std::string>& params) {
  const auto t = split_path(tmpl);
  const auto p = split_path(path);
  if (t.size() != p.size()) return false;
  std::map<std::string, std::string> found;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].size() > 2 && t[i].front() == '{' && t[i].back() == '}') {
      found.emplace(std::string(t[i].substr(1, t[i].size() - 2)), std::string(p[i]));
    } else if (t[i] != p[i]) {
      return false;
    }
  }
  params = std::move(found);
  return true;
}

std::optional<int> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = text.front() == '-';
  if (negative) text.remove_prefix(1);
  if (text.empty() || text.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return negative ? -v : v;
}

struct Session {
  std::string user_id;
  Role role;
  Timestamp expires;
};

struct Caller {
  std::optional<Session> session;
  std::optional<std::string> logger;
};

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  SiteConfig site;
  Clock clock;
  std::unique_ptr<NotificationSink> owned_sink;
  NotificationSink* sink = nullptr;
  std::unique_ptr<EventStore> store;
  std::unique_ptr<StatusTracker> status;
  std::unique_ptr<Ingestor> ingestor;
  LoggerRegistry loggers;
  TransportGraph graph;

  std::mutex session_mutex;
  std::map<std::string, Session> sessions;

  std::unique_ptr<httplib::Server> server;
  std::thread server_thread;
  std::thread watchdog_thread;
  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopping = false;

  Caller identify(const ApiRequest& req) {
    Caller caller;
    if (auto auth = req.header("authorization")) {
      constexpr std::string_view prefix = "Bearer ";
      if (auth->substr(0, prefix.size()) == prefix) {
        const std::string token(auth->substr(prefix.size()));
        std::lock_guard lock(session_mutex);
        auto it = sessions.find(token);
        if (it != sessions.end()) {
          if (clock() < it->second.expires) {
            caller.session = it->second;
          } else {
            sessions.erase(it);
          }
        }
      }
    }
    if (auto token = req.header("x-logger-token")) caller.logger = loggers.authenticate(*token);
    return caller;
  }

  std::optional<ApiResponse> authorise(Access access, const Caller& caller) {
    switch (access) {
      case Access::Public: return std::nullopt;
      case Access::Logger:
        if (!caller.logger) return error_response(401, "Unauthorized", "a valid logger token is required");
        return std::nullopt;
      case Access::Session:
      case Access::Authorised:
        if (!caller.session) return error_response(401, "Unauthorized", "sign in required");
        return std::nullopt;
      case Access::AdminOnly:
        if (!caller.session) return error_response(401, "Unauthorized", "sign in required");
        if (caller.session->role != Role::Admin) return error_response(403, "Forbidden", "admin only");
        return std::nullopt;
    }
    return error_response(403, "Forbidden", "access denied");
  }

  ApiResponse dispatch(const ApiRequest& req) {
    const EndpointInfo* endpoint = nullptr;
    bool path_known = false;
    std::map<std::string, std::string> params;
    for (const auto& e : api_endpoints()) {
      std::map<std::string, std::string> p;
      if (!match_template(e.path, req.path, p)) continue;
      path_known = true;
      if (e.method == req.method) {
        endpoint = &e;
        params = std::move(p);
        break;
      }
    }
    if (!endpoint) {
      if (path_known) return error_response(405, "MethodNotAllowed", req.method + " not allowed on " + req.path);
      return error_response(404, "NotFound", "no endpoint " + req.path);
    }

    const Caller caller = identify(req);
    if (auto denied = authorise(endpoint->access, caller)) return *denied;

    const std::string& path = endpoint->path;
    if (path == "/api/v1/status") return get_status();
    if (path == "/api/v1/notices") return get_notices();
    if (path == "/api/v1/site") return json_response(200, to_json(site));
    if (path == "/api/v1/panel/{building}/{level}") return get_panel(params.at("building"), params.at("level"));
    if (path == "/api/v1/route") return post_route(req);
    if (path == "/api/v1/events") return post_events(req, *caller.logger);
    if (path == "/api/v1/analytics/wait-times") return get_analytics(req, ReportKind::WaitTimes);
    if (path == "/api/v1/analytics/hall-calls") return get_analytics(req, ReportKind::HallCalls);
    if (path == "/api/v1/analytics/direction-split") return get_analytics(req, ReportKind::DirectionSplit);
    if (path == "/api/v1/analytics/mode-split") return get_analytics(req, ReportKind::ModeSplit);
    if (path == "/api/v1/logs/{kind}") return get_log(req, params.at("kind"));
    if (path == "/api/v1/signin-history") return get_signins(req);
    if (path == "/api/v1/lifts/{id}/mode") return post_mode(req, params.at("id"), *caller.session);
    if (path == "/api/v1/session" && req.method == "POST") return post_session(req);
    return delete_session(req);
  }

  ApiResponse get_status() {
    const auto now = clock();
    Json lifts = Json::array();
    for (const auto& s : status->current_statuses(now, ingestor->last_contact())) lifts.push_back(to_json(s));
    Json body;
    body["generated_at"] = format_timestamp(now);
    body["lifts"] = std::move(lifts);
    return json_response(200, body);
  }

  ApiResponse get_notices() {
    Json notices = Json::array();
    for (const auto& n : status->notice_board()) notices.push_back(to_json(n));
    Json body;
    body["generated_at"] = format_timestamp(clock());
    body["notices"] = std::move(notices);
    return json_response(200, body);
  }

  ApiResponse get_panel(const std::string& building, const std::string& level_text) {
    const auto* b = site.find_building(building);
    if (!b) return error_response(make_error(ErrorCode::UnknownBuilding, "unknown building '" + building + "'"));
    const auto level = parse_int(level_text);
    if (!level || !site.has_level(building, *level)) {
      return error_response(make_error(ErrorCode::UnknownLevel, "no level " + level_text + " in " + building));
    }
    const auto window = default_window(clock());
    Json destinations = Json::array();
    for (int to = b->min_level; to <= b->max_level; ++to) {
      if (to == *level) continue;
      auto estimate = estimated_travel_time(*store, building, *level, to, window);
      if (!estimate) return error_response(estimate.error());
      Json d;
      d["level"] = to;
      d["direction"] = to > *level ? "up" : "down";
      if (*estimate) {
        d["no_data"] = false;
        d["estimated_s"] = **estimate;
      } else {
        d["no_data"] = true;
      }
      destinations.push_back(std::move(d));
    }
    Json body;
    body["building"] = building;
    body["level"] = *level;
    body["window"] = to_json(window);
    body["destinations"] = std::move(destinations);
    return json_response(200, body);
  }

  static Result<Place> place_from(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_object()) {
      return make_error(ErrorCode::MalformedPayload, std::string("missing ") + field);
    }
    const auto& p = j.at(field);
    if (!p.contains("building") || !p.at("building").is_string() || !p.contains("level") ||
        !p.at("level").is_number_integer()) {
      return make_error(ErrorCode::MalformedPayload, std::string(field) + " needs building and level");
    }
    return Place{p.at("building").get<std::string>(), p.at("level").get<int>()};
  }

  ApiResponse post_route(const ApiRequest& req) {
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return error_response(make_error(ErrorCode::MalformedPayload, "route body must be a JSON object"));
    }
    auto origin = place_from(body, "origin");
    if (!origin) return error_response(origin.error());
    auto destination = place_from(body, "destination");
    if (!destination) return error_response(destination.error());
    Timestamp at = clock();
    if (body.contains("at") && !body.at("at").is_null()) {
      const auto parsed = body.at("at").is_string() ? parse_timestamp(body.at("at").get<std::string>()) : std::nullopt;
      if (!parsed) return error_response(make_error(ErrorCode::MalformedPayload, "bad 'at' timestamp"));
      at = *parsed;
    }
    const RouteQuery query{*origin, *destination, at, default_window(at)};
    auto plan = plan_route(query, graph, make_planner_context(*store, *status), config.planner);
    if (!plan) return error_response(plan.error());
    return json_response(200, to_json(*plan));
  }

  ApiResponse post_events(const ApiRequest& req, const std::string& logger_id) {
    Timestamp sent_at = clock();
    if (auto header = req.header("x-sent-at")) {
      auto parsed = parse_timestamp(*header);
      if (!parsed) return error_response(make_error(ErrorCode::MalformedPayload, "bad X-Sent-At header"));
      sent_at = *parsed;
    }
    auto frame = decode_frame(req.body, site, logger_id, sent_at);
    if (!frame) return error_response(frame.error());
    const auto appended = ingestor->ingest_frame(*frame, clock());
    Json body;
    body["appended"] = appended;
    return json_response(200, body);
  }

  ApiResponse get_analytics(const ApiRequest& req, ReportKind kind) {
    auto scope = resolve_scope(site, req.param("building"), req.param("lift"));
    if (!scope) return error_response(scope.error());
    auto window = resolve_window(req.param("start"), req.param("end"), clock());
    if (!window) return error_response(window.error());
    Json body;
    body["scope"] = scope->describe();
    body["window"] = to_json(*window);
    Json result;
    switch (kind) {
      case ReportKind::WaitTimes: {
        const auto stat_text = req.param("stat").value_or("mean");
        const auto stat = parse_wait_stat(stat_text);
        if (!stat) {
          return error_response(400, "InvalidStat", "stat must be mean, max or min, not '" +
                                                        std::string(stat_text) + "'");
        }
        result = to_json(wait_time_stats(*store, *scope, *window), *stat);
        break;
      }
      case ReportKind::HallCalls: result = to_json(hall_call_count(*store, *scope, *window)); break;
      case ReportKind::DirectionSplit: result = to_json(direction_percentages(*store, *scope, *window)); break;
      default: result = to_json(mode_percentages(*store, *scope, *window)); break;
    }
    for (auto& [key, value] : result.items()) body[key] = value;
    return json_response(200, body);
  }

  ApiResponse get_log(const ApiRequest& req, const std::string& kind_text) {
    const auto kind = parse_log_kind(kind_text);
    if (!kind) return error_response(404, "NotFound", "no log '" + kind_text + "'");
    auto scope = resolve_scope(site, req.param("building"), req.param("lift"));
    if (!scope) return error_response(scope.error());
    auto window = resolve_window(req.param("start"), req.param("end"), clock());
    if (!window) return error_response(window.error());
    const auto events = event_log(*store, *kind, *scope, *window);
    Json body;
    body["kind"] = to_string(*kind);
    body["scope"] = scope->describe();
    body["window"] = to_json(*window);
    body["no_data"] = events.empty();
    body["events"] = to_json(std::span<const LiftEvent>(events));
    return json_response(200, body);
  }

  ApiResponse get_signins(const ApiRequest& req) {
    auto window = resolve_window(req.param("start"), req.param("end"), clock());
    if (!window) return error_response(window.error());
    Json records = Json::array();
    for (const auto& r : store->query_signin_history(*window)) records.push_back(to_json(r));
    Json body;
    body["window"] = to_json(*window);
    body["records"] = std::move(records);
    return json_response(200, body);
  }

  ApiResponse post_mode(const ApiRequest& req, const std::string& id_text, const Session& session) {
    auto lift = LiftId::parse(id_text);
    if (!lift) return error_response(lift.error());
    if (!site.find_lift(*lift)) {
      return error_response(make_error(ErrorCode::UnknownLift, "unknown lift " + lift->str()));
    }
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("mode")) {
      return error_response(make_error(ErrorCode::MalformedPayload, "body must be {\"mode\": ...}"));
    }
    std::optional<OperationMode> mode;
    const auto& m = body.at("mode");
    if (m.is_string()) mode = parse_mode(m.get<std::string>());
    if (m.is_number_integer()) mode = mode_from_id(m.get<int>());
    if (!mode) return error_response(make_error(ErrorCode::MalformedPayload, "unknown mode " + m.dump()));

    const auto now = clock();
    auto changed = status->apply_mode_change(*lift, *mode, now, TransitionSource::Manual);
    if (!changed) return error_response(changed.error());
    std::clog << "manual mode change by " << session.user_id << ": " << lift->str() << " -> " << to_string(*mode)
              << "\n";
    Json out;
    out["changed"] = changed->has_value();
    out["transition"] = changed->has_value() ? to_json(**changed) : Json(nullptr);
    for (const auto& s : status->current_statuses(now, ingestor->last_contact())) {
      if (s.lift == *lift) out["status"] = to_json(s);
    }
    return json_response(200, out);
  }

  ApiResponse post_session(const ApiRequest& req) {
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("user_id") || !body.contains("password") ||
        !body.at("user_id").is_string() || !body.at("password").is_string()) {
      return error_response(make_error(ErrorCode::MalformedPayload, "body must carry user_id and password"));
    }
    const auto user_id = body.at("user_id").get<std::string>();
    const auto password = body.at("password").get<std::string>();
    const auto now = clock();
    std::string note = std::string(req.header("user-agent").value_or(""));
    if (!req.remote.empty()) note = req.remote + (note.empty() ? "" : " " + note);

    const auto user = store->find_user(user_id);
    const bool ok = user && verify_password(password, user->credential_hash);
    store->record_signin(SignInRecord{user_id, now, ok ? SignInOutcome::Success : SignInOutcome::Failure, note});
    if (!ok) return error_response(401, "InvalidCredentials", "unknown user or wrong password");

    const auto token = random_token();
    const Session session{user->id, user->role, now + config.session_ttl};
    {
      std::lock_guard lock(session_mutex);
      sessions.emplace(token, session);
    }
    Json out;
    out["token"] = token;
    out["user_id"] = user->id;
    out["display_name"] = user->display_name;
    out["role"] = to_string(user->role);
    out["expires_at"] = format_timestamp(session.expires);
    return json_response(200, out);
  }

  ApiResponse delete_session(const ApiRequest& req) {
    const auto auth = req.header("authorization").value_or("");
    const std::string token(auth.substr(std::min<std::size_t>(auth.size(), 7)));
    std::lock_guard lock(session_mutex);
    sessions.erase(token);
    Json out;
    out["signed_out"] = true;
    return json_response(200, out);
  }

  void watchdog_loop() {
    std::unique_lock lock(stop_mutex);
    while (!stopping) {
      if (stop_cv.wait_for(lock, config.watchdog_interval, [this] { return stopping; })) break;
      lock.unlock();
      try {
        ingestor->watchdog_sweep(clock(), config.watchdog_threshold);
      } catch (const std::exception& e) {
        std::cerr << "watchdog sweep failed: " << e.what() << "\n";
      }
      lock.lock();
    }
  }
};

Service::Service(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

Service::~Service() { stop(); }

Result<std::unique_ptr<Service>> Service::open(ServiceConfig config, SiteConfig site, Options options) {
  auto impl = std::make_unique<Impl>();
  impl->clock = options.clock ? options.clock : Clock(system_now);
  if (options.sink) {
    impl->sink = options.sink;
  } else if (config.sink == SinkKind::Stdout) {
    impl->owned_sink = std::make_unique<StreamSink>(std::cout);
  } else {
    impl->owned_sink = std::make_unique<OutboxFileSink>(config.outbox_path);
  }
  if (!impl->sink) impl->sink = impl->owned_sink.get();

  try {
    impl->store = std::make_unique<EventStore>(site, config.store_dir);
    for (const auto& user : config.users) {
      if (!impl->store->find_user(user.id)) impl->store->upsert_user(user);
    }
  } catch (const Failure& f) {
    return make_error(f.code(), f.what());
  }
  impl->status = std::make_unique<StatusTracker>(site, *impl->sink, impl->store.get());
  impl->ingestor = std::make_unique<Ingestor>(impl->store->site(), *impl->store, *impl->status);
  for (const auto& l : config.loggers) impl->loggers.add(l.id, l.token);
  impl->graph = build_graph(site, config.planner);
  for (const auto& w : impl->graph.warnings()) std::clog << "site warning " << w.code << ": " << w.message << "\n";
  impl->site = std::move(site);
  impl->config = std::move(config);
  return std::unique_ptr<Service>(new Service(std::move(impl)));
}

Result<std::unique_ptr<Service>> Service::open(ServiceConfig config, SiteConfig site) {
  return open(std::move(config), std::move(site), Options{});
}

Result<std::unique_ptr<Service>> Service::open(ServiceConfig config) {
  auto site = SiteConfig::load(config.site_path);
  if (!site) return make_error(ErrorCode::ConfigError, site.error().describe());
  return open(std::move(config), std::move(site).value(), Options{});
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return impl_->dispatch(request);
  } catch (const Failure& f) {
    return error_response(http_status_for(f.code()), to_string(f.code()), f.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

Result<int> Service::start() {
  if (impl_->server) return make_error(ErrorCode::BindFailure, "service already started");
  auto server = std::make_unique<httplib::Server>();
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      request.headers[key] = v;
    }
    request.body = req.body;
    request.remote = req.remote_addr;
    const auto response = handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server->Get(".*", handler);
  server->Post(".*", handler);
  server->Delete(".*", handler);
  server->Put(".*", handler);
  server->Patch(".*", handler);

  int port = impl_->config.port;
  if (port == 0) {
    port = server->bind_to_any_port(impl_->config.bind);
    if (port < 0) return make_error(ErrorCode::BindFailure, "cannot bind " + impl_->config.bind);
  } else if (!server->bind_to_port(impl_->config.bind, port)) {
    return make_error(ErrorCode::BindFailure,
                      "cannot bind " + impl_->config.bind + ":" + std::to_string(impl_->config.port));
  }
  impl_->stopping = false;
  impl_->server = std::move(server);
  impl_->server_thread = std::thread([this] { impl_->server->listen_after_bind(); });
  impl_->watchdog_thread = std::thread([this] { impl_->watchdog_loop(); });
  return port;
}

void Service::stop() {
  if (!impl_ || !impl_->server) return;
  {
    std::lock_guard lock(impl_->stop_mutex);
    impl_->stopping = true;
  }
  impl_->stop_cv.notify_all();
  impl_->server->stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
  if (impl_->watchdog_thread.joinable()) impl_->watchdog_thread.join();
  impl_->server.reset();
}

std::vector<LiftId> Service::run_watchdog() {
  return impl_->ingestor->watchdog_sweep(impl_->clock(), impl_->config.watchdog_threshold);
}

const ServiceConfig& Service::config() const { return impl_->config; }
EventStore& Service::store() { return *impl_->store; }
StatusTracker& Service::status() { return *impl_->status; }
Ingestor& Service::ingestor() { return *impl_->ingestor; }

}  // namespace vt
