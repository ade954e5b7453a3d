#include "vt/service_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vt {

namespace {

using nlohmann::json;

Error config_error(const std::string& message) { return make_error(ErrorCode::ConfigError, message); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::optional<int> parse_port(std::string_view text) {
  int port = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    port = port * 10 + (c - '0');
    if (port > 65535) return std::nullopt;
  }
  if (text.empty()) return std::nullopt;
  return port;
}

}  // namespace

Result<ServiceConfig> parse_service_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    return config_error(std::string("service config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) return config_error("service config must be a JSON object");

  ServiceConfig cfg;
  try {
    if (j.contains("port")) cfg.port = j.at("port").get<int>();
    if (cfg.port < 0 || cfg.port > 65535) return config_error("port out of range");
    if (j.contains("bind")) cfg.bind = j.at("bind").get<std::string>();
    if (j.contains("store_dir") && !j.at("store_dir").is_null()) {
      cfg.store_dir = resolve(base_dir, j.at("store_dir").get<std::string>());
    }
    if (!j.contains("site")) return config_error("service config needs a site path");
    cfg.site_path = resolve(base_dir, j.at("site").get<std::string>());

    for (const auto& l : j.value("loggers", json::array())) {
      LoggerCredential cred{l.at("id").get<std::string>(), l.at("token").get<std::string>()};
      if (cred.id.empty() || cred.token.empty()) return config_error("logger id and token must be non-empty");
      cfg.loggers.push_back(std::move(cred));
    }

    if (j.contains("notification")) {
      const auto& n = j.at("notification");
      const auto sink = n.value("sink", std::string("outbox"));
      if (sink == "outbox") {
        cfg.sink = SinkKind::Outbox;
      } else if (sink == "stdout") {
        cfg.sink = SinkKind::Stdout;
      } else {
        return config_error("unknown notification sink '" + sink + "'");
      }
      if (n.contains("outbox_path")) cfg.outbox_path = n.at("outbox_path").get<std::string>();
    }
    if (cfg.outbox_path.is_relative()) {
      cfg.outbox_path = (cfg.store_dir ? *cfg.store_dir : base_dir) / cfg.outbox_path;
    }

    if (j.contains("planner")) {
      const auto& p = j.at("planner");
      cfg.planner.default_lift_wait_s = p.value("default_lift_wait_s", cfg.planner.default_lift_wait_s);
      cfg.planner.stairs_s_per_level = p.value("stairs_s_per_level", cfg.planner.stairs_s_per_level);
      cfg.planner.escalator_s_per_level = p.value("escalator_s_per_level", cfg.planner.escalator_s_per_level);
      cfg.planner.stairs_advisory_margin = p.value("stairs_advisory_margin", cfg.planner.stairs_advisory_margin);
      if (cfg.planner.default_lift_wait_s < 0 || cfg.planner.stairs_s_per_level <= 0 ||
          cfg.planner.escalator_s_per_level <= 0 || cfg.planner.stairs_advisory_margin < 0) {
        return config_error("planner defaults must be positive");
      }
    }

    if (j.contains("watchdog")) {
      const auto& w = j.at("watchdog");
      cfg.watchdog_threshold = Seconds{w.value("threshold_s", cfg.watchdog_threshold.count())};
      cfg.watchdog_interval = Seconds{w.value("interval_s", cfg.watchdog_interval.count())};
      if (cfg.watchdog_threshold.count() <= 0 || cfg.watchdog_interval.count() <= 0) {
        return config_error("watchdog threshold and interval must be positive");
      }
    }
    if (j.contains("session_ttl_s")) {
      cfg.session_ttl = Seconds{j.at("session_ttl_s").get<std::int64_t>()};
      if (cfg.session_ttl.count() <= 0) return config_error("session_ttl_s must be positive");
    }

    for (const auto& u : j.value("users", json::array())) {
      const auto role = parse_role(u.at("role").get<std::string>());
      if (!role) return config_error("unknown role for user " + u.at("id").get<std::string>());
      cfg.users.push_back(UserAccount{u.at("id").get<std::string>(), u.value("display_name", std::string()), *role,
                                      u.at("credential_hash").get<std::string>()});
    }
  } catch (const json::exception& e) {
    return config_error(std::string("bad service config: ") + e.what());
  }
  return cfg;
}

Result<ServiceConfig> load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return config_error("cannot read service config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto cfg = parse_service_config(buf.str(), path.parent_path());
  if (!cfg) return cfg;
  if (const char* env = std::getenv("VT_PORT"); env && *env) {
    const auto port = parse_port(env);
    if (!port) return config_error(std::string("VT_PORT is not a valid port: ") + env);
    auto value = std::move(cfg).value();
    value.port = *port;
    return value;
  }
  return cfg;
}

}  // namespace vt
