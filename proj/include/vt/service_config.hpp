#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vt/accounts.hpp"
#include "vt/planner.hpp"

namespace vt {

struct LoggerCredential {
  std::string id;
  std::string token;
};

enum class SinkKind { Outbox, Stdout };

struct ServiceConfig {
  int port = 8080;
  std::string bind = "127.0.0.1";
  std::optional<std::filesystem::path> store_dir;  // absent: memory only
  std::filesystem::path site_path;
  std::vector<LoggerCredential> loggers;
  SinkKind sink = SinkKind::Outbox;
  std::filesystem::path outbox_path = "outbox.jsonl";
  PlannerDefaults planner;
  Seconds watchdog_threshold = Seconds{900};
  Seconds watchdog_interval = Seconds{60};
  Seconds session_ttl = Seconds{12 * 3600};
  std::vector<UserAccount> users;
};

/// Relative paths are resolved against `base_dir`.
Result<ServiceConfig> parse_service_config(std::string_view json_text, const std::filesystem::path& base_dir);

/// Reads the file, then applies VT_PORT if set.
Result<ServiceConfig> load_service_config(const std::filesystem::path& path);

}  // namespace vt
