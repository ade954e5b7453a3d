#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vt/ingest.hpp"
#include "vt/service_config.hpp"
#include "vt/status.hpp"
#include "vt/store.hpp"

namespace vt {

struct ApiRequest {
  std::string method;
  std::string path;  // without the query string
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // names lower-cased
  std::string body;
  std::string remote;

  std::optional<std::string_view> param(const std::string& name) const;
  std::optional<std::string_view> header(std::string name) const;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

enum class Access { Public, Session, Authorised, AdminOnly, Logger };
std::string_view to_string(Access access);

struct EndpointInfo {
  std::string method;
  std::string path;  // {placeholders} for path parameters
  Access access;
};

/// Every documented endpoint.
const std::vector<EndpointInfo>& api_endpoints();

/// HTTP status used for an error code in a response body.
int http_status_for(ErrorCode code);

class Service {
 public:
  using Clock = std::function<Timestamp()>;

  struct Options {
    Clock clock = system_now;
    /// Overrides the sink chosen by the config; not owned.
    NotificationSink* sink = nullptr;
  };

  /// Opens the store and wires every module. Config users absent from the
  /// store are added to it.
  static Result<std::unique_ptr<Service>> open(ServiceConfig config, SiteConfig site, Options options);
  static Result<std::unique_ptr<Service>> open(ServiceConfig config, SiteConfig site);
  /// Loads the site file named in the config.
  static Result<std::unique_ptr<Service>> open(ServiceConfig config);

  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  /// Binds and serves on a background thread together with the watchdog.
  /// Port 0 picks a free port. Returns the bound port or BindFailure.
  Result<int> start();
  void stop();

  std::vector<LiftId> run_watchdog();

  const ServiceConfig& config() const;
  EventStore& store();
  StatusTracker& status();
  Ingestor& ingestor();

 private:
  struct Impl;
  explicit Service(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace vt
