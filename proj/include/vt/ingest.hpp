#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "vt/event.hpp"
#include "vt/status.hpp"

namespace vt {

class EventStore;

/// One logger transmission: a JSON-lines batch of events.
struct LoggerFrame {
  std::string logger_id;
  Timestamp sent_at;
  std::vector<LiftEvent> events;
};

/// Decodes and validates every line. The first bad line rejects the whole
/// frame (MalformedPayload or the validate_event code, with its line number).
/// An empty payload, or an event that occurred after `sent_at`, is malformed.
Result<LoggerFrame> decode_frame(std::string_view payload, const SiteConfig& site,
                                 std::string logger_id, Timestamp sent_at);

/// Default silence threshold: three times the loggers' 5-minute delay.
inline constexpr Seconds kDefaultWatchdogThreshold{900};

/// Shared-token check for loggers.
class LoggerRegistry {
 public:
  void add(std::string logger_id, std::string token);
  /// Returns the logger id owning `token`, if any.
  std::optional<std::string> authenticate(std::string_view token) const;
  bool empty() const { return tokens_.empty(); }

 private:
  std::map<std::string, std::string, std::less<>> tokens_;  // token -> logger id
};

/// Appends decoded frames to the store, tracks last contact per lift,
/// forwards mode changes to the status tracker and runs the
/// no-communication watchdog.
class Ingestor {
 public:
  /// Seeds last contact from the events already in the store.
  Ingestor(const SiteConfig& site, EventStore& store, StatusTracker& status);

  /// Appends all events atomically and returns how many were appended.
  /// Duplicates are stored but do not touch the status.
  std::size_t ingest_frame(const LoggerFrame& frame, Timestamp now);

  /// Lifts silent for more than `threshold` (or never heard from) whose mode
  /// is Normal are moved to NoCommunication. Returns the newly transitioned
  /// lifts. Calling again without new events returns nothing.
  std::vector<LiftId> watchdog_sweep(Timestamp now, Seconds threshold = kDefaultWatchdogThreshold);

  LastContact last_contact() const;

 private:
  const SiteConfig& site_;
  EventStore& store_;
  StatusTracker& status_;
  mutable std::mutex contact_mutex_;
  std::mutex sweep_mutex_;
  LastContact last_contact_;
};

}  // namespace vt
