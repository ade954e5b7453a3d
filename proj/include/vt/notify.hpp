#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "vt/domain.hpp"

namespace vt {

struct Notification {
  LiftId lift;
  OperationMode to_mode;
  Timestamp at;
  std::string rendered_text;
};

enum class DispatchOutcome { Delivered, Failed };
std::string_view to_string(DispatchOutcome outcome);

/// Renders the message sent to VT Management staff.
std::string render_notification_text(const LiftId& lift, OperationMode mode, Timestamp since);

/// Delivery channel for status notifications. `deliver` throws
/// Failure(SinkUnavailable) when the channel is down.
class NotificationSink {
 public:
  virtual ~NotificationSink() = default;
  virtual void deliver(const Notification& n) = 0;
};

/// One JSON object per line: {lift, to_mode, at, rendered_text, outcome}.
std::string encode_outbox_line(const Notification& n, DispatchOutcome outcome);

/// Default sink: appends to an outbox file.
class OutboxFileSink : public NotificationSink {
 public:
  explicit OutboxFileSink(std::filesystem::path path);
  void deliver(const Notification& n) override;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

/// Writes outbox lines to a stream (stdout in the CLI).
class StreamSink : public NotificationSink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}
  void deliver(const Notification& n) override;

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

/// Keeps delivered notifications in memory. `fail_next(n)` makes the next n
/// deliveries throw SinkUnavailable.
class MemorySink : public NotificationSink {
 public:
  void deliver(const Notification& n) override;
  void fail_next(int n);
  std::vector<Notification> delivered() const;
  int attempts() const;

 private:
  mutable std::mutex mutex_;
  std::vector<Notification> delivered_;
  int failures_pending_ = 0;
  int attempts_ = 0;
};

}  // namespace vt
