#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vt/notify.hpp"
#include "vt/site.hpp"

namespace vt {

class EventStore;

/// Dashboard projection of one lift. working == (mode == Normal).
struct LiftStatus {
  LiftId lift;
  bool working = false;
  OperationMode mode = OperationMode::NoCommunication;
  std::optional<Timestamp> since;       // absent until the first transition
  std::optional<std::int64_t> data_age_s;  // absent if never contacted

  friend bool operator==(const LiftStatus&, const LiftStatus&) = default;
};

struct NoticeEntry {
  LiftId lift;
  OperationMode mode;
  std::optional<Timestamp> since;
  std::string message;

  friend bool operator==(const NoticeEntry&, const NoticeEntry&) = default;
};

struct DispatchRecord {
  Notification notification;
  DispatchOutcome outcome = DispatchOutcome::Delivered;
  int attempts = 0;
  std::string error;
};

struct ModeState {
  OperationMode mode = OperationMode::NoCommunication;
  std::optional<Timestamp> since;

  friend bool operator==(const ModeState&, const ModeState&) = default;
};

using ModeTable = std::map<LiftId, ModeState>;
using LastContact = std::map<LiftId, Timestamp>;

/// Live per-lift operating mode. Every lift starts in NoCommunication until
/// something is heard from it. The state is a fold over the transition log;
/// transitions into a not-working mode dispatch exactly one notification.
class StatusTracker {
 public:
  /// With a store, persisted transitions are replayed on construction and new
  /// ones are appended to it.
  StatusTracker(SiteConfig site, NotificationSink& sink, EventStore* store = nullptr);

  /// No-op (nullopt) when `to` equals the current mode. UnknownLift if the
  /// lift is not configured. Out-of-order timestamps are applied in arrival
  /// order with a warning.
  Result<std::optional<StatusTransition>> apply_mode_change(const LiftId& lift, OperationMode to,
                                                            Timestamp at, TransitionSource source);

  std::optional<OperationMode> current_mode(const LiftId& lift) const;
  ModeTable snapshot() const;

  /// One entry per configured lift, in lift order.
  std::vector<LiftStatus> current_statuses(Timestamp now, const LastContact& last_contact) const;
  std::vector<NoticeEntry> notice_board() const;

  /// Renders and hands one message to the sink; a failed delivery is retried
  /// once and then recorded as failed. Never throws.
  DispatchRecord notify(const StatusTransition& transition);

  std::vector<DispatchRecord> dispatches() const;
  std::vector<StatusTransition> transitions() const;

  static ModeTable initial_table(const SiteConfig& site);
  static ModeTable replay(const SiteConfig& site, std::span<const StatusTransition> transitions);
  static std::vector<LiftStatus> project(const ModeTable& table, Timestamp now,
                                         const LastContact& last_contact);
  static std::string notice_message(const LiftId& lift, OperationMode mode);

 private:
  DispatchRecord notify_locked(const StatusTransition& transition);

  SiteConfig site_;
  NotificationSink& sink_;
  EventStore* store_;
  mutable std::mutex mutex_;
  ModeTable table_;
  std::vector<StatusTransition> log_;
  std::vector<DispatchRecord> dispatches_;
};

}  // namespace vt
