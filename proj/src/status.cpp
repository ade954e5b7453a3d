#include "vt/status.hpp"

#include <iostream>

#include "vt/store.hpp"

namespace vt {

StatusTracker::StatusTracker(SiteConfig site, NotificationSink& sink, EventStore* store)
    : site_(std::move(site)), sink_(sink), store_(store) {
  if (store_) {
    log_ = store_->transitions();
    table_ = replay(site_, log_);
  } else {
    table_ = initial_table(site_);
  }
}

ModeTable StatusTracker::initial_table(const SiteConfig& site) {
  ModeTable table;
  for (const auto& lift : site.lifts()) table.emplace(lift.id, ModeState{});
  return table;
}

ModeTable StatusTracker::replay(const SiteConfig& site, std::span<const StatusTransition> transitions) {
  auto table = initial_table(site);
  for (const auto& t : transitions) {
    auto it = table.find(t.lift());
    if (it == table.end()) continue;  // lift removed from the site since
    it->second = ModeState{t.to_mode(), t.at()};
  }
  return table;
}

Result<std::optional<StatusTransition>> StatusTracker::apply_mode_change(const LiftId& lift,
                                                                         OperationMode to, Timestamp at,
                                                                         TransitionSource source) {
  std::lock_guard lock(mutex_);
  auto it = table_.find(lift);
  if (it == table_.end()) {
    return make_error(ErrorCode::UnknownLift, "lift " + lift.str() + " is not configured");
  }
  auto& state = it->second;
  if (state.mode == to) return std::optional<StatusTransition>{};
  if (state.since && at < *state.since) {
    std::clog << "warning: out-of-order mode change for " << lift.str() << " at "
              << format_timestamp(at) << " (current since " << format_timestamp(*state.since)
              << "); applied in arrival order\n";
  }
  auto transition = StatusTransition::make(lift, state.mode, to, at, source).value();
  if (store_) store_->append_transition(transition);
  state = ModeState{to, at};
  log_.push_back(transition);
  if (!is_working(to)) notify_locked(transition);
  return std::optional<StatusTransition>{transition};
}

std::optional<OperationMode> StatusTracker::current_mode(const LiftId& lift) const {
  std::lock_guard lock(mutex_);
  auto it = table_.find(lift);
  if (it == table_.end()) return std::nullopt;
  return it->second.mode;
}

ModeTable StatusTracker::snapshot() const {
  std::lock_guard lock(mutex_);
  return table_;
}

std::vector<LiftStatus> StatusTracker::project(const ModeTable& table, Timestamp now,
                                               const LastContact& last_contact) {
  std::vector<LiftStatus> out;
  out.reserve(table.size());
  for (const auto& [lift, state] : table) {
    LiftStatus s{lift, is_working(state.mode), state.mode, state.since, std::nullopt};
    if (auto it = last_contact.find(lift); it != last_contact.end()) {
      s.data_age_s = (now - it->second).count();
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LiftStatus> StatusTracker::current_statuses(Timestamp now,
                                                        const LastContact& last_contact) const {
  return project(snapshot(), now, last_contact);
}

std::string StatusTracker::notice_message(const LiftId& lift, OperationMode mode) {
  switch (mode) {
    case OperationMode::OutOfService:
      return "Lift " + lift.str() + " is out of service.";
    case OperationMode::NoCommunication:
      return "Lift " + lift.str() + " has no communication: its sensors are not sending any data.";
    case OperationMode::InMaintenance:
      return "Lift " + lift.str() + " is in maintenance.";
    case OperationMode::Normal:
      break;
  }
  return "Lift " + lift.str() + " is working.";
}

std::vector<NoticeEntry> StatusTracker::notice_board() const {
  std::vector<NoticeEntry> out;
  for (const auto& [lift, state] : snapshot()) {
    if (is_working(state.mode)) continue;
    out.push_back({lift, state.mode, state.since, notice_message(lift, state.mode)});
  }
  return out;
}

DispatchRecord StatusTracker::notify_locked(const StatusTransition& t) {
  DispatchRecord record{
      Notification{t.lift(), t.to_mode(), t.at(), render_notification_text(t.lift(), t.to_mode(), t.at())},
      DispatchOutcome::Failed, 0, {}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    ++record.attempts;
    try {
      sink_.deliver(record.notification);
      record.outcome = DispatchOutcome::Delivered;
      record.error.clear();
      break;
    } catch (const std::exception& e) {
      record.error = e.what();
    }
  }
  if (record.outcome == DispatchOutcome::Failed) {
    std::clog << "error: notification for " << t.lift().str() << " failed after "
              << record.attempts << " attempts: " << record.error << '\n';
  }
  dispatches_.push_back(record);
  return record;
}

DispatchRecord StatusTracker::notify(const StatusTransition& transition) {
  std::lock_guard lock(mutex_);
  return notify_locked(transition);
}

std::vector<DispatchRecord> StatusTracker::dispatches() const {
  std::lock_guard lock(mutex_);
  return dispatches_;
}

std::vector<StatusTransition> StatusTracker::transitions() const {
  std::lock_guard lock(mutex_);
  return log_;
}

}  // namespace vt
