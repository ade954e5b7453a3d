#include "vt/ingest.hpp"

#include "vt/event_codec.hpp"
#include "vt/store.hpp"

namespace vt {

Result<LoggerFrame> decode_frame(std::string_view payload, const SiteConfig& site,
                                 std::string logger_id, Timestamp sent_at) {
  LoggerFrame frame{std::move(logger_id), sent_at, {}};
  std::size_t number = 0;
  while (!payload.empty()) {
    ++number;
    const auto nl = payload.find('\n');
    std::string_view line = payload.substr(0, nl);
    payload = nl == std::string_view::npos ? std::string_view{} : payload.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_skippable_line(line)) continue;

    auto event = parse_event_line(line, site);
    if (!event) {
      Error err = event.error();
      err.line = number;
      return err;
    }
    if (event->occurred_at() > sent_at) {
      return Error{ErrorCode::MalformedPayload, "event occurred after the frame was sent", number};
    }
    frame.events.push_back(std::move(event).value());
  }
  if (frame.events.empty()) {
    return make_error(ErrorCode::MalformedPayload, "empty payload");
  }
  return frame;
}

void LoggerRegistry::add(std::string logger_id, std::string token) {
  tokens_.insert_or_assign(std::move(token), std::move(logger_id));
}

std::optional<std::string> LoggerRegistry::authenticate(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

Ingestor::Ingestor(const SiteConfig& site, EventStore& store, StatusTracker& status)
    : site_(site), store_(store), status_(status) {
  for (const auto& [lift, stored] : store_.latest_event_per_lift(site_)) {
    last_contact_[lift] = stored.event.occurred_at();
  }
}

std::size_t Ingestor::ingest_frame(const LoggerFrame& frame, Timestamp /*now*/) {
  const auto receipts = store_.append_events(frame.events);
  {
    std::lock_guard lock(contact_mutex_);
    for (const auto& e : frame.events) {
      auto [it, inserted] = last_contact_.emplace(e.lift(), e.occurred_at());
      if (!inserted && it->second < e.occurred_at()) it->second = e.occurred_at();
    }
  }
  for (std::size_t i = 0; i < frame.events.size(); ++i) {
    const auto& e = frame.events[i];
    // A resent event has already had its effect on the status.
    if (receipts[i].duplicate) continue;
    if (e.event_type() == EventType::ModeChange) {
      (void)status_.apply_mode_change(e.lift(), e.operation_mode(), e.occurred_at(), TransitionSource::Ingest);
    } else if (status_.current_mode(e.lift()) == OperationMode::NoCommunication) {
      // Any sign of life ends a no-communication spell.
      (void)status_.apply_mode_change(e.lift(), e.operation_mode(), e.occurred_at(), TransitionSource::Ingest);
    }
  }
  return frame.events.size();
}

std::vector<LiftId> Ingestor::watchdog_sweep(Timestamp now, Seconds threshold) {
  std::lock_guard sweep(sweep_mutex_);
  const auto contacts = last_contact();
  std::vector<LiftId> transitioned;
  for (const auto& lift : site_.lifts()) {
    if (status_.current_mode(lift.id) != OperationMode::Normal) continue;
    auto it = contacts.find(lift.id);
    if (it != contacts.end() && now - it->second <= threshold) continue;
    auto result = status_.apply_mode_change(lift.id, OperationMode::NoCommunication, now,
                                            TransitionSource::Watchdog);
    if (result && result.value()) transitioned.push_back(lift.id);
  }
  return transitioned;
}

LastContact Ingestor::last_contact() const {
  std::lock_guard lock(contact_mutex_);
  return last_contact_;
}

}  // namespace vt
