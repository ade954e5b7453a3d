#include "vt/domain.hpp"

#include <cctype>
#include <charconv>

namespace vt {

std::optional<OperationMode> mode_from_id(int id) {
  if (id < 0 || id > 3) return std::nullopt;
  return static_cast<OperationMode>(id);
}

std::string_view to_string(OperationMode mode) {
  switch (mode) {
    case OperationMode::Normal: return "normal";
    case OperationMode::OutOfService: return "out_of_service";
    case OperationMode::NoCommunication: return "no_communication";
    case OperationMode::InMaintenance: return "in_maintenance";
  }
  return "normal";
}

std::string_view describe(OperationMode mode) {
  switch (mode) {
    case OperationMode::Normal: return "working";
    case OperationMode::OutOfService: return "out of service";
    case OperationMode::NoCommunication: return "no communication";
    case OperationMode::InMaintenance: return "in maintenance";
  }
  return "working";
}

std::optional<OperationMode> parse_mode(std::string_view text) {
  for (auto m : kAllModes) {
    if (text == to_string(m)) return m;
  }
  int id = -1;
  auto res = std::from_chars(text.data(), text.data() + text.size(), id);
  if (res.ec == std::errc{} && res.ptr == text.data() + text.size()) return mode_from_id(id);
  return std::nullopt;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::None: return "none";
  }
  return "none";
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "up") return Direction::Up;
  if (text == "down") return Direction::Down;
  if (text == "none") return Direction::None;
  return std::nullopt;
}

std::string_view to_string(EventType t) {
  switch (t) {
    case EventType::HallCallRegistered: return "hall_call_registered";
    case EventType::HallCallServed: return "hall_call_served";
    case EventType::CarArrival: return "car_arrival";
    case EventType::DoorOpen: return "door_open";
    case EventType::DoorClose: return "door_close";
    case EventType::ModeChange: return "mode_change";
    case EventType::Emergency: return "emergency";
    case EventType::Heartbeat: return "heartbeat";
  }
  return "heartbeat";
}

std::optional<EventType> parse_event_type(std::string_view text) {
  for (auto t : kAllEventTypes) {
    if (text == to_string(t)) return t;
  }
  return std::nullopt;
}

std::string_view to_string(DoorStatus s) {
  switch (s) {
    case DoorStatus::Open: return "open";
    case DoorStatus::Closed: return "closed";
    case DoorStatus::Opening: return "opening";
    case DoorStatus::Closing: return "closing";
  }
  return "closed";
}

std::optional<DoorStatus> parse_door_status(std::string_view text) {
  if (text == "open") return DoorStatus::Open;
  if (text == "closed") return DoorStatus::Closed;
  if (text == "opening") return DoorStatus::Opening;
  if (text == "closing") return DoorStatus::Closing;
  return std::nullopt;
}

bool is_valid_building_code(std::string_view code) {
  if (code.empty() || code.size() > 16) return false;
  for (char c : code) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

Result<LiftId> LiftId::make(std::string building, int unit) {
  if (!is_valid_building_code(building)) {
    return make_error(ErrorCode::UnknownLift, "invalid building code '" + building + "'");
  }
  if (unit < 1) {
    return make_error(ErrorCode::UnknownLift, "lift number must be >= 1");
  }
  return LiftId(std::move(building), unit);
}

Result<LiftId> LiftId::parse(std::string_view text) {
  const auto sep = text.rfind("-L");
  if (sep == std::string_view::npos || sep == 0) {
    return make_error(ErrorCode::UnknownLift, "malformed lift id '" + std::string(text) + "'");
  }
  int unit = 0;
  const auto digits = text.substr(sep + 2);
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), unit);
  if (digits.empty() || res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) {
    return make_error(ErrorCode::UnknownLift, "malformed lift id '" + std::string(text) + "'");
  }
  return make(std::string(text.substr(0, sep)), unit);
}

std::string LiftId::str() const { return building_ + "-L" + std::to_string(unit_); }

Result<TimeWindow> TimeWindow::make(Timestamp start, Timestamp end) {
  if (!(start < end)) {
    return make_error(ErrorCode::InvalidWindow, "window start must be before end");
  }
  return TimeWindow(start, end);
}

TimeWindow default_window(Timestamp now) {
  return TimeWindow::make(now - std::chrono::hours{24}, now).value();
}

std::string_view to_string(TransitionSource s) {
  switch (s) {
    case TransitionSource::Ingest: return "ingest";
    case TransitionSource::Watchdog: return "watchdog";
    case TransitionSource::Manual: return "manual";
  }
  return "ingest";
}

std::optional<TransitionSource> parse_transition_source(std::string_view text) {
  if (text == "ingest") return TransitionSource::Ingest;
  if (text == "watchdog") return TransitionSource::Watchdog;
  if (text == "manual") return TransitionSource::Manual;
  return std::nullopt;
}

Result<StatusTransition> StatusTransition::make(LiftId lift, OperationMode from, OperationMode to,
                                                Timestamp at, TransitionSource source) {
  if (from == to) {
    return make_error(ErrorCode::InvalidTransition, "transition must change mode");
  }
  return StatusTransition(std::move(lift), from, to, at, source);
}

}  // namespace vt
