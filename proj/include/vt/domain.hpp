#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "vt/error.hpp"
#include "vt/time.hpp"

namespace vt {

/// Lift operating state. The numeric values are the stable wire/storage ids.
enum class OperationMode : int {
  Normal = 0,
  OutOfService = 1,
  NoCommunication = 2,
  InMaintenance = 3,
};

inline constexpr std::array<OperationMode, 4> kAllModes = {
    OperationMode::Normal, OperationMode::OutOfService, OperationMode::NoCommunication,
    OperationMode::InMaintenance};

/// Normal is the only working mode.
constexpr bool is_working(OperationMode mode) { return mode == OperationMode::Normal; }
constexpr int mode_id(OperationMode mode) { return static_cast<int>(mode); }
std::optional<OperationMode> mode_from_id(int id);
std::string_view to_string(OperationMode mode);
/// Accepts the snake_case name or the numeric id.
std::optional<OperationMode> parse_mode(std::string_view text);
/// "out of service", "no communication", ...
std::string_view describe(OperationMode mode);

enum class Direction { Up, Down, None };
std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view text);

enum class EventType {
  HallCallRegistered,
  HallCallServed,
  CarArrival,
  DoorOpen,
  DoorClose,
  ModeChange,
  Emergency,
  Heartbeat,
};
inline constexpr std::array<EventType, 8> kAllEventTypes = {
    EventType::HallCallRegistered, EventType::HallCallServed, EventType::CarArrival,
    EventType::DoorOpen,           EventType::DoorClose,      EventType::ModeChange,
    EventType::Emergency,          EventType::Heartbeat};
std::string_view to_string(EventType t);
std::optional<EventType> parse_event_type(std::string_view text);
constexpr bool is_hall_call(EventType t) {
  return t == EventType::HallCallRegistered || t == EventType::HallCallServed;
}

enum class DoorStatus { Open, Closed, Opening, Closing };
std::string_view to_string(DoorStatus s);
std::optional<DoorStatus> parse_door_status(std::string_view text);

/// Building code plus lift number. Text form is "<building>-L<unit>", e.g. "B12-L3".
class LiftId {
 public:
  static Result<LiftId> make(std::string building, int unit);
  static Result<LiftId> parse(std::string_view text);

  const std::string& building() const { return building_; }
  int unit() const { return unit_; }
  std::string str() const;

  friend auto operator<=>(const LiftId&, const LiftId&) = default;
  friend bool operator==(const LiftId&, const LiftId&) = default;

 private:
  LiftId(std::string building, int unit) : building_(std::move(building)), unit_(unit) {}

  std::string building_;
  int unit_;
};

/// Building codes are short alphanumeric identifiers ("B8", "B10").
bool is_valid_building_code(std::string_view code);

/// Half-open interval [start, end).
class TimeWindow {
 public:
  static Result<TimeWindow> make(Timestamp start, Timestamp end);

  Timestamp start() const { return start_; }
  Timestamp end() const { return end_; }
  Seconds length() const { return end_ - start_; }
  bool contains(Timestamp t) const { return t >= start_ && t < end_; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

 private:
  TimeWindow(Timestamp s, Timestamp e) : start_(s), end_(e) {}

  Timestamp start_;
  Timestamp end_;
};

/// Trailing 24 hours ending at `now`.
TimeWindow default_window(Timestamp now);

enum class TransitionSource { Ingest, Watchdog, Manual };
std::string_view to_string(TransitionSource s);
std::optional<TransitionSource> parse_transition_source(std::string_view text);

class StatusTransition {
 public:
  /// Fails with InvalidTransition when from == to.
  static Result<StatusTransition> make(LiftId lift, OperationMode from, OperationMode to,
                                       Timestamp at, TransitionSource source);

  const LiftId& lift() const { return lift_; }
  OperationMode from_mode() const { return from_; }
  OperationMode to_mode() const { return to_; }
  Timestamp at() const { return at_; }
  TransitionSource source() const { return source_; }

  friend bool operator==(const StatusTransition&, const StatusTransition&) = default;

 private:
  StatusTransition(LiftId lift, OperationMode from, OperationMode to, Timestamp at,
                   TransitionSource source)
      : lift_(std::move(lift)), from_(from), to_(to), at_(at), source_(source) {}

  LiftId lift_;
  OperationMode from_;
  OperationMode to_;
  Timestamp at_;
  TransitionSource source_;
};

}  // namespace vt
