#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "vt/domain.hpp"
#include "vt/site.hpp"

namespace vt {

/// Unchecked event fields, as decoded from the wire or produced by a test.
struct EventCandidate {
  std::string building;
  int unit = 0;
  Timestamp occurred_at{};
  Direction direction = Direction::None;
  std::optional<std::int64_t> wait_time_s;
  OperationMode operation_mode = OperationMode::Normal;
  EventType event_type = EventType::Heartbeat;
  int floor_position = 0;
  DoorStatus door_status = DoorStatus::Closed;
};

/// One telemetry record from a data logger. Only `validate_event` produces
/// these, so every instance satisfies the site-dependent invariants.
class LiftEvent {
 public:
  const LiftId& lift() const { return lift_; }
  Timestamp occurred_at() const { return occurred_at_; }
  Direction direction() const { return direction_; }
  std::optional<std::int64_t> wait_time_s() const { return wait_time_s_; }
  OperationMode operation_mode() const { return operation_mode_; }
  EventType event_type() const { return event_type_; }
  int floor_position() const { return floor_position_; }
  DoorStatus door_status() const { return door_status_; }

  EventCandidate to_candidate() const;

  friend bool operator==(const LiftEvent&, const LiftEvent&) = default;

 private:
  friend Result<LiftEvent> validate_event(const EventCandidate& raw, const SiteConfig& site);

  LiftEvent(LiftId lift, const EventCandidate& raw)
      : lift_(std::move(lift)),
        occurred_at_(raw.occurred_at),
        direction_(raw.direction),
        wait_time_s_(raw.wait_time_s),
        operation_mode_(raw.operation_mode),
        event_type_(raw.event_type),
        floor_position_(raw.floor_position),
        door_status_(raw.door_status) {}

  LiftId lift_;
  Timestamp occurred_at_;
  Direction direction_;
  std::optional<std::int64_t> wait_time_s_;
  OperationMode operation_mode_;
  EventType event_type_;
  int floor_position_;
  DoorStatus door_status_;
};

/// Total: every candidate yields either a valid event or exactly one named
/// rejection (UnknownLift, LevelOutOfRange, MissingWaitTime,
/// UnexpectedWaitTime, NegativeWaitTime, InvalidDirection).
Result<LiftEvent> validate_event(const EventCandidate& raw, const SiteConfig& site);

/// Which lifts a query covers: one lift, one building, or everything.
class QueryScope {
 public:
  struct All {
    friend bool operator==(const All&, const All&) = default;
  };
  struct Building {
    std::string code;
    friend bool operator==(const Building&, const Building&) = default;
  };
  using Variant = std::variant<All, Building, LiftId>;

  static QueryScope all_lifts() { return QueryScope(All{}); }
  static Result<QueryScope> building(std::string code, const SiteConfig& site);
  static Result<QueryScope> single_lift(const LiftId& lift, const SiteConfig& site);

  bool matches(const LiftId& lift) const;
  const Variant& value() const { return value_; }
  bool is_all() const { return std::holds_alternative<All>(value_); }
  const std::string* building_code() const;
  const LiftId* lift() const;
  std::string describe() const;

  friend bool operator==(const QueryScope&, const QueryScope&) = default;

 private:
  explicit QueryScope(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

struct EventFilter {
  QueryScope scope = QueryScope::all_lifts();
  TimeWindow window;
  std::optional<std::set<EventType>> event_types;
  /// Leaves out events flagged as retransmitted copies.
  bool skip_duplicates = false;

  bool matches(const LiftEvent& e) const;
};

}  // namespace vt
