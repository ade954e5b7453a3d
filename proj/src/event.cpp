#include "vt/event.hpp"

namespace vt {

EventCandidate LiftEvent::to_candidate() const {
  return EventCandidate{lift_.building(), lift_.unit(),     occurred_at_,  direction_,
                        wait_time_s_,     operation_mode_, event_type_,   floor_position_,
                        door_status_};
}

Result<LiftEvent> validate_event(const EventCandidate& raw, const SiteConfig& site) {
  auto id = LiftId::make(raw.building, raw.unit);
  if (!id) return id.error();
  if (!site.find_lift(id.value())) {
    return make_error(ErrorCode::UnknownLift, "lift " + id->str() + " is not configured");
  }
  if (!site.has_level(raw.building, raw.floor_position)) {
    return make_error(ErrorCode::LevelOutOfRange,
                      "floor " + std::to_string(raw.floor_position) + " outside building " + raw.building);
  }
  if (raw.event_type == EventType::HallCallServed) {
    if (!raw.wait_time_s) return make_error(ErrorCode::MissingWaitTime, "hall_call_served requires wait_time");
    if (*raw.wait_time_s < 0) return make_error(ErrorCode::NegativeWaitTime, "wait_time must be >= 0");
  } else if (raw.wait_time_s) {
    return make_error(ErrorCode::UnexpectedWaitTime,
                      "wait_time only allowed on hall_call_served, got " + std::string(to_string(raw.event_type)));
  }
  if (is_hall_call(raw.event_type) && raw.direction == Direction::None) {
    return make_error(ErrorCode::InvalidDirection, "hall call events need an up or down direction");
  }
  return LiftEvent(std::move(id).value(), raw);
}

Result<QueryScope> QueryScope::building(std::string code, const SiteConfig& site) {
  if (!site.find_building(code)) {
    return make_error(ErrorCode::UnknownBuilding, "unknown building '" + code + "'");
  }
  return QueryScope(Building{std::move(code)});
}

Result<QueryScope> QueryScope::single_lift(const LiftId& lift, const SiteConfig& site) {
  if (!site.find_lift(lift)) {
    return make_error(ErrorCode::UnknownLift, "unknown lift " + lift.str());
  }
  return QueryScope(lift);
}

bool QueryScope::matches(const LiftId& lift) const {
  if (std::holds_alternative<All>(value_)) return true;
  if (const auto* b = std::get_if<Building>(&value_)) return lift.building() == b->code;
  return std::get<LiftId>(value_) == lift;
}

const std::string* QueryScope::building_code() const {
  if (const auto* b = std::get_if<Building>(&value_)) return &b->code;
  return nullptr;
}

const LiftId* QueryScope::lift() const { return std::get_if<LiftId>(&value_); }

std::string QueryScope::describe() const {
  if (is_all()) return "all lifts";
  if (const auto* b = building_code()) return "building " + *b;
  return "lift " + lift()->str();
}

bool EventFilter::matches(const LiftEvent& e) const {
  if (!window.contains(e.occurred_at()) || !scope.matches(e.lift())) return false;
  return !event_types || event_types->count(e.event_type()) > 0;
}

}  // namespace vt
