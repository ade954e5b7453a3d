#include "vt/event_codec.hpp"

#include "json.hpp"

namespace vt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kKeys[] = {"lift_id",           "occurred_time", "direction",
                                      "wait_time",         "operation_mode_id", "event_type",
                                      "floor_position",    "door_status"};

Error malformed(std::string msg) { return make_error(ErrorCode::MalformedPayload, std::move(msg)); }

}  // namespace

std::string encode_event(const LiftEvent& e) {
  ordered_json j;
  j["lift_id"] = e.lift().str();
  j["occurred_time"] = format_timestamp(e.occurred_at());
  j["direction"] = to_string(e.direction());
  if (e.wait_time_s()) {
    j["wait_time"] = *e.wait_time_s();
  } else {
    j["wait_time"] = nullptr;
  }
  j["operation_mode_id"] = mode_id(e.operation_mode());
  j["event_type"] = to_string(e.event_type());
  j["floor_position"] = e.floor_position();
  j["door_status"] = to_string(e.door_status());
  return j.dump();
}

bool is_skippable_line(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

Result<EventCandidate> decode_event_line(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return malformed("line is not a JSON object");
  if (j.size() != std::size(kKeys)) return malformed("expected exactly 8 fields");
  for (auto key : kKeys) {
    if (!j.contains(key)) return malformed("missing field " + std::string(key));
  }

  EventCandidate c;
  const auto& lift = j["lift_id"];
  if (!lift.is_string()) return malformed("lift_id must be a string");
  auto id = LiftId::parse(lift.get<std::string>());
  if (!id) return malformed(id.error().message);
  c.building = id->building();
  c.unit = id->unit();

  const auto& occurred = j["occurred_time"];
  if (!occurred.is_string()) return malformed("occurred_time must be a string");
  auto ts = parse_timestamp(occurred.get<std::string>());
  if (!ts) return malformed("occurred_time is not an RFC-3339 timestamp");
  c.occurred_at = *ts;

  const auto& dir = j["direction"];
  auto d = dir.is_string() ? parse_direction(dir.get<std::string>()) : std::nullopt;
  if (!d) return malformed("direction must be up, down or none");
  c.direction = *d;

  const auto& wait = j["wait_time"];
  if (wait.is_number_integer()) {
    c.wait_time_s = wait.get<std::int64_t>();
  } else if (!wait.is_null()) {
    return malformed("wait_time must be an integer or null");
  }

  const auto& mode = j["operation_mode_id"];
  auto m = mode.is_number_integer() ? mode_from_id(mode.get<int>()) : std::nullopt;
  if (!m) return malformed("operation_mode_id must be 0..3");
  c.operation_mode = *m;

  const auto& type = j["event_type"];
  auto t = type.is_string() ? parse_event_type(type.get<std::string>()) : std::nullopt;
  if (!t) return malformed("unknown event_type");
  c.event_type = *t;

  const auto& floor = j["floor_position"];
  if (!floor.is_number_integer()) return malformed("floor_position must be an integer");
  c.floor_position = floor.get<int>();

  const auto& door = j["door_status"];
  auto ds = door.is_string() ? parse_door_status(door.get<std::string>()) : std::nullopt;
  if (!ds) return malformed("door_status must be open, closed, opening or closing");
  c.door_status = *ds;
  return c;
}

Result<LiftEvent> parse_event_line(std::string_view line, const SiteConfig& site) {
  auto candidate = decode_event_line(line);
  if (!candidate) return candidate.error();
  return validate_event(*candidate, site);
}

}  // namespace vt
