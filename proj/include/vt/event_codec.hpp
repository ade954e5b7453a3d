#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vt/event.hpp"

namespace vt {

// One event per line, as a JSON object with exactly these keys in this order:
//   lift_id, occurred_time, direction, wait_time, operation_mode_id,
//   event_type, floor_position, door_status
// wait_time is null except on hall_call_served. Timestamps are RFC-3339 UTC.
// The same form is used by the store, the simulator output and ingestion.

/// Encodes without a trailing newline.
std::string encode_event(const LiftEvent& event);

/// Structural decode only (MalformedPayload on any shape/type problem).
Result<EventCandidate> decode_event_line(std::string_view line);

/// Decode plus validate_event against the site.
Result<LiftEvent> parse_event_line(std::string_view line, const SiteConfig& site);

/// Lines starting with '#' are comments; blank lines are skipped.
bool is_skippable_line(std::string_view line);

}  // namespace vt
