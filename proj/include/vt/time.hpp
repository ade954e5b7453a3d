#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace vt {

/// UTC instant at one-second resolution. All storage and comparison happens in UTC.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Parses an RFC-3339 timestamp ("2024-05-01T08:30:00Z" or with a numeric
/// offset). Fractional seconds are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical form: "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

Timestamp system_now();

/// Hour of day (0-23) in UTC.
int utc_hour(Timestamp t);

}  // namespace vt
