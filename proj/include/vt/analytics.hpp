#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vt/event.hpp"

namespace vt {

class EventStore;

// Every aggregation returns std::nullopt for "No Data Available": no
// qualifying records in (scope, window). That is never the same as a zero.
// Events the store flagged as duplicates are not counted again.

/// A percentage held as an integer number of tenths (755 == 75.5 %), so
/// complementary values sum to exactly 100.0.
struct Percent {
  std::int64_t tenths = 0;

  double value() const { return static_cast<double>(tenths) / 10.0; }
  std::string str() const;
  friend bool operator==(const Percent&, const Percent&) = default;
};

/// 100 * num / den rounded half-up to one decimal. den must be > 0.
Percent round_percent(std::int64_t num, std::int64_t den);

/// Rounds each share half-up; the largest share (lowest index on ties)
/// absorbs the rounding remainder so the result sums to exactly 100.0.
/// total(shares) must be > 0.
std::vector<Percent> split_percentages(std::span<const std::int64_t> shares);

struct DirectionWaitStats {
  std::int64_t count = 0;
  double mean_s = 0.0;
  std::int64_t max_s = 0;
  std::int64_t min_s = 0;

  friend bool operator==(const DirectionWaitStats&, const DirectionWaitStats&) = default;
};

struct WaitTimeStats {
  std::optional<DirectionWaitStats> up;
  std::optional<DirectionWaitStats> down;

  bool no_data() const { return !up && !down; }
  const std::optional<DirectionWaitStats>& for_direction(Direction d) const {
    return d == Direction::Down ? down : up;
  }
};

struct HallCallCount {
  std::int64_t up = 0;
  std::int64_t down = 0;

  friend bool operator==(const HallCallCount&, const HallCallCount&) = default;
};

struct DirectionSplit {
  Percent up;
  Percent down;
  std::int64_t up_calls = 0;
  std::int64_t down_calls = 0;
};

struct ModeSplit {
  std::array<std::int64_t, 4> seconds{};  // indexed by mode id
  std::array<Percent, 4> percent{};
  std::int64_t total_seconds = 0;
};

enum class LogKind { General, HallCall, Emergency };
std::string_view to_string(LogKind kind);
std::optional<LogKind> parse_log_kind(std::string_view text);

/// Pooled per-direction mean/max/min of wait_time over HallCallServed events.
WaitTimeStats wait_time_stats(const EventStore& store, const QueryScope& scope, const TimeWindow& window);

/// HallCallRegistered counts per direction.
std::optional<HallCallCount> hall_call_count(const EventStore& store, const QueryScope& scope,
                                             const TimeWindow& window);

/// Shares of up and down hall calls; down takes the rounding remainder.
std::optional<DirectionSplit> direction_percentages(const EventStore& store, const QueryScope& scope,
                                                    const TimeWindow& window);

/// Time-weighted share of lift-seconds spent in each mode. Each lift enters
/// the window in the mode of its latest ModeChange before the window; a lift
/// with no such change contributes nothing until its first event inside it,
/// from which on the mode carried by that event applies.
std::optional<ModeSplit> mode_percentages(const EventStore& store, const QueryScope& scope,
                                          const TimeWindow& window);

std::vector<LiftEvent> event_log(const EventStore& store, LogKind kind, const QueryScope& scope,
                                 const TimeWindow& window);

/// Lift kinematics used for a travel estimate between two levels: the lift in
/// the building serving both levels with the shortest ride (lowest id on ties).
const LiftSpec* fastest_lift_between(const SiteConfig& site, std::string_view building, int from_level,
                                     int to_level);

/// Mean historical wait in the travel direction (building scope) plus
/// |to - from| * per-level travel time plus door dwell. Zero when from == to.
/// UnknownLevel if either level is outside the building; nullopt when there
/// is no wait history for that direction or no lift serves both levels.
Result<std::optional<double>> estimated_travel_time(const EventStore& store, std::string_view building,
                                                    int from_level, int to_level,
                                                    const TimeWindow& window);

}  // namespace vt
