#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vt/event.hpp"

namespace vt {

/// Calls per hour for each UTC hour of day; piecewise constant.
struct HourlyRates {
  std::array<double, 24> per_hour{};

  static HourlyRates constant(double calls_per_hour);
  double at(int hour) const { return per_hour[static_cast<std::size_t>(hour)]; }
  bool all_zero() const;
};

struct FloorArrivalRates {
  std::string building;
  int level = 0;
  HourlyRates up;
  HourlyRates down;
};

/// A lift taken out of service (or into maintenance) for [start, start + duration).
struct FaultSpec {
  LiftId lift;
  OperationMode mode = OperationMode::OutOfService;
  Timestamp start;
  Seconds duration{0};
};

struct EmergencySpec {
  LiftId lift;
  Timestamp at;
};

struct LiftKinematics {
  double s_per_level = 4.0;
  double door_dwell_s = 8.0;
};

/// Everything that determines a simulation run. Same config, same output.
struct SimConfig {
  SiteConfig site;
  Timestamp start{};
  Seconds duration{0};
  std::uint64_t seed = 0;
  Seconds heartbeat_interval{300};
  /// Applied to served floors without an explicit entry in `arrival_rates`.
  HourlyRates default_up;
  HourlyRates default_down;
  std::vector<FloorArrivalRates> arrival_rates;
  /// Overrides the per-lift values from the site when set.
  std::optional<LiftKinematics> kinematics;
  std::vector<FaultSpec> faults;
  std::vector<EmergencySpec> emergencies;

  Timestamp end() const { return start + duration; }
};

/// InvalidConfig naming the first problem, if any.
std::optional<Error> validate_sim_config(const SimConfig& config);

/// "site" may be an inline object or a path relative to the config file.
Result<SimConfig> parse_sim_config(std::string_view json_text,
                                   const std::filesystem::path& base_dir = {});
Result<SimConfig> load_sim_config(const std::filesystem::path& path);

/// One car as seen by the dispatcher.
struct CarCandidate {
  LiftId lift;
  int floor = 0;
  bool working = true;
  bool serves_call_floor = true;
};

/// Nearest-car policy: the working car serving the call floor with minimal
/// |car floor - call floor|, ties to the lowest lift number. nullopt means
/// NoWorkingLift and the call waits for a recovery.
std::optional<LiftId> dispatch_nearest(std::span<const CarCandidate> cars, int call_floor);

/// Runs the discrete-event simulation and returns the event stream ordered by
/// occurred_at. Arrivals are Poisson per (floor, direction); the run continues
/// past the configured duration until every registered call is served.
Result<std::vector<LiftEvent>> simulate(const SimConfig& config);

/// "# vt-sim seed=<seed> start=<ts> duration_s=<n>"
std::string sim_header(const SimConfig& config);

/// Header line followed by one encoded event per line.
void write_sim_output(const SimConfig& config, std::span<const LiftEvent> events, std::ostream& out);

}  // namespace vt
