#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vt/event.hpp"
#include "vt/simulator.hpp"
#include "vt/site.hpp"

namespace vt::testing {

std::filesystem::path fixture_dir();
SiteConfig fixture_site();

Timestamp ts(std::string_view text);
/// 2026-03-02T00:00:00Z, the start of the fixture simulation.
Timestamp day0();
LiftId lift(std::string_view text);
TimeWindow window(Timestamp start, Timestamp end);

struct EventSpec {
  std::string lift;
  Timestamp at;
  EventType type = EventType::Heartbeat;
  Direction direction = Direction::None;
  std::optional<std::int64_t> wait;
  OperationMode mode = OperationMode::Normal;
  int floor = 1;
  DoorStatus door = DoorStatus::Closed;
};

/// Builds a validated event; fails the current test on a rejection.
LiftEvent make_event(const SiteConfig& site, const EventSpec& spec);

std::string read_file(const std::filesystem::path& path);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// A simulation over the fixture site with random traffic, faults and
/// emergencies; duration up to `max_hours`.
SimConfig random_sim_config(std::mt19937_64& rng, const SiteConfig& site, int max_hours);

/// Structural checks on a simulator run; returns one message per violation.
/// Every registered call is served exactly once with wait == served - registered,
/// events are time-ordered, nothing but late-stamped call registrations is
/// attributed to a lift inside its fault, and emergencies appear as scheduled.
std::vector<std::string> sim_violations(const SimConfig& config, const std::vector<LiftEvent>& events);

/// A random site for route checks: up to `max_buildings` buildings and
/// `max_nodes` places in total, with random stairs, escalators, lifts,
/// bridges, mean waits and broken lifts. Costs have at most one decimal.
struct RandomTopology {
  SiteConfig site;
  std::map<std::pair<std::string, Direction>, double> mean_wait;
  std::set<LiftId> broken;
};
RandomTopology random_topology(std::mt19937_64& rng, int max_nodes, int max_buildings);

}  // namespace vt::testing
