#pragma once

// Brute-force reference implementations. They work on plain event vectors
// and the raw site description, never on the store or the transport graph.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vt/event.hpp"
#include "vt/planner.hpp"
#include "vt/site.hpp"

namespace vt::oracle {

struct Scope {
  std::optional<std::string> building;
  std::optional<std::string> lift;  // "B8-L1"

  bool matches(const LiftEvent& e) const;
};

struct Window {
  std::int64_t start = 0;  // unix seconds, inclusive
  std::int64_t end = 0;    // exclusive
  bool contains(const LiftEvent& e) const;
};

/// Keeps the first of each (lift, occurred_at, event_type) in arrival order.
std::vector<LiftEvent> dedup(const std::vector<LiftEvent>& arrivals);

struct DirectionTally {
  std::int64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t max = 0;
  std::int64_t min = 0;
};

struct WaitTally {
  DirectionTally up;
  DirectionTally down;
};

WaitTally wait_stats(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window);

struct CallTally {
  std::int64_t up = 0;
  std::int64_t down = 0;
};

CallTally hall_calls(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window);

/// One-decimal percentage of part/total, half-up, in tenths.
std::int64_t tenths_half_up(std::int64_t part, std::int64_t total);

/// Seconds per mode id from a second-by-second walk over the window.
std::array<std::int64_t, 4> mode_seconds(const std::vector<LiftEvent>& events, const Scope& scope,
                                         const Window& window);

/// Rounds each bucket half-up; the biggest (lowest id on ties) takes the remainder.
std::array<std::int64_t, 4> mode_tenths(const std::array<std::int64_t, 4>& seconds);

std::vector<LiftEvent> event_log(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window,
                                 const std::optional<std::set<EventType>>& types);

struct RouteWorld {
  const SiteConfig* site = nullptr;
  PlannerDefaults defaults;
  std::map<std::pair<std::string, Direction>, double> mean_wait;
  std::set<LiftId> broken;
};

/// Cheapest simple path by exhaustive depth-first enumeration with
/// branch-and-bound; nullopt when the destination cannot be reached.
std::optional<double> best_route_cost(const RouteWorld& world, const Place& origin, const Place& destination,
                                      bool stairs_and_walk_only = false);

}  // namespace vt::oracle
