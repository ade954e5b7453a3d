#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vt/site.hpp"

namespace vt {

class EventStore;
class StatusTracker;

/// Declaration order is the tie-break priority between equal-cost routes.
enum class TransportMode { Stairs, Escalator, Lift, Walk };
std::string_view to_string(TransportMode mode);

struct PlannerDefaults {
  double default_lift_wait_s = 45.0;
  double stairs_s_per_level = 20.0;
  double escalator_s_per_level = 30.0;
  /// A stairs-only route within this fraction of the optimum raises the advisory flag.
  double stairs_advisory_margin = 0.15;
};

struct GraphEdge {
  TransportMode mode = TransportMode::Stairs;
  std::size_t from = 0;
  std::size_t to = 0;
  double base_travel_s = 0.0;
  std::optional<LiftId> serving_lift;
  double door_dwell_s = 0.0;  // lifts only
};

struct GraphWarning {
  std::string code;  // "DisconnectedNode"
  std::string message;
};

/// Nodes are every (building, level), sorted; edge ids follow (from, to,
/// mode, lift) order so the whole graph is deterministic.
class TransportGraph {
 public:
  const std::vector<Place>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  std::optional<std::size_t> find_node(const Place& place) const;
  const std::vector<GraphWarning>& warnings() const { return warnings_; }
  std::size_t component_count() const { return components_; }

 private:
  friend TransportGraph build_graph(const SiteConfig& site, const PlannerDefaults& defaults);
  friend TransportGraph make_graph(std::vector<Place> nodes, std::vector<GraphEdge> edges);

  void finalize();

  std::vector<Place> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<GraphWarning> warnings_;
  std::size_t components_ = 0;
};

/// Stairs and escalators connect adjacent levels (escalators one way only),
/// lifts connect every ordered pair of served levels, bridges both ways.
/// Nodes without any edge are reported as DisconnectedNode warnings.
TransportGraph build_graph(const SiteConfig& site, const PlannerDefaults& defaults = {});

/// Builds a graph from explicit parts; node indices in `edges` refer to the
/// given `nodes` order, which is re-sorted here.
TransportGraph make_graph(std::vector<Place> nodes, std::vector<GraphEdge> edges);

struct RouteQuery {
  Place origin;
  Place destination;
  Timestamp at;
  TimeWindow wait_window;
};

struct RouteLeg {
  TransportMode mode;
  Place from;
  Place to;
  double expected_wait_s = 0.0;
  double travel_s = 0.0;
  std::optional<LiftId> lift;
};

struct RoutePlan {
  std::vector<RouteLeg> legs;
  double total_s = 0.0;
  /// Advisory only: a stairs-only route exists within the configured margin.
  bool stairs_advisory = false;
  std::optional<double> stairs_only_total_s;
};

/// Historical waits and live availability, as seen by the planner.
struct PlannerContext {
  /// Mean wait in seconds for a building and direction, nullopt when unknown.
  std::function<std::optional<double>(const std::string& building, Direction, const TimeWindow&)> mean_wait;
  std::function<bool(const LiftId&)> lift_working;
};

PlannerContext make_planner_context(const EventStore& store, const StatusTracker& status);

/// Costs are held in whole milliseconds so equal-cost comparisons are exact.
struct EdgeCost {
  std::int64_t wait_ms = 0;
  std::int64_t travel_ms = 0;
  std::int64_t total_ms() const { return wait_ms + travel_ms; }
};

std::int64_t to_millis(double seconds);

/// nullopt means Unavailable (lift edge whose lift is not working).
std::optional<EdgeCost> edge_cost(const GraphEdge& edge, const TransportGraph& graph, const RouteQuery& query,
                                  const PlannerContext& context, const PlannerDefaults& defaults);

/// Fastest route. Ties: fewer legs, then mode priority leg by leg, then node
/// order, then edge order. UnknownNode / NoRoute on failure.
Result<RoutePlan> plan_route(const RouteQuery& query, const TransportGraph& graph,
                             const PlannerContext& context, const PlannerDefaults& defaults = {});

}  // namespace vt
