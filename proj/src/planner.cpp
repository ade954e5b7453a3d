#include "vt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "vt/analytics.hpp"
#include "vt/status.hpp"
#include "vt/store.hpp"

namespace vt {

std::string_view to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::Stairs: return "stairs";
    case TransportMode::Escalator: return "escalator";
    case TransportMode::Lift: return "lift";
    case TransportMode::Walk: return "walk";
  }
  return "walk";
}

std::optional<std::size_t> TransportGraph::find_node(const Place& place) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), place);
  if (it == nodes_.end() || *it != place) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

void TransportGraph::finalize() {
  std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.from, a.to, a.mode, a.serving_lift) < std::tie(b.from, b.to, b.mode, b.serving_lift);
  });
  out_.assign(nodes_.size(), {});
  std::vector<bool> touched(nodes_.size(), false);
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    out_[e.from].push_back(i);
    touched[e.from] = touched[e.to] = true;
    parent[root(e.from)] = root(e.to);
  }
  warnings_.clear();
  components_ = 0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (root(n) == n) ++components_;
    if (!touched[n]) {
      warnings_.push_back({"DisconnectedNode", nodes_[n].str() + " has no stairs, escalator, lift or bridge"});
    }
  }
}

TransportGraph make_graph(std::vector<Place> nodes, std::vector<GraphEdge> edges) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::vector<std::size_t> remap(nodes.size());
  TransportGraph g;
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = i;
    g.nodes_.push_back(nodes[order[i]]);
  }
  for (auto& e : edges) {
    e.from = remap.at(e.from);
    e.to = remap.at(e.to);
  }
  g.edges_ = std::move(edges);
  g.finalize();
  return g;
}

TransportGraph build_graph(const SiteConfig& site, const PlannerDefaults& defaults) {
  TransportGraph g;
  for (const auto& b : site.buildings()) {
    for (int level = b.min_level; level <= b.max_level; ++level) g.nodes_.push_back(Place{b.code, level});
  }
  std::sort(g.nodes_.begin(), g.nodes_.end());
  auto node = [&](const std::string& building, int level) { return *g.find_node(Place{building, level}); };

  for (const auto& s : site.stairs()) {
    const double spl = s.s_per_level.value_or(defaults.stairs_s_per_level);
    for (int level = s.from_level; level < s.to_level; ++level) {
      g.edges_.push_back({TransportMode::Stairs, node(s.building, level), node(s.building, level + 1), spl, {}, 0.0});
      g.edges_.push_back({TransportMode::Stairs, node(s.building, level + 1), node(s.building, level), spl, {}, 0.0});
    }
  }
  for (const auto& e : site.escalators()) {
    const double spl = e.s_per_level.value_or(defaults.escalator_s_per_level);
    for (int level = e.from_level; level < e.to_level; ++level) {
      auto lo = node(e.building, level);
      auto hi = node(e.building, level + 1);
      if (e.direction == Direction::Up) {
        g.edges_.push_back({TransportMode::Escalator, lo, hi, spl, {}, 0.0});
      } else {
        g.edges_.push_back({TransportMode::Escalator, hi, lo, spl, {}, 0.0});
      }
    }
  }
  for (const auto& lift : site.lifts()) {
    for (int a : lift.served_levels) {
      for (int b : lift.served_levels) {
        if (a == b) continue;
        g.edges_.push_back({TransportMode::Lift, node(lift.id.building(), a), node(lift.id.building(), b),
                            std::abs(b - a) * lift.travel_s_per_level, lift.id, lift.door_dwell_s});
      }
    }
  }
  for (const auto& br : site.bridges()) {
    auto a = node(br.a.building, br.a.level);
    auto b = node(br.b.building, br.b.level);
    g.edges_.push_back({TransportMode::Walk, a, b, br.walk_s, {}, 0.0});
    g.edges_.push_back({TransportMode::Walk, b, a, br.walk_s, {}, 0.0});
  }
  g.finalize();
  return g;
}

std::int64_t to_millis(double seconds) { return std::llround(seconds * 1000.0); }

PlannerContext make_planner_context(const EventStore& store, const StatusTracker& status) {
  PlannerContext ctx;
  ctx.mean_wait = [&store](const std::string& building, Direction d,
                           const TimeWindow& window) -> std::optional<double> {
    auto scope = QueryScope::building(building, store.site());
    if (!scope) return std::nullopt;
    const auto& stats = wait_time_stats(store, *scope, window).for_direction(d);
    if (!stats) return std::nullopt;
    return stats->mean_s;
  };
  ctx.lift_working = [&status](const LiftId& lift) {
    auto mode = status.current_mode(lift);
    return mode && is_working(*mode);
  };
  return ctx;
}

std::optional<EdgeCost> edge_cost(const GraphEdge& edge, const TransportGraph& graph, const RouteQuery& query,
                                  const PlannerContext& context, const PlannerDefaults& defaults) {
  if (edge.mode != TransportMode::Lift) return EdgeCost{0, to_millis(edge.base_travel_s)};
  if (!edge.serving_lift || !context.lift_working || !context.lift_working(*edge.serving_lift)) {
    return std::nullopt;
  }
  const auto& from = graph.nodes()[edge.from];
  const auto& to = graph.nodes()[edge.to];
  const Direction d = to.level > from.level ? Direction::Up : Direction::Down;
  std::optional<double> wait;
  if (context.mean_wait) wait = context.mean_wait(from.building, d, query.wait_window);
  return EdgeCost{to_millis(wait.value_or(defaults.default_lift_wait_s)),
                  to_millis(edge.base_travel_s + edge.door_dwell_s)};
}

namespace {

struct Label {
  std::int64_t cost = 0;
  std::vector<std::uint8_t> modes;
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;

  friend bool operator<(const Label& a, const Label& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    if (a.modes != b.modes) return a.modes < b.modes;
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.edges < b.edges;
  }
  friend bool operator==(const Label& a, const Label& b) {
    return a.cost == b.cost && a.edges == b.edges && a.nodes == b.nodes;
  }
};

/// Lexicographic-label Dijkstra over edges with a known cost. Every edge
/// strictly increases (cost, legs), so the optimum is a simple path.
std::optional<Label> shortest(const TransportGraph& graph, std::size_t origin, std::size_t destination,
                              const std::vector<std::optional<EdgeCost>>& costs,
                              const std::function<bool(const GraphEdge&)>& allowed) {
  std::vector<std::optional<Label>> best(graph.nodes().size());
  using Entry = std::pair<Label, std::size_t>;
  auto greater = [](const Entry& a, const Entry& b) { return b.first < a.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(greater)> queue(greater);

  Label start;
  start.nodes.push_back(origin);
  best[origin] = start;
  queue.emplace(start, origin);
  std::vector<bool> settled(graph.nodes().size(), false);
  while (!queue.empty()) {
    auto [label, node] = queue.top();
    queue.pop();
    if (settled[node] || !(label == *best[node])) continue;
    settled[node] = true;
    if (node == destination) return label;
    for (auto edge_id : graph.out_edges(node)) {
      const auto& edge = graph.edges()[edge_id];
      if (!costs[edge_id] || settled[edge.to] || (allowed && !allowed(edge))) continue;
      Label next = label;
      next.cost += costs[edge_id]->total_ms();
      next.modes.push_back(static_cast<std::uint8_t>(edge.mode));
      next.nodes.push_back(edge.to);
      next.edges.push_back(edge_id);
      if (!best[edge.to] || next < *best[edge.to]) {
        best[edge.to] = next;
        queue.emplace(std::move(next), edge.to);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Result<RoutePlan> plan_route(const RouteQuery& query, const TransportGraph& graph,
                             const PlannerContext& context, const PlannerDefaults& defaults) {
  const auto origin = graph.find_node(query.origin);
  const auto destination = graph.find_node(query.destination);
  if (!origin) return make_error(ErrorCode::UnknownNode, "unknown origin " + query.origin.str());
  if (!destination) return make_error(ErrorCode::UnknownNode, "unknown destination " + query.destination.str());
  if (*origin == *destination) return RoutePlan{};

  // Freeze costs at query time; mean waits are looked up once per building and direction.
  std::map<std::pair<std::string, Direction>, std::optional<double>> wait_cache;
  PlannerContext cached = context;
  cached.mean_wait = [&](const std::string& building, Direction d, const TimeWindow& w) {
    auto key = std::make_pair(building, d);
    auto it = wait_cache.find(key);
    if (it == wait_cache.end()) {
      it = wait_cache.emplace(key, context.mean_wait ? context.mean_wait(building, d, w) : std::nullopt).first;
    }
    return it->second;
  };
  std::vector<std::optional<EdgeCost>> costs;
  costs.reserve(graph.edges().size());
  for (const auto& edge : graph.edges()) costs.push_back(edge_cost(edge, graph, query, cached, defaults));

  auto best = shortest(graph, *origin, *destination, costs, {});
  if (!best) {
    return make_error(ErrorCode::NoRoute, "no available route from " + query.origin.str() + " to " +
                                              query.destination.str());
  }

  RoutePlan plan;
  for (auto edge_id : best->edges) {
    const auto& edge = graph.edges()[edge_id];
    const auto& cost = *costs[edge_id];
    plan.legs.push_back(RouteLeg{edge.mode, graph.nodes()[edge.from], graph.nodes()[edge.to],
                                 cost.wait_ms / 1000.0, cost.travel_ms / 1000.0, edge.serving_lift});
  }
  plan.total_s = best->cost / 1000.0;

  const bool uses_machines = std::any_of(plan.legs.begin(), plan.legs.end(), [](const RouteLeg& l) {
    return l.mode == TransportMode::Lift || l.mode == TransportMode::Escalator;
  });
  if (uses_machines) {
    auto stairs = shortest(graph, *origin, *destination, costs, [](const GraphEdge& e) {
      return e.mode == TransportMode::Stairs || e.mode == TransportMode::Walk;
    });
    if (stairs) {
      plan.stairs_only_total_s = stairs->cost / 1000.0;
      plan.stairs_advisory =
          static_cast<double>(stairs->cost) <= static_cast<double>(best->cost) * (1.0 + defaults.stairs_advisory_margin);
    }
  }
  return plan;
}

}  // namespace vt
