#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

namespace vt::oracle {

namespace {

std::int64_t secs(Timestamp t) { return t.time_since_epoch().count(); }

}  // namespace

bool Scope::matches(const LiftEvent& e) const {
  if (lift) return e.lift().str() == *lift;
  if (building) return e.lift().building() == *building;
  return true;
}

bool Window::contains(const LiftEvent& e) const {
  const auto t = secs(e.occurred_at());
  return start <= t && t < end;
}

std::vector<LiftEvent> dedup(const std::vector<LiftEvent>& arrivals) {
  std::set<std::tuple<std::string, std::int64_t, int>> seen;
  std::vector<LiftEvent> out;
  for (const auto& e : arrivals) {
    if (seen.emplace(e.lift().str(), secs(e.occurred_at()), static_cast<int>(e.event_type())).second) {
      out.push_back(e);
    }
  }
  return out;
}

WaitTally wait_stats(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window) {
  WaitTally t;
  for (const auto& e : events) {
    if (e.event_type() != EventType::HallCallServed || !scope.matches(e) || !window.contains(e)) continue;
    auto& d = e.direction() == Direction::Up ? t.up : t.down;
    const auto w = *e.wait_time_s();
    d.max = d.count == 0 ? w : std::max(d.max, w);
    d.min = d.count == 0 ? w : std::min(d.min, w);
    d.sum += w;
    d.count += 1;
  }
  return t;
}

CallTally hall_calls(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window) {
  CallTally t;
  for (const auto& e : events) {
    if (e.event_type() != EventType::HallCallRegistered || !scope.matches(e) || !window.contains(e)) continue;
    (e.direction() == Direction::Up ? t.up : t.down) += 1;
  }
  return t;
}

std::int64_t tenths_half_up(std::int64_t part, std::int64_t total) {
  const std::int64_t q = (1000 * part) / total;
  const std::int64_t r = (1000 * part) % total;
  return 2 * r >= total ? q + 1 : q;
}

std::array<std::int64_t, 4> mode_seconds(const std::vector<LiftEvent>& events, const Scope& scope,
                                         const Window& window) {
  std::array<std::int64_t, 4> out{};
  std::map<LiftId, std::vector<const LiftEvent*>> by_lift;
  for (const auto& e : events) {
    if (scope.matches(e)) by_lift[e.lift()].push_back(&e);
  }
  for (auto& [lift, list] : by_lift) {
    // Arrival order breaks ties within a second.
    std::stable_sort(list.begin(), list.end(),
                     [](const LiftEvent* a, const LiftEvent* b) { return a->occurred_at() < b->occurred_at(); });
    std::optional<int> prior;
    for (const auto* e : list) {
      if (secs(e->occurred_at()) < window.start && e->event_type() == EventType::ModeChange) {
        prior = mode_id(e->operation_mode());
      }
    }
    const LiftEvent* first_inside = nullptr;
    for (const auto* e : list) {
      if (window.contains(*e)) {
        first_inside = e;
        break;
      }
    }
    std::size_t next = 0;
    std::optional<int> current = prior;
    std::optional<int> last_change;
    for (std::int64_t s = window.start; s < window.end; ++s) {
      while (next < list.size() && secs(list[next]->occurred_at()) <= s) {
        if (list[next]->event_type() == EventType::ModeChange) last_change = mode_id(list[next]->operation_mode());
        ++next;
      }
      if (last_change) {
        current = last_change;
      } else if (!prior && first_inside && secs(first_inside->occurred_at()) <= s) {
        current = mode_id(first_inside->operation_mode());
      }
      if (current) out[static_cast<std::size_t>(*current)] += 1;
    }
  }
  return out;
}

std::array<std::int64_t, 4> mode_tenths(const std::array<std::int64_t, 4>& seconds) {
  std::int64_t total = 0;
  for (auto s : seconds) total += s;
  std::size_t biggest = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (seconds[i] > seconds[biggest]) biggest = i;
  }
  std::array<std::int64_t, 4> out{};
  std::int64_t rest = 1000;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i == biggest) continue;
    out[i] = tenths_half_up(seconds[i], total);
    rest -= out[i];
  }
  out[biggest] = rest;
  return out;
}

std::vector<LiftEvent> event_log(const std::vector<LiftEvent>& events, const Scope& scope, const Window& window,
                                 const std::optional<std::set<EventType>>& types) {
  std::vector<LiftEvent> out;
  for (const auto& e : events) {
    if (!scope.matches(e) || !window.contains(e)) continue;
    if (types && !types->count(e.event_type())) continue;
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LiftEvent& a, const LiftEvent& b) { return a.occurred_at() < b.occurred_at(); });
  return out;
}

std::optional<double> best_route_cost(const RouteWorld& world, const Place& origin, const Place& destination,
                                      bool stairs_and_walk_only) {
  const SiteConfig& site = *world.site;
  std::map<Place, std::size_t> index;
  std::vector<Place> places;
  for (const auto& b : site.buildings()) {
    for (int l = b.min_level; l <= b.max_level; ++l) {
      index.emplace(Place{b.code, l}, places.size());
      places.push_back(Place{b.code, l});
    }
  }
  if (!index.count(origin) || !index.count(destination)) return std::nullopt;
  if (origin == destination) return 0.0;

  std::vector<std::vector<std::pair<std::size_t, double>>> adj(places.size());
  auto link = [&](const Place& a, const Place& b, double cost) { adj[index.at(a)].emplace_back(index.at(b), cost); };
  for (const auto& s : site.stairs()) {
    const double c = s.s_per_level.value_or(world.defaults.stairs_s_per_level);
    for (int l = s.from_level; l < s.to_level; ++l) {
      link({s.building, l}, {s.building, l + 1}, c);
      link({s.building, l + 1}, {s.building, l}, c);
    }
  }
  for (const auto& br : site.bridges()) {
    link(br.a, br.b, br.walk_s);
    link(br.b, br.a, br.walk_s);
  }
  if (!stairs_and_walk_only) {
    for (const auto& e : site.escalators()) {
      const double c = e.s_per_level.value_or(world.defaults.escalator_s_per_level);
      for (int l = e.from_level; l < e.to_level; ++l) {
        if (e.direction == Direction::Up) {
          link({e.building, l}, {e.building, l + 1}, c);
        } else {
          link({e.building, l + 1}, {e.building, l}, c);
        }
      }
    }
    for (const auto& lift : site.lifts()) {
      if (world.broken.count(lift.id)) continue;
      const auto& b = lift.id.building();
      for (int from : lift.served_levels) {
        for (int to : lift.served_levels) {
          if (from == to) continue;
          const Direction d = to > from ? Direction::Up : Direction::Down;
          auto it = world.mean_wait.find({b, d});
          const double wait = it != world.mean_wait.end() ? it->second : world.defaults.default_lift_wait_s;
          link({b, from}, {b, to}, wait + std::abs(to - from) * lift.travel_s_per_level + lift.door_dwell_s);
        }
      }
    }
  }
  for (auto& edges : adj) {
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  }

  const std::size_t target = index.at(destination);
  std::optional<double> best;
  std::vector<bool> on_path(places.size(), false);
  // A prefix that reaches a node no cheaper than an earlier one cannot lead to a better route.
  std::vector<double> reached(places.size(), std::numeric_limits<double>::infinity());
  std::function<void(std::size_t, double)> walk = [&](std::size_t node, double cost) {
    if (best && cost >= *best - 1e-9) return;
    if (cost >= reached[node]) return;
    reached[node] = cost;
    if (node == target) {
      best = cost;
      return;
    }
    on_path[node] = true;
    for (const auto& [next, c] : adj[node]) {
      if (!on_path[next]) walk(next, cost + c);
    }
    on_path[node] = false;
  };
  walk(index.at(origin), 0.0);
  return best;
}

}  // namespace vt::oracle
