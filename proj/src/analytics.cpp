#include "vt/analytics.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "vt/store.hpp"

namespace vt {

std::string Percent::str() const {
  const auto whole = tenths / 10;
  const auto frac = std::llabs(tenths % 10);
  return (tenths < 0 && whole == 0 ? "-" : "") + std::to_string(whole) + "." + std::to_string(frac);
}

Percent round_percent(std::int64_t num, std::int64_t den) {
  // floor(1000 * num / den + 1/2) == floor((2000 * num + den) / (2 * den)) for non-negative inputs
  return Percent{(2000 * num + den) / (2 * den)};
}

std::vector<Percent> split_percentages(std::span<const std::int64_t> shares) {
  const std::int64_t total = std::accumulate(shares.begin(), shares.end(), std::int64_t{0});
  std::vector<Percent> out(shares.size());
  if (shares.empty() || total <= 0) return out;
  const auto largest = static_cast<std::size_t>(std::max_element(shares.begin(), shares.end()) - shares.begin());
  std::int64_t others = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (i == largest) continue;
    out[i] = round_percent(shares[i], total);
    others += out[i].tenths;
  }
  out[largest] = Percent{1000 - others};
  return out;
}

std::string_view to_string(LogKind kind) {
  switch (kind) {
    case LogKind::General: return "general";
    case LogKind::HallCall: return "hall";
    case LogKind::Emergency: return "emergency";
  }
  return "general";
}

std::optional<LogKind> parse_log_kind(std::string_view text) {
  if (text == "general") return LogKind::General;
  if (text == "hall" || text == "hall_call") return LogKind::HallCall;
  if (text == "emergency") return LogKind::Emergency;
  return std::nullopt;
}

namespace {

EventFilter typed_filter(const QueryScope& scope, const TimeWindow& window, std::set<EventType> types) {
  return EventFilter{scope, window, std::move(types), true};
}

struct Accumulator {
  std::int64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t max = 0;
  std::int64_t min = 0;

  void add(std::int64_t v) {
    if (count == 0) {
      max = min = v;
    } else {
      max = std::max(max, v);
      min = std::min(min, v);
    }
    ++count;
    sum += v;
  }

  std::optional<DirectionWaitStats> result() const {
    if (count == 0) return std::nullopt;
    return DirectionWaitStats{count, static_cast<double>(sum) / static_cast<double>(count), max, min};
  }
};

}  // namespace

WaitTimeStats wait_time_stats(const EventStore& store, const QueryScope& scope, const TimeWindow& window) {
  Accumulator up, down;
  for (const auto& e : store.query_events(typed_filter(scope, window, {EventType::HallCallServed}))) {
    (e.direction() == Direction::Up ? up : down).add(*e.wait_time_s());
  }
  return WaitTimeStats{up.result(), down.result()};
}

std::optional<HallCallCount> hall_call_count(const EventStore& store, const QueryScope& scope,
                                             const TimeWindow& window) {
  HallCallCount count;
  for (const auto& e : store.query_events(typed_filter(scope, window, {EventType::HallCallRegistered}))) {
    (e.direction() == Direction::Up ? count.up : count.down) += 1;
  }
  if (count.up + count.down == 0) return std::nullopt;
  return count;
}

std::optional<DirectionSplit> direction_percentages(const EventStore& store, const QueryScope& scope,
                                                    const TimeWindow& window) {
  auto count = hall_call_count(store, scope, window);
  if (!count) return std::nullopt;
  const auto up = round_percent(count->up, count->up + count->down);
  return DirectionSplit{up, Percent{1000 - up.tenths}, count->up, count->down};
}

std::optional<ModeSplit> mode_percentages(const EventStore& store, const QueryScope& scope,
                                          const TimeWindow& window) {
  ModeSplit split;
  for (const auto& lift : store.lifts_with_events()) {
    if (!scope.matches(lift)) continue;
    auto lift_scope = QueryScope::single_lift(lift, store.site());
    if (!lift_scope) continue;

    std::optional<OperationMode> mode;
    if (auto prior = store.latest_before(lift, window.start(), EventType::ModeChange)) {
      mode = prior->event.operation_mode();
    }
    Timestamp cursor = window.start();
    for (const auto& e : store.query_events(EventFilter{*lift_scope, window, std::nullopt, true})) {
      if (!mode) {
        // Every event carries the mode, so the lift is accounted for from its first sighting.
        mode = e.operation_mode();
        cursor = e.occurred_at();
      }
      if (e.event_type() != EventType::ModeChange) continue;
      split.seconds[mode_id(*mode)] += (e.occurred_at() - cursor).count();
      cursor = e.occurred_at();
      mode = e.operation_mode();
    }
    if (mode) split.seconds[mode_id(*mode)] += (window.end() - cursor).count();
  }
  split.total_seconds = std::accumulate(split.seconds.begin(), split.seconds.end(), std::int64_t{0});
  if (split.total_seconds == 0) return std::nullopt;
  const auto pct = split_percentages(split.seconds);
  std::copy(pct.begin(), pct.end(), split.percent.begin());
  return split;
}

std::vector<LiftEvent> event_log(const EventStore& store, LogKind kind, const QueryScope& scope,
                                 const TimeWindow& window) {
  switch (kind) {
    case LogKind::General:
      return store.query_events(EventFilter{scope, window, std::nullopt, true});
    case LogKind::HallCall:
      return store.query_events(
          typed_filter(scope, window, {EventType::HallCallRegistered, EventType::HallCallServed}));
    case LogKind::Emergency:
      return store.query_events(typed_filter(scope, window, {EventType::Emergency}));
  }
  return {};
}

const LiftSpec* fastest_lift_between(const SiteConfig& site, std::string_view building, int from_level,
                                     int to_level) {
  const LiftSpec* best = nullptr;
  double best_s = 0.0;
  const int levels = std::abs(to_level - from_level);
  for (const auto* lift : site.lifts_in(building)) {
    if (!lift->serves(from_level) || !lift->serves(to_level)) continue;
    const double ride = levels * lift->travel_s_per_level + lift->door_dwell_s;
    if (!best || ride < best_s) {
      best = lift;
      best_s = ride;
    }
  }
  return best;
}

Result<std::optional<double>> estimated_travel_time(const EventStore& store, std::string_view building,
                                                    int from_level, int to_level,
                                                    const TimeWindow& window) {
  const auto& site = store.site();
  if (!site.find_building(building)) {
    return make_error(ErrorCode::UnknownBuilding, "unknown building '" + std::string(building) + "'");
  }
  if (!site.has_level(building, from_level) || !site.has_level(building, to_level)) {
    return make_error(ErrorCode::UnknownLevel, "level outside building " + std::string(building));
  }
  if (from_level == to_level) return std::optional<double>{0.0};

  const auto* lift = fastest_lift_between(site, building, from_level, to_level);
  if (!lift) return std::optional<double>{};
  const auto scope = QueryScope::building(std::string(building), site).value();
  const auto stats = wait_time_stats(store, scope, window);
  const auto& wait = stats.for_direction(to_level > from_level ? Direction::Up : Direction::Down);
  if (!wait) return std::optional<double>{};
  return std::optional<double>{wait->mean_s + std::abs(to_level - from_level) * lift->travel_s_per_level +
                               lift->door_dwell_s};
}

}  // namespace vt
