#include "vt/render.hpp"

#include <cstdio>
#include <sstream>

namespace vt {

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::WaitTimes: return "wait-times";
    case ReportKind::HallCalls: return "hall-calls";
    case ReportKind::DirectionSplit: return "direction-split";
    case ReportKind::ModeSplit: return "mode-split";
    case ReportKind::LogGeneral: return "log-general";
    case ReportKind::LogHall: return "log-hall";
    case ReportKind::LogEmergency: return "log-emergency";
  }
  return "wait-times";
}

std::optional<ReportKind> parse_report_kind(std::string_view text) {
  for (auto k : {ReportKind::WaitTimes, ReportKind::HallCalls, ReportKind::DirectionSplit, ReportKind::ModeSplit,
                 ReportKind::LogGeneral, ReportKind::LogHall, ReportKind::LogEmergency}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return std::nullopt;
}

Result<QueryScope> resolve_scope(const SiteConfig& site, std::optional<std::string_view> building,
                                 std::optional<std::string_view> lift) {
  if (building && building->empty()) building.reset();
  if (lift && lift->empty()) lift.reset();
  if (lift) {
    auto id = LiftId::parse(*lift);
    if (!id) return id.error();
    if (building && id->building() != *building) {
      return make_error(ErrorCode::InvalidScope,
                        "lift " + id->str() + " is not in building " + std::string(*building));
    }
    return QueryScope::single_lift(*id, site);
  }
  if (building) return QueryScope::building(std::string(*building), site);
  return QueryScope::all_lifts();
}

Result<TimeWindow> resolve_window(std::optional<std::string_view> start, std::optional<std::string_view> end,
                                  Timestamp now) {
  // The current second counts as past.
  Timestamp e = now + Seconds{1};
  if (end && !end->empty()) {
    auto t = parse_timestamp(*end);
    if (!t) return make_error(ErrorCode::InvalidWindow, "bad end time '" + std::string(*end) + "'");
    e = *t;
  }
  Timestamp s = e - Seconds{24 * 3600};
  if (start && !start->empty()) {
    auto t = parse_timestamp(*start);
    if (!t) return make_error(ErrorCode::InvalidWindow, "bad start time '" + std::string(*start) + "'");
    s = *t;
  }
  return TimeWindow::make(s, e);
}

ReportData compute_report(const EventStore& store, ReportKind kind, const QueryScope& scope,
                          const TimeWindow& window) {
  switch (kind) {
    case ReportKind::WaitTimes: return wait_time_stats(store, scope, window);
    case ReportKind::HallCalls: return hall_call_count(store, scope, window);
    case ReportKind::DirectionSplit: return direction_percentages(store, scope, window);
    case ReportKind::ModeSplit: return mode_percentages(store, scope, window);
    case ReportKind::LogGeneral: return event_log(store, LogKind::General, scope, window);
    case ReportKind::LogHall: return event_log(store, LogKind::HallCall, scope, window);
    case ReportKind::LogEmergency: return event_log(store, LogKind::Emergency, scope, window);
  }
  return std::vector<LiftEvent>{};
}

bool is_no_data(const ReportData& data) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WaitTimeStats>) {
          return v.no_data();
        } else if constexpr (std::is_same_v<T, std::vector<LiftEvent>>) {
          return v.empty();
        } else {
          return !v.has_value();
        }
      },
      data);
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Left-aligned columns separated by two spaces.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> rows_for(const ReportData& data, WaitStat stat) {
  std::vector<std::vector<std::string>> rows;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WaitTimeStats>) {
          rows.push_back({"direction", "calls", std::string(to_string(stat)) + "_wait_s"});
          for (auto d : {Direction::Up, Direction::Down}) {
            const auto& s = v.for_direction(d);
            if (!s) {
              rows.push_back({std::string(to_string(d)), "0", std::string(kNoDataText)});
              continue;
            }
            const std::string value = stat == WaitStat::Mean  ? fixed(s->mean_s, 3)
                                      : stat == WaitStat::Max ? std::to_string(s->max_s)
                                                              : std::to_string(s->min_s);
            rows.push_back({std::string(to_string(d)), std::to_string(s->count), value});
          }
        } else if constexpr (std::is_same_v<T, std::optional<HallCallCount>>) {
          rows.push_back({"direction", "hall_calls"});
          rows.push_back({"up", std::to_string(v->up)});
          rows.push_back({"down", std::to_string(v->down)});
          rows.push_back({"total", std::to_string(v->up + v->down)});
        } else if constexpr (std::is_same_v<T, std::optional<DirectionSplit>>) {
          rows.push_back({"direction", "hall_calls", "pct"});
          rows.push_back({"up", std::to_string(v->up_calls), v->up.str()});
          rows.push_back({"down", std::to_string(v->down_calls), v->down.str()});
        } else if constexpr (std::is_same_v<T, std::optional<ModeSplit>>) {
          rows.push_back({"mode", "seconds", "pct"});
          for (auto mode : kAllModes) {
            rows.push_back({std::string(to_string(mode)), std::to_string(v->seconds[mode_id(mode)]),
                            v->percent[mode_id(mode)].str()});
          }
        } else {
          rows.push_back({"lift_id", "occurred_time", "direction", "wait_time", "operation_mode_id", "event_type",
                          "floor_position", "door_status"});
          for (const auto& e : v) {
            rows.push_back({e.lift().str(), format_timestamp(e.occurred_at()), std::string(to_string(e.direction())),
                            e.wait_time_s() ? std::to_string(*e.wait_time_s()) : "",
                            std::to_string(mode_id(e.operation_mode())), std::string(to_string(e.event_type())),
                            std::to_string(e.floor_position()), std::string(to_string(e.door_status()))});
          }
        }
      },
      data);
  return rows;
}

Json data_json(const ReportData& data, WaitStat stat) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WaitTimeStats>) {
          return to_json(v, stat);
        } else if constexpr (std::is_same_v<T, std::vector<LiftEvent>>) {
          return to_json(std::span<const LiftEvent>(v));
        } else {
          return to_json(v);
        }
      },
      data);
}

}  // namespace

std::string render_report(ReportKind kind, const ReportData& data, const QueryScope& scope,
                          const TimeWindow& window, WaitStat stat, OutputFormat format) {
  if (format == OutputFormat::Json) {
    Json j;
    j["report"] = to_string(kind);
    j["scope"] = scope.describe();
    j["window"] = to_json(window);
    j["no_data"] = is_no_data(data);
    j["result"] = data_json(data, stat);
    return j.dump(2) + "\n";
  }
  if (is_no_data(data)) return std::string(kNoDataText) + "\n";
  const auto rows = rows_for(data, stat);
  if (format == OutputFormat::Csv) return csv(rows);
  return std::string(to_string(kind)) + " for " + scope.describe() + ", " + format_timestamp(window.start()) +
         " .. " + format_timestamp(window.end()) + "\n" + table(rows);
}

std::string render_route(const RoutePlan& plan) {
  if (plan.legs.empty()) return "already there, total 0 s\n";
  std::vector<std::vector<std::string>> rows{{"#", "mode", "from", "to", "wait_s", "travel_s", "lift"}};
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const auto& leg = plan.legs[i];
    rows.push_back({std::to_string(i + 1), std::string(to_string(leg.mode)), leg.from.str(), leg.to.str(),
                    fixed(leg.expected_wait_s, 1), fixed(leg.travel_s, 1), leg.lift ? leg.lift->str() : "-"});
  }
  std::string out = table(rows);
  out += "total " + fixed(plan.total_s, 1) + " s\n";
  if (plan.stairs_advisory && plan.stairs_only_total_s) {
    out += "consider the stairs: " + fixed(*plan.stairs_only_total_s, 1) + " s by stairs only\n";
  }
  return out;
}

}  // namespace vt
