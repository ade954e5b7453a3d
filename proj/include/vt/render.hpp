#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vt/analytics.hpp"
#include "vt/planner.hpp"
#include "vt/serialize.hpp"

namespace vt {

enum class ReportKind { WaitTimes, HallCalls, DirectionSplit, ModeSplit, LogGeneral, LogHall, LogEmergency };
std::string_view to_string(ReportKind kind);
std::optional<ReportKind> parse_report_kind(std::string_view text);

enum class OutputFormat { Table, Csv, Json };
std::optional<OutputFormat> parse_output_format(std::string_view text);

/// Form inputs shared by the API and the CLI. A lift narrows a building; a
/// lift outside the given building is InvalidScope. Neither means all lifts.
Result<QueryScope> resolve_scope(const SiteConfig& site, std::optional<std::string_view> building,
                                 std::optional<std::string_view> lift);

/// Missing end defaults to just after `now`, missing start to end - 24 h.
Result<TimeWindow> resolve_window(std::optional<std::string_view> start, std::optional<std::string_view> end,
                                  Timestamp now);

using ReportData = std::variant<WaitTimeStats, std::optional<HallCallCount>, std::optional<DirectionSplit>,
                                std::optional<ModeSplit>, std::vector<LiftEvent>>;

/// Runs the analytics operation behind a report kind.
ReportData compute_report(const EventStore& store, ReportKind kind, const QueryScope& scope,
                          const TimeWindow& window);

bool is_no_data(const ReportData& data);

inline constexpr std::string_view kNoDataText = "No Data Available";

/// Pure rendering; the same data always yields the same bytes.
std::string render_report(ReportKind kind, const ReportData& data, const QueryScope& scope,
                          const TimeWindow& window, WaitStat stat, OutputFormat format);

std::string render_route(const RoutePlan& plan);

}  // namespace vt
