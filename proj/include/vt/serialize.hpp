#pragma once

#include <optional>
#include <span>

#include "json.hpp"
#include "vt/analytics.hpp"
#include "vt/planner.hpp"
#include "vt/status.hpp"
#include "vt/store.hpp"

namespace vt {

using Json = nlohmann::ordered_json;

enum class WaitStat { Mean, Max, Min };
std::string_view to_string(WaitStat stat);
std::optional<WaitStat> parse_wait_stat(std::string_view text);

/// Explicit NoData marker: {"no_data": true}.
Json no_data_json();

Json to_json(const TimeWindow& window);
Json to_json(const LiftEvent& event);
Json to_json(std::span<const LiftEvent> events);
Json to_json(const LiftStatus& status);
Json to_json(const NoticeEntry& notice);
Json to_json(const StatusTransition& transition);
Json to_json(const SignInRecord& record);
Json to_json(const RoutePlan& plan);
Json to_json(const SiteConfig& site);

/// With `stat`, each direction carries {count, value}; without, all of
/// count/mean_s/max_s/min_s.
Json to_json(const WaitTimeStats& stats, std::optional<WaitStat> stat = std::nullopt);
Json to_json(const std::optional<HallCallCount>& count);
Json to_json(const std::optional<DirectionSplit>& split);
Json to_json(const std::optional<ModeSplit>& split);

}  // namespace vt
