#include "doctest.h"
#include "support.hpp"
#include "vt/render.hpp"
#include "vt/store.hpp"

using namespace vt;
using namespace vt::testing;

namespace {

Timestamp at(int s) { return day0() + Seconds{s}; }

}  // namespace

TEST_CASE("report kinds and formats parse") {
  for (auto k : {ReportKind::WaitTimes, ReportKind::HallCalls, ReportKind::DirectionSplit, ReportKind::ModeSplit,
                 ReportKind::LogGeneral, ReportKind::LogHall, ReportKind::LogEmergency}) {
    CHECK(parse_report_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_report_kind("waits"));
  CHECK(parse_output_format("csv") == OutputFormat::Csv);
  CHECK_FALSE(parse_output_format("xml"));
}

TEST_CASE("scope resolution") {
  const auto site = fixture_site();
  CHECK(resolve_scope(site, std::nullopt, std::nullopt)->is_all());
  CHECK(resolve_scope(site, "", "")->is_all());
  CHECK(*resolve_scope(site, "B10", std::nullopt)->building_code() == "B10");
  CHECK(*resolve_scope(site, "B8", "B8-L2")->lift() == lift("B8-L2"));
  CHECK(*resolve_scope(site, std::nullopt, "B8-L2")->lift() == lift("B8-L2"));
  CHECK(resolve_scope(site, "B10", "B8-L2").error().code == ErrorCode::InvalidScope);
  CHECK(resolve_scope(site, "B9", std::nullopt).error().code == ErrorCode::UnknownBuilding);
  CHECK(resolve_scope(site, std::nullopt, "B8-L9").error().code == ErrorCode::UnknownLift);
}

TEST_CASE("window resolution") {
  const auto now = at(86400);
  const auto w = resolve_window(std::nullopt, std::nullopt, now);
  REQUIRE(w);
  CHECK(w->end() == now + Seconds{1});
  CHECK(w->start() == day0() + Seconds{1});
  CHECK(w->contains(now));
  const auto explicit_window = resolve_window("2026-03-02T01:00:00Z", "2026-03-02T02:00:00Z", now);
  REQUIRE(explicit_window);
  CHECK(explicit_window->length() == Seconds{3600});
  CHECK(resolve_window("yesterday", std::nullopt, now).error().code == ErrorCode::InvalidWindow);
  CHECK(resolve_window("2026-03-02T02:00:00Z", "2026-03-02T01:00:00Z", now).error().code ==
        ErrorCode::InvalidWindow);
  CHECK(resolve_window("2026-03-02T02:00:00Z", "2026-03-02T02:00:00Z", now).error().code ==
        ErrorCode::InvalidWindow);
}

TEST_CASE("no data renders the same text in table and csv") {
  const auto site = fixture_site();
  EventStore store(site);
  const auto scope = QueryScope::all_lifts();
  const auto w = window(at(0), at(3600));
  for (auto k : {ReportKind::WaitTimes, ReportKind::HallCalls, ReportKind::DirectionSplit, ReportKind::ModeSplit,
                 ReportKind::LogGeneral, ReportKind::LogHall, ReportKind::LogEmergency}) {
    const auto data = compute_report(store, k, scope, w);
    CHECK(is_no_data(data));
    CHECK(render_report(k, data, scope, w, WaitStat::Mean, OutputFormat::Table) == "No Data Available\n");
    CHECK(render_report(k, data, scope, w, WaitStat::Mean, OutputFormat::Csv) == "No Data Available\n");
    const auto json = Json::parse(render_report(k, data, scope, w, WaitStat::Mean, OutputFormat::Json));
    CHECK(json["no_data"] == true);
    CHECK(json["report"] == std::string(to_string(k)));
  }
}

TEST_CASE("report rendering") {
  const auto site = fixture_site();
  EventStore store(site);
  store.append_event(make_event(site, {"B8-L1", at(10), EventType::HallCallServed, Direction::Up, 30}));
  store.append_event(make_event(site, {"B8-L2", at(20), EventType::HallCallServed, Direction::Up, 11}));
  store.append_event(make_event(site, {"B8-L2", at(25), EventType::HallCallRegistered, Direction::Down}));
  const auto scope = QueryScope::building("B8", site).value();
  const auto w = window(at(0), at(3600));

  const auto waits = compute_report(store, ReportKind::WaitTimes, scope, w);
  CHECK(render_report(ReportKind::WaitTimes, waits, scope, w, WaitStat::Mean, OutputFormat::Csv) ==
        "direction,calls,mean_wait_s\n"
        "up,2,20.500\n"
        "down,0,No Data Available\n");
  CHECK(render_report(ReportKind::WaitTimes, waits, scope, w, WaitStat::Max, OutputFormat::Table) ==
        "wait-times for building B8, 2026-03-02T00:00:00Z .. 2026-03-02T01:00:00Z\n"
        "direction  calls  max_wait_s\n"
        "up         2      30\n"
        "down       0      No Data Available\n");

  const auto split = compute_report(store, ReportKind::DirectionSplit, scope, w);
  CHECK(render_report(ReportKind::DirectionSplit, split, scope, w, WaitStat::Mean, OutputFormat::Csv) ==
        "direction,hall_calls,pct\n"
        "up,0,0.0\n"
        "down,1,100.0\n");

  const auto log = compute_report(store, ReportKind::LogHall, scope, w);
  const auto csv = render_report(ReportKind::LogHall, log, scope, w, WaitStat::Mean, OutputFormat::Csv);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "lift_id,occurred_time,direction,wait_time,operation_mode_id,event_type,floor_position,door_status");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("B8-L1,2026-03-02T00:00:10Z,up,30,0,hall_call_served,1,closed") != std::string::npos);

  const auto json = Json::parse(render_report(ReportKind::WaitTimes, waits, scope, w, WaitStat::Min,
                                              OutputFormat::Json));
  CHECK(json["scope"] == "building B8");
  CHECK(json["window"]["start"] == "2026-03-02T00:00:00Z");
  CHECK(json["result"]["up"]["value"] == 11);
  CHECK(json["result"]["down"]["no_data"] == true);

  // Pure: identical input, identical bytes.
  CHECK(render_report(ReportKind::LogHall, log, scope, w, WaitStat::Mean, OutputFormat::Table) ==
        render_report(ReportKind::LogHall, log, scope, w, WaitStat::Mean, OutputFormat::Table));
}

TEST_CASE("route rendering") {
  CHECK(render_route(RoutePlan{}) == "already there, total 0 s\n");
  RoutePlan plan;
  plan.legs.push_back({TransportMode::Lift, {"B8", 1}, {"B8", 4}, 45.0, 20.0, lift("B8-L1")});
  plan.legs.push_back({TransportMode::Walk, {"B8", 4}, {"B10", 4}, 0.0, 60.0, std::nullopt});
  plan.total_s = 125.0;
  plan.stairs_advisory = true;
  plan.stairs_only_total_s = 130.0;
  CHECK(render_route(plan) ==
        "#  mode  from   to      wait_s  travel_s  lift\n"
        "1  lift  B8:L1  B8:L4   45.0    20.0      B8-L1\n"
        "2  walk  B8:L4  B10:L4  0.0     60.0      -\n"
        "total 125.0 s\n"
        "consider the stairs: 130.0 s by stairs only\n");
}
