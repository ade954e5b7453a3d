#include "vt/serialize.hpp"

#include <cmath>

namespace vt {

std::string_view to_string(WaitStat stat) {
  switch (stat) {
    case WaitStat::Mean: return "mean";
    case WaitStat::Max: return "max";
    case WaitStat::Min: return "min";
  }
  return "mean";
}

std::optional<WaitStat> parse_wait_stat(std::string_view text) {
  if (text == "mean") return WaitStat::Mean;
  if (text == "max") return WaitStat::Max;
  if (text == "min") return WaitStat::Min;
  return std::nullopt;
}

Json no_data_json() {
  Json j;
  j["no_data"] = true;
  return j;
}

namespace {

template <class T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json optional_time(const std::optional<Timestamp>& t) {
  return t ? Json(format_timestamp(*t)) : Json(nullptr);
}

Json percent_json(const Percent& p) { return p.value(); }

Json place_json(const Place& p) {
  Json j;
  j["building"] = p.building;
  j["level"] = p.level;
  return j;
}

}  // namespace

Json to_json(const TimeWindow& window) {
  Json j;
  j["start"] = format_timestamp(window.start());
  j["end"] = format_timestamp(window.end());
  return j;
}

Json to_json(const LiftEvent& e) {
  Json j;
  j["lift_id"] = e.lift().str();
  j["occurred_time"] = format_timestamp(e.occurred_at());
  j["direction"] = to_string(e.direction());
  j["wait_time"] = optional_value(e.wait_time_s());
  j["operation_mode_id"] = mode_id(e.operation_mode());
  j["event_type"] = to_string(e.event_type());
  j["floor_position"] = e.floor_position();
  j["door_status"] = to_string(e.door_status());
  return j;
}

Json to_json(std::span<const LiftEvent> events) {
  Json rows = Json::array();
  for (const auto& e : events) rows.push_back(to_json(e));
  return rows;
}

Json to_json(const LiftStatus& s) {
  Json j;
  j["lift"] = s.lift.str();
  j["building"] = s.lift.building();
  j["unit"] = s.lift.unit();
  j["working"] = s.working;
  j["mode"] = to_string(s.mode);
  j["mode_id"] = mode_id(s.mode);
  j["since"] = optional_time(s.since);
  j["data_age_s"] = optional_value(s.data_age_s);
  return j;
}

Json to_json(const NoticeEntry& n) {
  Json j;
  j["lift"] = n.lift.str();
  j["mode"] = to_string(n.mode);
  j["mode_id"] = mode_id(n.mode);
  j["since"] = optional_time(n.since);
  j["message"] = n.message;
  return j;
}

Json to_json(const StatusTransition& t) {
  Json j;
  j["lift"] = t.lift().str();
  j["from_mode"] = to_string(t.from_mode());
  j["to_mode"] = to_string(t.to_mode());
  j["at"] = format_timestamp(t.at());
  j["source"] = to_string(t.source());
  return j;
}

Json to_json(const SignInRecord& r) {
  Json j;
  j["user_id"] = r.user_id;
  j["at"] = format_timestamp(r.at);
  j["outcome"] = to_string(r.outcome);
  j["client_note"] = r.client_note;
  return j;
}

Json to_json(const RoutePlan& plan) {
  Json j;
  Json legs = Json::array();
  for (const auto& leg : plan.legs) {
    Json l;
    l["mode"] = to_string(leg.mode);
    l["from"] = place_json(leg.from);
    l["to"] = place_json(leg.to);
    l["expected_wait_s"] = leg.expected_wait_s;
    l["travel_s"] = leg.travel_s;
    l["lift"] = leg.lift ? Json(leg.lift->str()) : Json(nullptr);
    legs.push_back(std::move(l));
  }
  j["legs"] = std::move(legs);
  j["total_s"] = plan.total_s;
  j["stairs_advisory"] = plan.stairs_advisory;
  j["stairs_only_total_s"] = optional_value(plan.stairs_only_total_s);
  return j;
}

Json to_json(const SiteConfig& site) {
  Json j;
  Json buildings = Json::array();
  for (const auto& b : site.buildings()) {
    Json o;
    o["code"] = b.code;
    o["min_level"] = b.min_level;
    o["max_level"] = b.max_level;
    buildings.push_back(std::move(o));
  }
  Json lifts = Json::array();
  for (const auto& l : site.lifts()) {
    Json o;
    o["lift"] = l.id.str();
    o["building"] = l.id.building();
    o["unit"] = l.id.unit();
    o["served_levels"] = l.served_levels;
    o["travel_s_per_level"] = l.travel_s_per_level;
    o["door_dwell_s"] = l.door_dwell_s;
    lifts.push_back(std::move(o));
  }
  Json escalators = Json::array();
  for (const auto& e : site.escalators()) {
    Json o;
    o["building"] = e.building;
    o["from_level"] = e.from_level;
    o["to_level"] = e.to_level;
    o["direction"] = to_string(e.direction);
    escalators.push_back(std::move(o));
  }
  Json stairs = Json::array();
  for (const auto& s : site.stairs()) {
    Json o;
    o["building"] = s.building;
    o["from_level"] = s.from_level;
    o["to_level"] = s.to_level;
    stairs.push_back(std::move(o));
  }
  Json bridges = Json::array();
  for (const auto& br : site.bridges()) {
    Json o;
    o["a"] = place_json(br.a);
    o["b"] = place_json(br.b);
    o["walk_s"] = br.walk_s;
    bridges.push_back(std::move(o));
  }
  j["buildings"] = std::move(buildings);
  j["lifts"] = std::move(lifts);
  j["escalators"] = std::move(escalators);
  j["stairs"] = std::move(stairs);
  j["bridges"] = std::move(bridges);
  return j;
}

Json to_json(const WaitTimeStats& stats, std::optional<WaitStat> stat) {
  auto direction = [&](const std::optional<DirectionWaitStats>& d) {
    if (!d) return no_data_json();
    Json j;
    j["count"] = d->count;
    if (stat) {
      switch (*stat) {
        case WaitStat::Mean: j["value"] = d->mean_s; break;
        case WaitStat::Max: j["value"] = d->max_s; break;
        case WaitStat::Min: j["value"] = d->min_s; break;
      }
    } else {
      j["mean_s"] = d->mean_s;
      j["max_s"] = d->max_s;
      j["min_s"] = d->min_s;
    }
    return j;
  };
  Json j;
  j["no_data"] = stats.no_data();
  if (stat) j["stat"] = to_string(*stat);
  j["up"] = direction(stats.up);
  j["down"] = direction(stats.down);
  return j;
}

Json to_json(const std::optional<HallCallCount>& count) {
  if (!count) return no_data_json();
  Json j;
  j["no_data"] = false;
  j["up"] = count->up;
  j["down"] = count->down;
  j["total"] = count->up + count->down;
  return j;
}

Json to_json(const std::optional<DirectionSplit>& split) {
  if (!split) return no_data_json();
  Json j;
  j["no_data"] = false;
  j["up_pct"] = percent_json(split->up);
  j["down_pct"] = percent_json(split->down);
  j["up_calls"] = split->up_calls;
  j["down_calls"] = split->down_calls;
  return j;
}

Json to_json(const std::optional<ModeSplit>& split) {
  if (!split) return no_data_json();
  Json j;
  j["no_data"] = false;
  Json modes = Json::array();
  for (auto mode : kAllModes) {
    Json m;
    m["mode"] = to_string(mode);
    m["mode_id"] = mode_id(mode);
    m["seconds"] = split->seconds[mode_id(mode)];
    m["pct"] = percent_json(split->percent[mode_id(mode)]);
    modes.push_back(std::move(m));
  }
  j["modes"] = std::move(modes);
  j["total_seconds"] = split->total_seconds;
  return j;
}

}  // namespace vt
