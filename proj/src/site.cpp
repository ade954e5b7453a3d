#include "vt/site.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vt {

using nlohmann::json;

bool LiftSpec::serves(int level) const {
  return std::binary_search(served_levels.begin(), served_levels.end(), level);
}

namespace {

Error invalid(std::string msg) { return make_error(ErrorCode::InvalidConfig, std::move(msg)); }

}  // namespace

Result<SiteConfig> SiteConfig::make(std::vector<BuildingSpec> buildings, std::vector<LiftSpec> lifts,
                                    std::vector<EscalatorSpec> escalators,
                                    std::vector<StairSpec> stairs, std::vector<BridgeSpec> bridges) {
  SiteConfig site;
  std::set<std::string> codes;
  for (const auto& b : buildings) {
    if (!is_valid_building_code(b.code)) return invalid("invalid building code '" + b.code + "'");
    if (!codes.insert(b.code).second) return invalid("duplicate building " + b.code);
    if (b.min_level > b.max_level) return invalid("building " + b.code + ": min_level > max_level");
  }
  site.buildings_ = std::move(buildings);
  std::sort(site.buildings_.begin(), site.buildings_.end(),
            [](const auto& x, const auto& y) { return x.code < y.code; });

  std::set<LiftId> ids;
  for (auto& lift : lifts) {
    const auto* b = site.find_building(lift.id.building());
    if (!b) return invalid("lift " + lift.id.str() + " references unknown building");
    if (!ids.insert(lift.id).second) return invalid("duplicate lift " + lift.id.str());
    std::sort(lift.served_levels.begin(), lift.served_levels.end());
    lift.served_levels.erase(std::unique(lift.served_levels.begin(), lift.served_levels.end()),
                             lift.served_levels.end());
    if (lift.served_levels.size() < 2) return invalid("lift " + lift.id.str() + " serves < 2 levels");
    if (lift.served_levels.front() < b->min_level || lift.served_levels.back() > b->max_level) {
      return invalid("lift " + lift.id.str() + " serves a level outside its building");
    }
    if (!(lift.travel_s_per_level > 0.0)) return invalid("lift " + lift.id.str() + ": travel_s_per_level must be > 0");
    if (lift.door_dwell_s < 0.0) return invalid("lift " + lift.id.str() + ": door_dwell_s must be >= 0");
  }
  site.lifts_ = std::move(lifts);
  std::sort(site.lifts_.begin(), site.lifts_.end(),
            [](const auto& x, const auto& y) { return x.id < y.id; });

  auto check_span = [&](const std::string& building, int from, int to,
                        const std::optional<double>& spl, const char* what) -> std::optional<Error> {
    const auto* b = site.find_building(building);
    if (!b) return invalid(std::string(what) + " references unknown building " + building);
    if (from >= to) return invalid(std::string(what) + " in " + building + ": from_level must be < to_level");
    if (from < b->min_level || to > b->max_level) {
      return invalid(std::string(what) + " in " + building + " spans levels outside the building");
    }
    if (spl && !(*spl > 0.0)) return invalid(std::string(what) + " in " + building + ": s_per_level must be > 0");
    return std::nullopt;
  };
  for (const auto& e : escalators) {
    if (auto err = check_span(e.building, e.from_level, e.to_level, e.s_per_level, "escalator")) return *err;
    if (e.direction == Direction::None) return invalid("escalator direction must be up or down");
  }
  for (const auto& s : stairs) {
    if (auto err = check_span(s.building, s.from_level, s.to_level, s.s_per_level, "stairs")) return *err;
  }
  for (const auto& br : bridges) {
    if (!site.has_level(br.a.building, br.a.level) || !site.has_level(br.b.building, br.b.level)) {
      return invalid("bridge " + br.a.str() + " <-> " + br.b.str() + " has an unknown endpoint");
    }
    if (br.a == br.b) return invalid("bridge endpoints must differ");
    if (br.walk_s < 0.0) return invalid("bridge walk_s must be >= 0");
  }
  site.escalators_ = std::move(escalators);
  site.stairs_ = std::move(stairs);
  site.bridges_ = std::move(bridges);
  return site;
}

namespace {

std::optional<double> optional_number(const json& j, const char* key) {
  if (j.contains(key) && !j.at(key).is_null()) return j.at(key).get<double>();
  return std::nullopt;
}

Place parse_place(const json& j) {
  return Place{j.at("building").get<std::string>(), j.at("level").get<int>()};
}

}  // namespace

Result<SiteConfig> SiteConfig::parse(std::string_view json_text) {
  try {
    const json doc = json::parse(json_text);
    std::vector<BuildingSpec> buildings;
    for (const auto& b : doc.at("buildings")) {
      buildings.push_back({b.at("code").get<std::string>(), b.at("min_level").get<int>(),
                           b.at("max_level").get<int>()});
    }
    std::vector<LiftSpec> lifts;
    for (const auto& l : doc.value("lifts", json::array())) {
      auto id = LiftId::make(l.at("building").get<std::string>(), l.at("unit").get<int>());
      if (!id) return invalid(id.error().message);
      LiftSpec spec{id.value(), l.at("served_levels").get<std::vector<int>>(),
                    l.value("travel_s_per_level", 4.0), l.value("door_dwell_s", 8.0)};
      lifts.push_back(std::move(spec));
    }
    std::vector<EscalatorSpec> escalators;
    for (const auto& e : doc.value("escalators", json::array())) {
      auto dir = parse_direction(e.at("direction").get<std::string>());
      if (!dir || *dir == Direction::None) return invalid("escalator direction must be up or down");
      escalators.push_back({e.at("building").get<std::string>(), e.at("from_level").get<int>(),
                            e.at("to_level").get<int>(), *dir, optional_number(e, "s_per_level")});
    }
    std::vector<StairSpec> stairs;
    for (const auto& s : doc.value("stairs", json::array())) {
      stairs.push_back({s.at("building").get<std::string>(), s.at("from_level").get<int>(),
                        s.at("to_level").get<int>(), optional_number(s, "s_per_level")});
    }
    std::vector<BridgeSpec> bridges;
    for (const auto& br : doc.value("bridges", json::array())) {
      bridges.push_back({parse_place(br.at("a")), parse_place(br.at("b")), br.at("walk_s").get<double>()});
    }
    return make(std::move(buildings), std::move(lifts), std::move(escalators), std::move(stairs),
                std::move(bridges));
  } catch (const json::exception& e) {
    return invalid(std::string("site document: ") + e.what());
  }
}

Result<SiteConfig> SiteConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return invalid("cannot read site file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const BuildingSpec* SiteConfig::find_building(std::string_view code) const {
  auto it = std::lower_bound(buildings_.begin(), buildings_.end(), code,
                             [](const BuildingSpec& b, std::string_view c) { return b.code < c; });
  return (it != buildings_.end() && it->code == code) ? &*it : nullptr;
}

const LiftSpec* SiteConfig::find_lift(const LiftId& id) const {
  auto it = std::lower_bound(lifts_.begin(), lifts_.end(), id,
                             [](const LiftSpec& l, const LiftId& i) { return l.id < i; });
  return (it != lifts_.end() && it->id == id) ? &*it : nullptr;
}

bool SiteConfig::has_level(std::string_view building, int level) const {
  const auto* b = find_building(building);
  return b && level >= b->min_level && level <= b->max_level;
}

std::vector<const LiftSpec*> SiteConfig::lifts_in(std::string_view building) const {
  std::vector<const LiftSpec*> out;
  for (const auto& l : lifts_) {
    if (l.id.building() == building) out.push_back(&l);
  }
  return out;
}

std::vector<LiftId> SiteConfig::lift_ids() const {
  std::vector<LiftId> out;
  out.reserve(lifts_.size());
  for (const auto& l : lifts_) out.push_back(l.id);
  return out;
}

}  // namespace vt
