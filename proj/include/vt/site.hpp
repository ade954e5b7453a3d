#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vt/domain.hpp"

namespace vt {

/// A (building, level) location.
struct Place {
  std::string building;
  int level = 0;

  std::string str() const { return building + ":L" + std::to_string(level); }
  friend auto operator<=>(const Place&, const Place&) = default;
  friend bool operator==(const Place&, const Place&) = default;
};

struct BuildingSpec {
  std::string code;
  int min_level = 0;
  int max_level = 0;
};

struct LiftSpec {
  LiftId id;
  std::vector<int> served_levels;  // sorted, unique
  double travel_s_per_level = 4.0;
  double door_dwell_s = 8.0;

  bool serves(int level) const;
};

struct EscalatorSpec {
  std::string building;
  int from_level = 0;  // lower end
  int to_level = 0;    // upper end
  Direction direction = Direction::Up;
  std::optional<double> s_per_level;
};

struct StairSpec {
  std::string building;
  int from_level = 0;
  int to_level = 0;
  std::optional<double> s_per_level;
};

/// Same-level walkway between two buildings; traversable both ways.
struct BridgeSpec {
  Place a;
  Place b;
  double walk_s = 0.0;
};

/// Static description of the building complex: buildings and their level
/// ranges, lifts, escalators, stairs and bridges.
class SiteConfig {
 public:
  SiteConfig() = default;

  /// Validates the topology. Returns InvalidConfig naming the first problem.
  static Result<SiteConfig> make(std::vector<BuildingSpec> buildings, std::vector<LiftSpec> lifts,
                                 std::vector<EscalatorSpec> escalators = {},
                                 std::vector<StairSpec> stairs = {},
                                 std::vector<BridgeSpec> bridges = {});
  static Result<SiteConfig> parse(std::string_view json_text);
  static Result<SiteConfig> load(const std::filesystem::path& path);

  const std::vector<BuildingSpec>& buildings() const { return buildings_; }
  const std::vector<LiftSpec>& lifts() const { return lifts_; }
  const std::vector<EscalatorSpec>& escalators() const { return escalators_; }
  const std::vector<StairSpec>& stairs() const { return stairs_; }
  const std::vector<BridgeSpec>& bridges() const { return bridges_; }

  const BuildingSpec* find_building(std::string_view code) const;
  const LiftSpec* find_lift(const LiftId& id) const;
  bool has_level(std::string_view building, int level) const;
  std::vector<const LiftSpec*> lifts_in(std::string_view building) const;
  std::vector<LiftId> lift_ids() const;

 private:
  std::vector<BuildingSpec> buildings_;
  std::vector<LiftSpec> lifts_;  // sorted by id
  std::vector<EscalatorSpec> escalators_;
  std::vector<StairSpec> stairs_;
  std::vector<BridgeSpec> bridges_;
};

}  // namespace vt
