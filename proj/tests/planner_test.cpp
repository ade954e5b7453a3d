#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "vt/planner.hpp"

using namespace vt;
using namespace vt::testing;

namespace {

RouteQuery query(Place from, Place to) {
  return RouteQuery{std::move(from), std::move(to), day0(), window(day0() - Seconds{86400}, day0())};
}

PlannerContext context(const std::map<std::pair<std::string, Direction>, double>& waits,
                       const std::set<LiftId>& broken) {
  PlannerContext ctx;
  ctx.mean_wait = [waits](const std::string& b, Direction d, const TimeWindow&) -> std::optional<double> {
    auto it = waits.find({b, d});
    if (it == waits.end()) return std::nullopt;
    return it->second;
  };
  ctx.lift_working = [broken](const LiftId& id) { return !broken.count(id); };
  return ctx;
}

PlannerContext all_working() { return context({}, {}); }

double leg_sum(const RoutePlan& plan) {
  double sum = 0;
  for (const auto& l : plan.legs) sum += l.expected_wait_s + l.travel_s;
  return sum;
}

SiteConfig two_islands() {
  return SiteConfig::make({{"A", 1, 3}, {"C", 1, 3}}, {},
                          {}, {{"A", 1, 3, std::nullopt}, {"C", 1, 3, std::nullopt}}, {})
      .value();
}

}  // namespace

TEST_CASE("graph construction") {
  const auto site = fixture_site();
  const auto g = build_graph(site);
  CHECK(g.nodes().size() == 8 + 6 + 10);
  CHECK(std::is_sorted(g.nodes().begin(), g.nodes().end()));
  CHECK(g.warnings().empty());
  CHECK(g.component_count() == 1);

  std::size_t stairs = 0, escalators = 0, lifts = 0, walks = 0;
  for (const auto& e : g.edges()) {
    const auto& from = g.nodes()[e.from];
    const auto& to = g.nodes()[e.to];
    switch (e.mode) {
      case TransportMode::Stairs:
        ++stairs;
        CHECK(std::abs(from.level - to.level) == 1);
        CHECK(from.building == to.building);
        break;
      case TransportMode::Escalator: ++escalators; break;
      case TransportMode::Lift:
        ++lifts;
        REQUIRE(e.serving_lift);
        CHECK(site.find_lift(*e.serving_lift)->serves(from.level));
        CHECK(site.find_lift(*e.serving_lift)->serves(to.level));
        break;
      case TransportMode::Walk: ++walks; break;
    }
  }
  CHECK(stairs == 2 * (7 + 5 + 9));
  CHECK(escalators == 2);
  CHECK(lifts == 8 * 7 * 2 + 6 * 5 + 10 * 9 * 2 + 5 * 4);
  CHECK(walks == 4);
}

TEST_CASE("escalators run one way") {
  const auto site = SiteConfig::make({{"A", 1, 3}}, {}, {{"A", 1, 3, Direction::Down, 12.0}}).value();
  const auto g = build_graph(site);
  for (const auto& e : g.edges()) CHECK(g.nodes()[e.from].level == g.nodes()[e.to].level + 1);
  CHECK(g.edges().size() == 2);
  auto down = plan_route(query({"A", 3}, {"A", 1}), g, all_working());
  REQUIRE(down);
  CHECK(down->total_s == doctest::Approx(24.0));
  auto up = plan_route(query({"A", 1}, {"A", 3}), g, all_working());
  REQUIRE_FALSE(up);
  CHECK(up.error().code == ErrorCode::NoRoute);
}

TEST_CASE("disconnected places are reported") {
  const auto site = SiteConfig::make({{"A", 1, 4}}, {}, {}, {{"A", 1, 2, std::nullopt}}).value();
  const auto g = build_graph(site);
  CHECK(g.warnings().size() == 2);
  CHECK(g.warnings()[0].code == "DisconnectedNode");
  CHECK(g.component_count() == 3);
}

TEST_CASE("same place") {
  const auto g = build_graph(fixture_site());
  auto plan = plan_route(query({"B8", 3}, {"B8", 3}), g, all_working());
  REQUIRE(plan);
  CHECK(plan->legs.empty());
  CHECK(plan->total_s == 0.0);
  CHECK_FALSE(plan->stairs_advisory);
}

TEST_CASE("unknown places") {
  const auto g = build_graph(fixture_site());
  for (const auto& [from, to] : {std::pair<Place, Place>{{"B8", 9}, {"B8", 1}}, {{"B8", 1}, {"B9", 1}}}) {
    auto r = plan_route(query(from, to), g, all_working());
    REQUIRE_FALSE(r);
    CHECK(r.error().code == ErrorCode::UnknownNode);
  }
}

TEST_CASE("no route between unconnected buildings") {
  const auto g = build_graph(two_islands());
  auto r = plan_route(query({"A", 1}, {"C", 2}), g, all_working());
  REQUIRE_FALSE(r);
  CHECK(r.error().code == ErrorCode::NoRoute);
}

TEST_CASE("lift ride with default waits") {
  const auto g = build_graph(fixture_site());
  auto plan = plan_route(query({"B8", 1}, {"B8", 8}), g, all_working());
  REQUIRE(plan);
  REQUIRE(plan->legs.size() == 1);
  const auto& leg = plan->legs[0];
  CHECK(leg.mode == TransportMode::Lift);
  CHECK(leg.lift == lift("B8-L1"));  // equal to L2; lower edge id wins
  CHECK(leg.expected_wait_s == 45.0);
  CHECK(leg.travel_s == 7 * 4.0 + 8.0);
  CHECK(plan->total_s == 81.0);
  CHECK(plan->stairs_only_total_s == 140.0);
  CHECK_FALSE(plan->stairs_advisory);
}

TEST_CASE("historical waits change the choice") {
  const auto g = build_graph(fixture_site());
  auto slow = context({{{"B8", Direction::Up}, 200.0}}, {});
  auto plan = plan_route(query({"B8", 1}, {"B8", 8}), g, slow);
  REQUIRE(plan);
  CHECK(plan->total_s == 140.0);
  CHECK(plan->legs.size() == 7);
  for (const auto& leg : plan->legs) CHECK(leg.mode == TransportMode::Stairs);
  CHECK_FALSE(plan->stairs_advisory);  // only computed when machines are used
}

TEST_CASE("a lift that is not working is never used") {
  const auto g = build_graph(fixture_site());
  auto plan = plan_route(query({"B8", 1}, {"B8", 8}), g, context({}, {lift("B8-L1")}));
  REQUIRE(plan);
  REQUIRE(plan->legs.size() == 1);
  CHECK(plan->legs[0].lift == lift("B8-L2"));

  plan = plan_route(query({"B8", 1}, {"B8", 8}), g, context({}, {lift("B8-L1"), lift("B8-L2")}));
  REQUIRE(plan);
  CHECK(plan->total_s == 140.0);
  for (const auto& leg : plan->legs) CHECK(leg.lift != lift("B8-L1"));
}

TEST_CASE("cross-building route over a bridge") {
  const auto g = build_graph(fixture_site());
  auto plan = plan_route(query({"B8", 4}, {"B10", 4}), g, all_working());
  REQUIRE(plan);
  REQUIRE(plan->legs.size() == 1);
  CHECK(plan->legs[0].mode == TransportMode::Walk);
  CHECK(plan->total_s == 60.0);

  plan = plan_route(query({"B8", 1}, {"B12", 10}), g, all_working());
  REQUIRE(plan);
  CHECK(plan->legs.front().from == Place{"B8", 1});
  CHECK(plan->legs.back().to == Place{"B12", 10});
  for (std::size_t i = 1; i < plan->legs.size(); ++i) CHECK(plan->legs[i].from == plan->legs[i - 1].to);
  CHECK(plan->total_s == doctest::Approx(leg_sum(*plan)));
}

TEST_CASE("stairs advisory") {
  // Two levels: lift 10 wait + 5 ride + 0 dwell = 15 s, stairs 17 s (within 15 %).
  const auto site = SiteConfig::make({{"A", 1, 2}}, {{LiftId::make("A", 1).value(), {1, 2}, 5.0, 0.0}}, {},
                                     {{"A", 1, 2, 17.0}})
                        .value();
  const auto g = build_graph(site);
  auto plan = plan_route(query({"A", 1}, {"A", 2}), g, context({{{"A", Direction::Up}, 10.0}}, {}));
  REQUIRE(plan);
  CHECK(plan->legs[0].mode == TransportMode::Lift);
  CHECK(plan->stairs_advisory);
  CHECK(plan->stairs_only_total_s == 17.0);

  plan = plan_route(query({"A", 1}, {"A", 2}), g, context({{{"A", Direction::Up}, 9.0}}, {}));
  REQUIRE(plan);
  CHECK(plan->total_s == 14.0);
  CHECK_FALSE(plan->stairs_advisory);  // 17 > 14 * 1.15
}

TEST_CASE("equal costs prefer fewer legs, then stairs") {
  // Stairs 1->2->3 at 10 s each, escalator 1->3 at 10 s/level: both 20 s.
  const auto site =
      SiteConfig::make({{"A", 1, 3}}, {}, {{"A", 1, 3, Direction::Up, 10.0}}, {{"A", 1, 3, 10.0}}).value();
  auto plan = plan_route(query({"A", 1}, {"A", 3}), build_graph(site), all_working());
  REQUIRE(plan);
  CHECK(plan->total_s == 20.0);
  REQUIRE(plan->legs.size() == 2);
  CHECK(plan->legs[0].mode == TransportMode::Stairs);
  CHECK(plan->legs[1].mode == TransportMode::Stairs);
}

TEST_CASE("plans are deterministic") {
  const auto g = build_graph(fixture_site());
  const auto ctx = all_working();
  auto a = plan_route(query({"B8", 2}, {"B12", 7}), g, ctx);
  auto b = plan_route(query({"B8", 2}, {"B12", 7}), build_graph(fixture_site()), ctx);
  REQUIRE(a);
  REQUIRE(b);
  REQUIRE(a->legs.size() == b->legs.size());
  for (std::size_t i = 0; i < a->legs.size(); ++i) {
    CHECK(a->legs[i].mode == b->legs[i].mode);
    CHECK(a->legs[i].from == b->legs[i].from);
    CHECK(a->legs[i].to == b->legs[i].to);
    CHECK(a->legs[i].lift == b->legs[i].lift);
  }
  CHECK(a->total_s == b->total_s);
}

TEST_CASE("random topologies agree with exhaustive search") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 40; ++round) {
    const auto topo = random_topology(rng, 24, 3);
    const auto g = build_graph(topo.site);
    const auto ctx = context(topo.mean_wait, topo.broken);
    oracle::RouteWorld world{&topo.site, {}, topo.mean_wait, topo.broken};
    for (int q = 0; q < 10; ++q) {
      const auto& from = g.nodes()[rng() % g.nodes().size()];
      const auto& to = g.nodes()[rng() % g.nodes().size()];
      const auto expected = oracle::best_route_cost(world, from, to);
      const auto plan = plan_route(query(from, to), g, ctx);
      REQUIRE(plan.ok() == expected.has_value());
      if (!expected) {
        CHECK(plan.error().code == ErrorCode::NoRoute);
        continue;
      }
      CHECK(plan->total_s == doctest::Approx(*expected).epsilon(1e-9));
      CHECK(plan->total_s == doctest::Approx(leg_sum(*plan)));
      const auto stairs = oracle::best_route_cost(world, from, to, true);
      if (plan->stairs_only_total_s) {
        REQUIRE(stairs);
        CHECK(*plan->stairs_only_total_s == doctest::Approx(*stairs));
        CHECK(plan->stairs_advisory == (*stairs <= *expected * 1.15 + 1e-9));
      }
    }
  }
}
