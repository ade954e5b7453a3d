#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "vt/event_codec.hpp"
#include "vt/simulator.hpp"
#include "vt/store.hpp"

using namespace vt;
using namespace vt::testing;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.site = fixture_site();
  c.start = day0() + Seconds{8 * 3600};
  c.duration = Seconds{3 * 3600};
  c.seed = 99;
  c.default_up = HourlyRates::constant(4.0);
  c.default_down = HourlyRates::constant(3.0);
  c.faults.push_back({lift("B8-L2"), OperationMode::OutOfService, c.start + Seconds{1800}, Seconds{2400}});
  c.faults.push_back({lift("B10-L1"), OperationMode::InMaintenance, c.start + Seconds{600}, Seconds{1200}});
  c.emergencies.push_back({lift("B12-L1"), c.start + Seconds{5000}});
  return c;
}

std::string describe(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) out += p + "\n";
  return out;
}

}  // namespace

TEST_CASE("the fixture configuration loads and validates") {
  auto c = load_sim_config(fixture_dir() / "sim.json");
  REQUIRE(c);
  CHECK_FALSE(validate_sim_config(*c));
  CHECK(c->duration == Seconds{86400});
  CHECK(c->site.lifts().size() == 6);
  CHECK(c->faults.size() == 2);
}

TEST_CASE("same seed, same events") {
  const auto c = small_config();
  auto a = simulate(c);
  auto b = simulate(c);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == *b);
  auto other = c;
  other.seed = 100;
  auto d = simulate(other);
  REQUIRE(d);
  CHECK(*d != *a);
}

TEST_CASE("run invariants") {
  const auto c = small_config();
  auto events = simulate(c);
  REQUIRE(events);
  CHECK(events->size() > 100);
  const auto problems = sim_violations(c, *events);
  CHECK_MESSAGE(problems.empty(), describe(problems));
}

TEST_CASE("random configurations keep the invariants") {
  const auto site = fixture_site();
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 15; ++i) {
    const auto c = random_sim_config(rng, site, 4);
    REQUIRE_FALSE(validate_sim_config(c));
    auto events = simulate(c);
    REQUIRE(events);
    const auto problems = sim_violations(c, *events);
    CHECK_MESSAGE(problems.empty(), describe(problems));
  }
}

TEST_CASE("a fault on the only lift holds calls until it recovers") {
  auto c = small_config();
  c.faults = {{lift("B10-L1"), OperationMode::OutOfService, c.start + Seconds{600}, Seconds{3600}}};
  c.emergencies.clear();
  auto events = simulate(c);
  REQUIRE(events);
  const auto recovery = c.start + Seconds{4200};
  bool waited = false;
  for (const auto& e : *events) {
    if (e.lift() != lift("B10-L1") || e.event_type() != EventType::HallCallServed) continue;
    if (e.occurred_at() >= recovery && e.occurred_at() - Seconds{*e.wait_time_s()} < recovery) waited = true;
  }
  CHECK(waited);
  CHECK(sim_violations(c, *events).empty());
}

TEST_CASE("zero rates produce only heartbeats, faults and emergencies") {
  auto c = small_config();
  c.default_up = HourlyRates::constant(0.0);
  c.default_down = HourlyRates::constant(0.0);
  auto events = simulate(c);
  REQUIRE(events);
  std::size_t heartbeats = 0;
  for (const auto& e : *events) {
    CHECK_FALSE(is_hall_call(e.event_type()));
    if (e.event_type() == EventType::Heartbeat) ++heartbeats;
  }
  CHECK(heartbeats > 0);
}

TEST_CASE("output round-trips through the wire format and the store") {
  const auto c = small_config();
  auto events = simulate(c);
  REQUIRE(events);
  std::ostringstream out;
  write_sim_output(c, *events, out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == sim_header(c));
  CHECK(line == "# vt-sim seed=99 start=2026-03-02T08:00:00Z duration_s=10800");
  std::vector<LiftEvent> parsed;
  while (std::getline(in, line)) {
    auto e = parse_event_line(line, c.site);
    REQUIRE(e);
    parsed.push_back(*e);
  }
  CHECK(parsed == *events);

  TempDir dir;
  {
    EventStore store(c.site, dir.path());
    store.append_events(parsed);
  }
  EventStore reopened(c.site, dir.path());
  std::vector<LiftEvent> stored;
  for (const auto& s : reopened.all_events()) stored.push_back(s.event);
  CHECK(stored == *events);
}

TEST_CASE("nearest-car dispatch") {
  std::vector<CarCandidate> cars{{lift("B8-L1"), 7, true, true}, {lift("B8-L2"), 3, true, true}};
  CHECK(dispatch_nearest(cars, 4) == lift("B8-L2"));
  CHECK(dispatch_nearest(cars, 6) == lift("B8-L1"));
  CHECK(dispatch_nearest(cars, 5) == lift("B8-L1"));  // tie
  cars[1].working = false;
  CHECK(dispatch_nearest(cars, 4) == lift("B8-L1"));
  cars[0].serves_call_floor = false;
  CHECK_FALSE(dispatch_nearest(cars, 4));
  CHECK_FALSE(dispatch_nearest({}, 1));
}

TEST_CASE("invalid configurations") {
  auto check = [](SimConfig c) {
    auto err = validate_sim_config(c);
    REQUIRE(err);
    CHECK(err->code == ErrorCode::InvalidConfig);
    auto run = simulate(c);
    REQUIRE_FALSE(run);
    CHECK(run.error().code == ErrorCode::InvalidConfig);
  };
  auto c = small_config();
  c.duration = Seconds{0};
  check(c);
  c = small_config();
  c.default_up.per_hour[3] = -1.0;
  check(c);
  c = small_config();
  c.faults.push_back({lift("B8-L2"), OperationMode::InMaintenance, c.start + Seconds{2000}, Seconds{60}});
  check(c);
  c = small_config();
  c.faults[0].mode = OperationMode::Normal;
  check(c);
  c = small_config();
  c.emergencies.push_back({lift("B8-L1"), c.end()});
  check(c);
  c = small_config();
  c.faults.push_back({LiftId::make("B8", 7).value(), OperationMode::OutOfService, c.start, Seconds{10}});
  check(c);
}

TEST_CASE("config documents") {
  const std::string doc = R"({
    "site": "site.json",
    "start": "2026-03-02T00:00:00Z",
    "duration_s": 3600,
    "seed": 5,
    "default_rates": {"up": 2, "down": 1}
  })";
  auto c = parse_sim_config(doc, fixture_dir());
  REQUIRE(c);
  CHECK(c->seed == 5);
  CHECK(c->default_up.at(0) == 2.0);
  auto bad = parse_sim_config(R"({"site": "site.json"})", fixture_dir());
  REQUIRE_FALSE(bad);
  CHECK(bad.error().code == ErrorCode::InvalidConfig);
}
