#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vt::testing {

std::filesystem::path fixture_dir() { return VT_FIXTURE_DIR; }

SiteConfig fixture_site() {
  auto site = SiteConfig::load(fixture_dir() / "site.json");
  if (!site) throw std::runtime_error("fixture site: " + site.error().describe());
  return std::move(site).value();
}

Timestamp ts(std::string_view text) {
  auto t = parse_timestamp(text);
  if (!t) throw std::runtime_error("bad timestamp in test: " + std::string(text));
  return *t;
}

Timestamp day0() { return ts("2026-03-02T00:00:00Z"); }

LiftId lift(std::string_view text) {
  auto id = LiftId::parse(text);
  if (!id) throw std::runtime_error("bad lift id in test: " + std::string(text));
  return id.value();
}

TimeWindow window(Timestamp start, Timestamp end) { return TimeWindow::make(start, end).value(); }

LiftEvent make_event(const SiteConfig& site, const EventSpec& spec) {
  const auto id = lift(spec.lift);
  EventCandidate c;
  c.building = id.building();
  c.unit = id.unit();
  c.occurred_at = spec.at;
  c.direction = spec.direction;
  c.wait_time_s = spec.wait;
  c.operation_mode = spec.mode;
  c.event_type = spec.type;
  c.floor_position = spec.floor;
  c.door_status = spec.door;
  auto e = validate_event(c, site);
  if (!e) throw std::runtime_error("invalid test event: " + e.error().describe());
  return std::move(e).value();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TempDir::TempDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("vt-test-" + std::to_string(rd()) + std::to_string(attempt));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

SimConfig random_sim_config(std::mt19937_64& rng, const SiteConfig& site, int max_hours) {
  SimConfig c;
  c.site = site;
  std::uniform_int_distribution<int> start_hour(0, 23);
  std::uniform_int_distribution<int> hours(1, max_hours);
  c.start = day0() + Seconds{3600 * start_hour(rng)};
  c.duration = Seconds{3600 * hours(rng)};
  c.seed = rng();
  std::uniform_real_distribution<double> rate(0.0, 6.0);
  for (int h = 0; h < 24; ++h) {
    c.default_up.per_hour[h] = rate(rng);
    c.default_down.per_hour[h] = rate(rng);
  }
  const auto lifts = site.lift_ids();
  std::uniform_int_distribution<std::size_t> pick_lift(0, lifts.size() - 1);
  std::uniform_int_distribution<std::int64_t> offset(0, c.duration.count() - 1);
  std::uniform_int_distribution<int> count(0, 3);
  std::bernoulli_distribution maintenance(0.4);
  std::uniform_int_distribution<std::int64_t> fault_len(60, 3 * 3600);
  const int faults = count(rng);
  for (int i = 0; i < faults; ++i) {
    const auto id = lifts[pick_lift(rng)];
    const auto start = c.start + Seconds{offset(rng)};
    const auto len = std::min(Seconds{fault_len(rng)}, c.end() - start);
    if (len.count() <= 0) continue;
    bool overlaps = false;
    for (const auto& f : c.faults) {
      if (f.lift == id && start < f.start + f.duration + Seconds{1} && f.start < start + len + Seconds{1}) {
        overlaps = true;
      }
    }
    if (overlaps) continue;
    c.faults.push_back({id, maintenance(rng) ? OperationMode::InMaintenance : OperationMode::OutOfService, start, len});
  }
  const int emergencies = count(rng);
  for (int i = 0; i < emergencies; ++i) c.emergencies.push_back({lifts[pick_lift(rng)], c.start + Seconds{offset(rng)}});
  return c;
}

std::vector<std::string> sim_violations(const SimConfig& config, const std::vector<LiftEvent>& events) {
  std::vector<std::string> out;
  auto where = [](const LiftEvent& e) { return e.lift().str() + " at " + format_timestamp(e.occurred_at()); };
  using CallKey = std::tuple<std::string, int, Direction, Timestamp>;
  std::multiset<CallKey> registered;
  std::multiset<CallKey> served;
  std::multiset<std::pair<LiftId, Timestamp>> emergencies;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (i > 0 && e.occurred_at() < events[i - 1].occurred_at()) out.push_back("out of order: " + where(e));
    if (e.occurred_at() < config.start) out.push_back("before the start: " + where(e));
    switch (e.event_type()) {
      case EventType::HallCallRegistered:
        if (e.occurred_at() >= config.end()) out.push_back("call registered after the end: " + where(e));
        registered.insert({e.lift().building(), e.floor_position(), e.direction(), e.occurred_at()});
        break;
      case EventType::HallCallServed:
        served.insert({e.lift().building(), e.floor_position(), e.direction(),
                       e.occurred_at() - Seconds{*e.wait_time_s()}});
        break;
      case EventType::Emergency: emergencies.insert({e.lift(), e.occurred_at()}); break;
      default: break;
    }
    for (const auto& f : config.faults) {
      if (e.lift() != f.lift) continue;
      const auto end = f.start + f.duration;
      if (e.event_type() == EventType::ModeChange) {
        if (e.occurred_at() == f.start && e.operation_mode() != f.mode) out.push_back("wrong fault mode: " + where(e));
        if (e.occurred_at() == end && e.operation_mode() != OperationMode::Normal) {
          out.push_back("fault did not end in normal mode: " + where(e));
        }
        continue;
      }
      if (e.occurred_at() > f.start && e.occurred_at() < end && e.event_type() != EventType::HallCallRegistered &&
          e.event_type() != EventType::Emergency) {
        out.push_back("event during a fault: " + where(e));
      }
    }
  }
  if (registered != served) {
    out.push_back("registered and served calls differ: " + std::to_string(registered.size()) + " vs " +
                  std::to_string(served.size()));
  }
  std::multiset<std::pair<LiftId, Timestamp>> scheduled;
  for (const auto& em : config.emergencies) scheduled.insert({em.lift, em.at});
  if (scheduled != emergencies) out.push_back("emergencies differ from the schedule");
  for (const auto& f : config.faults) {
    int changes = 0;
    for (const auto& e : events) {
      if (e.lift() == f.lift && e.event_type() == EventType::ModeChange &&
          (e.occurred_at() == f.start || e.occurred_at() == f.start + f.duration)) {
        ++changes;
      }
    }
    if (changes != 2) out.push_back("fault on " + f.lift.str() + " not bracketed by two mode changes");
  }
  return out;
}

RandomTopology random_topology(std::mt19937_64& rng, int max_nodes, int max_buildings) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto cost = [&](int lo, int hi) { return uniform(lo * 10, hi * 10) / 10.0; };
  for (;;) {
    const int count = uniform(1, max_buildings);
    std::vector<BuildingSpec> buildings;
    int budget = max_nodes;
    for (int i = 0; i < count && budget > 0; ++i) {
      const int levels = std::min(budget, uniform(1, std::max(1, max_nodes / count)));
      const int base = uniform(-1, 2);
      buildings.push_back({"B" + std::to_string(i + 1), base, base + levels - 1});
      budget -= levels;
    }
    std::vector<LiftSpec> lifts;
    std::vector<EscalatorSpec> escalators;
    std::vector<StairSpec> stairs;
    std::vector<BridgeSpec> bridges;
    RandomTopology out;
    for (const auto& b : buildings) {
      const int levels = b.max_level - b.min_level + 1;
      if (levels >= 2) {
        if (uniform(0, 3) > 0) {
          const int lo = uniform(b.min_level, b.max_level - 1);
          const int hi = uniform(lo + 1, b.max_level);
          std::optional<double> spl;
          if (uniform(0, 1)) spl = cost(5, 30);
          stairs.push_back({b.code, lo, hi, spl});
        }
        for (int e = uniform(0, 2); e > 0; --e) {
          const int lo = uniform(b.min_level, b.max_level - 1);
          const int hi = uniform(lo + 1, std::min(b.max_level, lo + 3));
          std::optional<double> spl;
          if (uniform(0, 1)) spl = cost(5, 40);
          escalators.push_back({b.code, lo, hi, uniform(0, 1) ? Direction::Up : Direction::Down, spl});
        }
        for (int unit = 1, n = uniform(0, 3); unit <= n; ++unit) {
          std::vector<int> served;
          for (int l = b.min_level; l <= b.max_level; ++l) {
            if (uniform(0, 2) > 0) served.push_back(l);
          }
          if (served.size() < 2) served = {b.min_level, b.max_level};
          auto id = LiftId::make(b.code, unit).value();
          lifts.push_back({id, served, cost(1, 8), cost(0, 15)});
          if (uniform(0, 4) == 0) out.broken.insert(id);
        }
        if (uniform(0, 2) > 0) out.mean_wait[{b.code, Direction::Up}] = cost(0, 120);
        if (uniform(0, 2) > 0) out.mean_wait[{b.code, Direction::Down}] = cost(0, 120);
      }
    }
    for (std::size_t i = 0; i + 1 < buildings.size(); ++i) {
      for (std::size_t j = i + 1; j < buildings.size(); ++j) {
        if (uniform(0, 2) == 0) continue;
        const auto& a = buildings[i];
        const auto& b = buildings[j];
        bridges.push_back({Place{a.code, uniform(a.min_level, a.max_level)},
                           Place{b.code, uniform(b.min_level, b.max_level)}, cost(10, 200)});
      }
    }
    auto site = SiteConfig::make(std::move(buildings), std::move(lifts), std::move(escalators), std::move(stairs),
                                 std::move(bridges));
    if (!site) continue;
    out.site = std::move(site).value();
    return out;
  }
}

}  // namespace vt::testing
