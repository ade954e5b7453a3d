#include "vt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"
#include "vt/event_codec.hpp"

namespace vt {

using nlohmann::json;

HourlyRates HourlyRates::constant(double calls_per_hour) {
  HourlyRates r;
  r.per_hour.fill(calls_per_hour);
  return r;
}

bool HourlyRates::all_zero() const {
  return std::all_of(per_hour.begin(), per_hour.end(), [](double v) { return v == 0.0; });
}

namespace {

Error invalid(std::string msg) { return make_error(ErrorCode::InvalidConfig, std::move(msg)); }

std::optional<Error> check_rates(const HourlyRates& r, const std::string& what) {
  for (double v : r.per_hour) {
    if (!std::isfinite(v) || v < 0.0) return invalid(what + ": arrival rates must be finite and >= 0");
  }
  return std::nullopt;
}

}  // namespace

std::optional<Error> validate_sim_config(const SimConfig& c) {
  if (c.duration.count() <= 0) return invalid("duration_s must be > 0");
  if (c.heartbeat_interval.count() <= 0) return invalid("heartbeat_interval_s must be > 0");
  if (c.kinematics && (!(c.kinematics->s_per_level > 0.0) || c.kinematics->door_dwell_s < 0.0)) {
    return invalid("kinematics must have s_per_level > 0 and door_dwell_s >= 0");
  }
  if (auto e = check_rates(c.default_up, "default up")) return e;
  if (auto e = check_rates(c.default_down, "default down")) return e;
  for (const auto& r : c.arrival_rates) {
    const std::string where = r.building + " level " + std::to_string(r.level);
    if (auto e = check_rates(r.up, where)) return e;
    if (auto e = check_rates(r.down, where)) return e;
    bool served = false;
    for (const auto* lift : c.site.lifts_in(r.building)) served = served || lift->serves(r.level);
    if (!served) return invalid("arrival rates for " + where + ", which no lift serves");
  }
  std::map<LiftId, std::vector<std::pair<Timestamp, Timestamp>>> per_lift;
  for (const auto& f : c.faults) {
    if (!c.site.find_lift(f.lift)) return invalid("fault for unknown lift " + f.lift.str());
    if (f.mode != OperationMode::OutOfService && f.mode != OperationMode::InMaintenance) {
      return invalid("fault mode must be out_of_service or in_maintenance");
    }
    if (f.duration.count() <= 0) return invalid("fault duration must be > 0");
    if (f.start < c.start || f.start + f.duration > c.end()) {
      return invalid("fault for " + f.lift.str() + " lies outside the simulated period");
    }
    per_lift[f.lift].emplace_back(f.start, f.start + f.duration);
  }
  for (auto& [lift, spans] : per_lift) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first < spans[i - 1].second) return invalid("overlapping faults for " + lift.str());
    }
  }
  for (const auto& e : c.emergencies) {
    if (!c.site.find_lift(e.lift)) return invalid("emergency for unknown lift " + e.lift.str());
    if (e.at < c.start || e.at >= c.end()) return invalid("emergency outside the simulated period");
  }
  return std::nullopt;
}

namespace {

HourlyRates parse_rates(const json& j) {
  if (j.is_number()) return HourlyRates::constant(j.get<double>());
  const auto values = j.get<std::vector<double>>();
  if (values.size() != 24) throw std::invalid_argument("hourly rates need 24 values");
  HourlyRates r;
  std::copy(values.begin(), values.end(), r.per_hour.begin());
  return r;
}

Timestamp parse_ts(const json& j) {
  auto ts = parse_timestamp(j.get<std::string>());
  if (!ts) throw std::invalid_argument("bad timestamp " + j.get<std::string>());
  return *ts;
}

LiftId parse_lift(const json& j) {
  auto id = LiftId::parse(j.get<std::string>());
  if (!id) throw std::invalid_argument(id.error().message);
  return id.value();
}

}  // namespace

Result<SimConfig> parse_sim_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  try {
    const json doc = json::parse(json_text);
    SimConfig c;
    const auto& site = doc.at("site");
    auto parsed_site = site.is_string() ? SiteConfig::load(base_dir / site.get<std::string>())
                                        : SiteConfig::parse(site.dump());
    if (!parsed_site) return parsed_site.error();
    c.site = std::move(parsed_site).value();
    c.start = parse_ts(doc.at("start"));
    c.duration = Seconds{doc.at("duration_s").get<std::int64_t>()};
    c.seed = doc.value("seed", std::uint64_t{0});
    c.heartbeat_interval = Seconds{doc.value("heartbeat_interval_s", std::int64_t{300})};
    if (doc.contains("kinematics")) {
      const auto& k = doc.at("kinematics");
      c.kinematics = LiftKinematics{k.at("s_per_level").get<double>(), k.at("door_dwell_s").get<double>()};
    }
    if (doc.contains("default_rates")) {
      const auto& d = doc.at("default_rates");
      if (d.contains("up")) c.default_up = parse_rates(d.at("up"));
      if (d.contains("down")) c.default_down = parse_rates(d.at("down"));
    }
    for (const auto& r : doc.value("arrival_rates", json::array())) {
      FloorArrivalRates f;
      f.building = r.at("building").get<std::string>();
      f.level = r.at("level").get<int>();
      if (r.contains("up")) f.up = parse_rates(r.at("up"));
      if (r.contains("down")) f.down = parse_rates(r.at("down"));
      c.arrival_rates.push_back(std::move(f));
    }
    for (const auto& f : doc.value("faults", json::array())) {
      auto mode = parse_mode(f.at("mode").get<std::string>());
      if (!mode) return invalid("unknown fault mode");
      c.faults.push_back({parse_lift(f.at("lift")), *mode, parse_ts(f.at("start")),
                          Seconds{f.at("duration_s").get<std::int64_t>()}});
    }
    for (const auto& e : doc.value("emergencies", json::array())) {
      c.emergencies.push_back({parse_lift(e.at("lift")), parse_ts(e.at("at"))});
    }
    if (auto err = validate_sim_config(c)) return *err;
    return c;
  } catch (const std::exception& e) {
    return invalid(std::string("simulation config: ") + e.what());
  }
}

Result<SimConfig> load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return invalid("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str(), path.parent_path());
}

std::optional<LiftId> dispatch_nearest(std::span<const CarCandidate> cars, int call_floor) {
  const CarCandidate* best = nullptr;
  for (const auto& car : cars) {
    if (!car.working || !car.serves_call_floor) continue;
    if (!best) {
      best = &car;
      continue;
    }
    const int d = std::abs(car.floor - call_floor);
    const int bd = std::abs(best->floor - call_floor);
    if (d < bd || (d == bd && car.lift < best->lift)) best = &car;
  }
  if (!best) return std::nullopt;
  return best->lift;
}

std::string sim_header(const SimConfig& config) {
  return "# vt-sim seed=" + std::to_string(config.seed) + " start=" + format_timestamp(config.start) +
         " duration_s=" + std::to_string(config.duration.count());
}

void write_sim_output(const SimConfig& config, std::span<const LiftEvent> events, std::ostream& out) {
  out << sim_header(config) << '\n';
  for (const auto& e : events) out << encode_event(e) << '\n';
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Call {
  std::uint64_t id = 0;
  std::string building;
  int floor = 0;
  Direction direction = Direction::Up;
  Timestamp registered;
  bool announced = false;  // HallCallRegistered already emitted
};

enum class Step { PickupArrive, PickupDoorClose, DeliverArrive, DeliverDoorClose };

struct Car {
  const LiftSpec* spec = nullptr;
  double s_per_level = 0.0;
  double dwell_s = 0.0;
  int floor = 0;
  bool in_fault = false;
  OperationMode mode = OperationMode::Normal;
  DoorStatus door = DoorStatus::Closed;
  bool busy = false;
  std::uint64_t epoch = 0;
  std::deque<Call> queue;
  std::optional<Call> current;
  int deliver_to = 0;
  Direction travel = Direction::None;
  Direction pickup_direction = Direction::None;
};

struct Stream {
  std::string building;
  int floor = 0;
  Direction direction = Direction::Up;
  HourlyRates rates;
  std::mt19937_64 rng;
  double t = 0.0;  // seconds since simulation start
};

// Same-second ordering: recoveries before new faults, faults before anything
// the lift itself would do.
enum class Kind { FaultEnd = 0, FaultStart = 1, Emergency = 2, Arrival = 3, CarStep = 4, Heartbeat = 5 };

struct Pending {
  Timestamp t;
  Kind kind;
  std::uint64_t seq;
  std::size_t index = 0;  // car, stream, fault or emergency index
  Step step = Step::PickupArrive;
  std::uint64_t epoch = 0;

  bool operator>(const Pending& o) const { return std::tie(t, kind, seq) > std::tie(o.t, o.kind, o.seq); }
};

class Engine {
 public:
  explicit Engine(const SimConfig& config) : c_(config), dest_rng_(splitmix64(config.seed ^ 0xd1b54a32d192ed03ULL)) {}

  std::vector<LiftEvent> run() {
    setup();
    while (!queue_.empty()) {
      Pending p = queue_.top();
      queue_.pop();
      now_ = p.t;
      switch (p.kind) {
        case Kind::FaultEnd: fault_end(p.index); break;
        case Kind::FaultStart: fault_start(p.index); break;
        case Kind::Emergency: emergency(p.index); break;
        case Kind::Arrival: arrival(p.index); break;
        case Kind::CarStep: car_step(p.index, p.step, p.epoch); break;
        case Kind::Heartbeat: heartbeat(); break;
      }
    }
    std::stable_sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) {
      return std::tie(a.first.occurred_at, a.second) < std::tie(b.first.occurred_at, b.second);
    });
    std::vector<LiftEvent> events;
    events.reserve(out_.size());
    for (const auto& [candidate, seq] : out_) events.push_back(validate_event(candidate, c_.site).value());
    return events;
  }

 private:
  void schedule(Timestamp t, Kind kind, std::size_t index, Step step = Step::PickupArrive, std::uint64_t epoch = 0) {
    queue_.push(Pending{t, kind, next_seq_++, index, step, epoch});
  }

  void setup() {
    for (const auto& spec : c_.site.lifts()) {
      Car car;
      car.spec = &spec;
      car.s_per_level = c_.kinematics ? c_.kinematics->s_per_level : spec.travel_s_per_level;
      car.dwell_s = c_.kinematics ? c_.kinematics->door_dwell_s : spec.door_dwell_s;
      car.floor = spec.served_levels.front();
      cars_.push_back(std::move(car));
    }
    std::map<std::pair<std::string, int>, const FloorArrivalRates*> explicit_rates;
    for (const auto& r : c_.arrival_rates) explicit_rates[{r.building, r.level}] = &r;

    for (const auto& b : c_.site.buildings()) {
      for (int level = b.min_level; level <= b.max_level; ++level) {
        bool served = false, above = false, below = false;
        for (const auto* lift : c_.site.lifts_in(b.code)) {
          if (!lift->serves(level)) continue;
          served = true;
          above = above || lift->served_levels.back() > level;
          below = below || lift->served_levels.front() < level;
        }
        if (!served) continue;
        auto it = explicit_rates.find({b.code, level});
        const HourlyRates& up = it != explicit_rates.end() ? it->second->up : c_.default_up;
        const HourlyRates& down = it != explicit_rates.end() ? it->second->down : c_.default_down;
        if (above && !up.all_zero()) add_stream(b.code, level, Direction::Up, up);
        if (below && !down.all_zero()) add_stream(b.code, level, Direction::Down, down);
      }
    }
    for (std::size_t i = 0; i < streams_.size(); ++i) schedule_arrival(i);
    for (std::size_t i = 0; i < c_.faults.size(); ++i) {
      schedule(c_.faults[i].start, Kind::FaultStart, i);
      schedule(c_.faults[i].start + c_.faults[i].duration, Kind::FaultEnd, i);
    }
    for (std::size_t i = 0; i < c_.emergencies.size(); ++i) schedule(c_.emergencies[i].at, Kind::Emergency, i);
    schedule(c_.start, Kind::Heartbeat, 0);
  }

  void add_stream(const std::string& building, int level, Direction d, const HourlyRates& rates) {
    const std::uint64_t stream_seed = splitmix64(c_.seed + 0x632be59bd9b4e019ULL * (streams_.size() + 1));
    streams_.push_back(Stream{building, level, d, rates, std::mt19937_64(stream_seed), 0.0});
  }

  // Inversion of the cumulative intensity: draw a unit exponential and walk
  // the hourly rate segments until it is used up.
  void schedule_arrival(std::size_t index) {
    auto& s = streams_[index];
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double remaining = -std::log1p(-unit(s.rng));
    const double horizon = static_cast<double>(c_.duration.count());
    const double epoch_start = static_cast<double>(c_.start.time_since_epoch().count());
    while (s.t < horizon) {
      const double abs = epoch_start + s.t;
      const double boundary = (std::floor(abs / 3600.0) + 1.0) * 3600.0 - epoch_start;
      const double seg_end = std::min(boundary, horizon);
      const int hour = utc_hour(Timestamp{Seconds{static_cast<std::int64_t>(std::floor(abs))}});
      const double lambda = s.rates.at(hour) / 3600.0;
      const double mass = lambda * (seg_end - s.t);
      if (lambda > 0.0 && remaining <= mass) {
        s.t += remaining / lambda;
        if (s.t >= horizon) return;
        schedule(c_.start + Seconds{static_cast<std::int64_t>(std::floor(s.t))}, Kind::Arrival, index);
        return;
      }
      remaining -= mass;
      s.t = seg_end;
    }
  }

  OperationMode scheduled_mode(std::size_t car_index, Timestamp t) const {
    const auto& id = cars_[car_index].spec->id;
    for (const auto& f : c_.faults) {
      if (f.lift == id && t >= f.start && t < f.start + f.duration) return f.mode;
    }
    return OperationMode::Normal;
  }

  void emit(std::size_t car_index, EventType type, int floor, Direction d, DoorStatus door,
            std::optional<std::int64_t> wait = std::nullopt, std::optional<Timestamp> at = std::nullopt,
            std::optional<OperationMode> mode = std::nullopt) {
    const auto& car = cars_[car_index];
    EventCandidate e;
    e.building = car.spec->id.building();
    e.unit = car.spec->id.unit();
    e.occurred_at = at.value_or(now_);
    e.direction = d;
    e.wait_time_s = wait;
    e.operation_mode = mode.value_or(car.mode);
    e.event_type = type;
    e.floor_position = floor;
    e.door_status = door;
    out_.emplace_back(std::move(e), out_.size());
  }

  Seconds ride(const Car& car, int from, int to) const {
    return Seconds{std::llround(std::abs(to - from) * car.s_per_level)};
  }

  std::optional<std::size_t> dispatch(const Call& call, std::optional<std::size_t> exclude = std::nullopt) {
    std::vector<CarCandidate> candidates;
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < cars_.size(); ++i) {
      const auto& car = cars_[i];
      if (car.spec->id.building() != call.building) continue;
      const auto& levels = car.spec->served_levels;
      const bool onward = call.direction == Direction::Up ? levels.back() > call.floor : levels.front() < call.floor;
      candidates.push_back(
          {car.spec->id, car.floor, !car.in_fault && exclude != i, car.spec->serves(call.floor) && onward});
      indices.push_back(i);
    }
    auto chosen = dispatch_nearest(candidates, call.floor);
    if (!chosen) return std::nullopt;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (candidates[k].lift == *chosen) return indices[k];
    }
    return std::nullopt;
  }

  void assign(Call call, std::size_t car_index) {
    if (!call.announced) {
      // Attributed to the lift that will serve it, stamped with the time the button was pressed.
      emit(car_index, EventType::HallCallRegistered, call.floor, call.direction, DoorStatus::Closed,
           std::nullopt, call.registered, scheduled_mode(car_index, call.registered));
      call.announced = true;
    }
    cars_[car_index].queue.push_back(std::move(call));
    start_next(car_index);
  }

  void route_or_hold(Call call, std::optional<std::size_t> exclude = std::nullopt) {
    if (auto car = dispatch(call, exclude)) {
      assign(std::move(call), *car);
    } else {
      held_[call.building].push_back(std::move(call));
    }
  }

  void start_next(std::size_t i) {
    auto& car = cars_[i];
    if (car.busy || car.in_fault || car.queue.empty()) return;
    car.current = std::move(car.queue.front());
    car.queue.pop_front();
    car.busy = true;
    const int target = car.current->floor;
    car.travel = target > car.floor ? Direction::Up : (target < car.floor ? Direction::Down : Direction::None);
    schedule(now_ + ride(car, car.floor, target), Kind::CarStep, i, Step::PickupArrive, car.epoch);
  }

  void car_step(std::size_t i, Step step, std::uint64_t epoch) {
    auto& car = cars_[i];
    if (epoch != car.epoch || car.in_fault) return;
    switch (step) {
      case Step::PickupArrive: {
        const Call& call = *car.current;
        car.floor = call.floor;
        emit(i, EventType::CarArrival, car.floor, car.travel, DoorStatus::Closed);
        emit(i, EventType::HallCallServed, car.floor, call.direction, DoorStatus::Opening,
             (now_ - call.registered).count());
        car.pickup_direction = call.direction;
        car.current.reset();
        car.door = DoorStatus::Open;
        emit(i, EventType::DoorOpen, car.floor, Direction::None, DoorStatus::Open);
        schedule(now_ + Seconds{std::llround(car.dwell_s)}, Kind::CarStep, i, Step::PickupDoorClose, car.epoch);
        break;
      }
      case Step::PickupDoorClose: {
        car.door = DoorStatus::Closed;
        emit(i, EventType::DoorClose, car.floor, Direction::None, DoorStatus::Closed);
        const Direction d = car.pickup_direction;
        std::vector<int> options;
        for (int level : car.spec->served_levels) {
          if ((d == Direction::Up && level > car.floor) || (d == Direction::Down && level < car.floor)) {
            options.push_back(level);
          }
        }
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        car.deliver_to = options[pick(dest_rng_)];
        car.travel = d;
        schedule(now_ + ride(car, car.floor, car.deliver_to), Kind::CarStep, i, Step::DeliverArrive, car.epoch);
        break;
      }
      case Step::DeliverArrive:
        car.floor = car.deliver_to;
        emit(i, EventType::CarArrival, car.floor, car.travel, DoorStatus::Closed);
        car.door = DoorStatus::Open;
        emit(i, EventType::DoorOpen, car.floor, Direction::None, DoorStatus::Open);
        schedule(now_ + Seconds{std::llround(car.dwell_s)}, Kind::CarStep, i, Step::DeliverDoorClose, car.epoch);
        break;
      case Step::DeliverDoorClose:
        car.door = DoorStatus::Closed;
        emit(i, EventType::DoorClose, car.floor, Direction::None, DoorStatus::Closed);
        car.busy = false;
        car.travel = Direction::None;
        start_next(i);
        break;
    }
  }

  std::size_t car_index(const LiftId& id) const {
    for (std::size_t i = 0; i < cars_.size(); ++i) {
      if (cars_[i].spec->id == id) return i;
    }
    return cars_.size();
  }

  void fault_start(std::size_t fault_index) {
    const auto& fault = c_.faults[fault_index];
    const auto i = car_index(fault.lift);
    auto& car = cars_[i];
    ++car.epoch;
    car.in_fault = true;
    car.mode = fault.mode;
    car.door = DoorStatus::Closed;
    car.busy = false;
    car.travel = Direction::None;
    emit(i, EventType::ModeChange, car.floor, Direction::None, DoorStatus::Closed);

    std::deque<Call> orphaned;
    if (car.current) orphaned.push_back(std::move(*car.current));
    car.current.reset();
    for (auto& call : car.queue) orphaned.push_back(std::move(call));
    car.queue.clear();
    for (auto& call : orphaned) route_or_hold(std::move(call), i);
  }

  void fault_end(std::size_t fault_index) {
    const auto& fault = c_.faults[fault_index];
    const auto i = car_index(fault.lift);
    auto& car = cars_[i];
    car.in_fault = false;
    car.mode = OperationMode::Normal;
    emit(i, EventType::ModeChange, car.floor, Direction::None, DoorStatus::Closed);

    const auto building = car.spec->id.building();
    std::deque<Call> held;
    held.swap(held_[building]);
    for (auto& call : held) route_or_hold(std::move(call));
    for (std::size_t k = 0; k < cars_.size(); ++k) start_next(k);
  }

  void emergency(std::size_t index) {
    const auto i = car_index(c_.emergencies[index].lift);
    emit(i, EventType::Emergency, cars_[i].floor, Direction::None, cars_[i].door);
  }

  void arrival(std::size_t index) {
    const auto& s = streams_[index];
    Call call{next_call_++, s.building, s.floor, s.direction, now_, false};
    if (auto car = dispatch(call)) {
      emit(*car, EventType::HallCallRegistered, call.floor, call.direction, DoorStatus::Closed);
      call.announced = true;
      assign(std::move(call), *car);
    } else {
      held_[call.building].push_back(std::move(call));
    }
    schedule_arrival(index);
  }

  void heartbeat() {
    for (std::size_t i = 0; i < cars_.size(); ++i) {
      if (!cars_[i].in_fault) emit(i, EventType::Heartbeat, cars_[i].floor, Direction::None, cars_[i].door);
    }
    const auto next = now_ + c_.heartbeat_interval;
    if (next < c_.end()) schedule(next, Kind::Heartbeat, 0);
  }

  const SimConfig& c_;
  std::mt19937_64 dest_rng_;
  std::vector<Car> cars_;
  std::vector<Stream> streams_;
  std::map<std::string, std::deque<Call>> held_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::vector<std::pair<EventCandidate, std::size_t>> out_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_call_ = 0;
  Timestamp now_{};
};

}  // namespace

Result<std::vector<LiftEvent>> simulate(const SimConfig& config) {
  if (auto err = validate_sim_config(config)) return *err;
  Engine engine(config);
  return engine.run();
}

}  // namespace vt
