#include "vt/store.hpp"

#include <algorithm>
#include <mutex>

#include "json.hpp"
#include "vt/event_codec.hpp"

namespace vt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Error malformed(std::string msg) { return make_error(ErrorCode::MalformedPayload, std::move(msg)); }

template <class Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    if (std::filesystem::exists(path)) throw Failure(ErrorCode::StorageFailure, "cannot read " + path.string());
    return;
  }
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (is_skippable_line(line)) continue;
    fn(line, number);
  }
}

bool seq_less(const std::vector<StoredEvent>& events, std::uint64_t a, std::uint64_t b) {
  const auto& ea = events[a - 1].event;
  const auto& eb = events[b - 1].event;
  if (ea.occurred_at() != eb.occurred_at()) return ea.occurred_at() < eb.occurred_at();
  return a < b;
}

}  // namespace

std::string encode_transition(const StatusTransition& t) {
  ordered_json j;
  j["lift"] = t.lift().str();
  j["from_mode"] = mode_id(t.from_mode());
  j["to_mode"] = mode_id(t.to_mode());
  j["at"] = format_timestamp(t.at());
  j["source"] = to_string(t.source());
  return j.dump();
}

Result<StatusTransition> decode_transition(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return malformed("transition line is not an object");
  try {
    auto lift = LiftId::parse(j.at("lift").get<std::string>());
    auto from = mode_from_id(j.at("from_mode").get<int>());
    auto to = mode_from_id(j.at("to_mode").get<int>());
    auto at = parse_timestamp(j.at("at").get<std::string>());
    auto source = parse_transition_source(j.at("source").get<std::string>());
    if (!lift || !from || !to || !at || !source) return malformed("bad transition field");
    return StatusTransition::make(lift.value(), *from, *to, *at, *source);
  } catch (const json::exception& e) {
    return malformed(e.what());
  }
}

std::string encode_signin(const SignInRecord& r) {
  ordered_json j;
  j["user_id"] = r.user_id;
  j["at"] = format_timestamp(r.at);
  j["outcome"] = to_string(r.outcome);
  j["client_note"] = r.client_note;
  return j.dump();
}

Result<SignInRecord> decode_signin(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return malformed("sign-in line is not an object");
  try {
    auto at = parse_timestamp(j.at("at").get<std::string>());
    auto outcome = parse_signin_outcome(j.at("outcome").get<std::string>());
    if (!at || !outcome) return malformed("bad sign-in field");
    return SignInRecord{j.at("user_id").get<std::string>(), *at, *outcome,
                        j.value("client_note", std::string{})};
  } catch (const json::exception& e) {
    return malformed(e.what());
  }
}

std::string encode_user(const UserAccount& u) {
  ordered_json j;
  j["id"] = u.id;
  j["display_name"] = u.display_name;
  j["role"] = to_string(u.role);
  j["credential_hash"] = u.credential_hash;
  return j.dump();
}

Result<UserAccount> decode_user(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return malformed("user line is not an object");
  try {
    auto role = parse_role(j.at("role").get<std::string>());
    if (!role) return malformed("unknown role");
    return UserAccount{j.at("id").get<std::string>(), j.value("display_name", std::string{}), *role,
                       j.at("credential_hash").get<std::string>()};
  } catch (const json::exception& e) {
    return malformed(e.what());
  }
}

EventStore::EventStore(SiteConfig site, std::optional<std::filesystem::path> dir)
    : site_(std::move(site)), dir_(std::move(dir)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw Failure(ErrorCode::StorageFailure, "cannot create " + dir_->string() + ": " + ec.message());
    load();
    events_out_.reset(open_table(kEventsFile));
    signins_out_.reset(open_table(kSignInsFile));
    transitions_out_.reset(open_table(kTransitionsFile));
    users_out_.reset(open_table(kUsersFile));
  }
}

std::ofstream* EventStore::open_table(const char* name) {
  auto out = std::make_unique<std::ofstream>(*dir_ / name, std::ios::app | std::ios::binary);
  if (!*out) throw Failure(ErrorCode::StorageFailure, "cannot open " + (*dir_ / name).string());
  return out.release();
}

void EventStore::load() {
  auto fail = [](const std::filesystem::path& p, std::size_t line, const Error& e) {
    throw Failure(ErrorCode::StorageFailure,
                  p.string() + ":" + std::to_string(line) + ": " + e.describe());
  };
  const auto events_path = *dir_ / kEventsFile;
  for_each_line(events_path, [&](const std::string& line, std::size_t n) {
    auto event = parse_event_line(line, site_);
    if (!event) fail(events_path, n, event.error());
    index_event(std::move(event).value());
  });
  const auto signins_path = *dir_ / kSignInsFile;
  for_each_line(signins_path, [&](const std::string& line, std::size_t n) {
    auto r = decode_signin(line);
    if (!r) fail(signins_path, n, r.error());
    signins_.push_back(std::move(r).value());
  });
  const auto transitions_path = *dir_ / kTransitionsFile;
  for_each_line(transitions_path, [&](const std::string& line, std::size_t n) {
    auto t = decode_transition(line);
    if (!t) fail(transitions_path, n, t.error());
    transitions_.push_back(std::move(t).value());
  });
  const auto users_path = *dir_ / kUsersFile;
  for_each_line(users_path, [&](const std::string& line, std::size_t n) {
    auto u = decode_user(line);
    if (!u) fail(users_path, n, u.error());
    users_.insert_or_assign(u->id, u.value());
  });
}

void EventStore::index_event(LiftEvent event) {
  const std::uint64_t seq = events_.size() + 1;
  const bool duplicate =
      !seen_.emplace(event.lift(), event.occurred_at(), event.event_type()).second;
  auto& list = by_lift_[event.lift()];
  events_.push_back(StoredEvent{seq, std::move(event), duplicate});
  // Usually arrives in time order, so this is an append.
  auto pos = std::upper_bound(list.begin(), list.end(), seq,
                              [&](std::uint64_t a, std::uint64_t b) { return seq_less(events_, a, b); });
  list.insert(pos, seq);
}

void EventStore::write_lines(std::ofstream* out, const std::string& blob) {
  if (!out) return;
  out->write(blob.data(), static_cast<std::streamsize>(blob.size()));
  out->flush();
  if (!*out) throw Failure(ErrorCode::StorageFailure, "write failed");
}

AppendReceipt EventStore::append_event(const LiftEvent& event) {
  return append_events(std::span<const LiftEvent>(&event, 1)).front();
}

std::vector<AppendReceipt> EventStore::append_events(std::span<const LiftEvent> events) {
  std::string blob;
  for (const auto& e : events) {
    blob += encode_event(e);
    blob += '\n';
  }
  std::unique_lock lock(mutex_);
  write_lines(events_out_.get(), blob);
  std::vector<AppendReceipt> receipts;
  receipts.reserve(events.size());
  for (const auto& e : events) {
    index_event(e);
    receipts.push_back({events_.back().seq, events_.back().duplicate});
  }
  return receipts;
}

std::vector<StoredEvent> EventStore::query_stored(const EventFilter& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<StoredEvent> out;
  auto scan = [&](const std::vector<std::uint64_t>& list) {
    auto lo = std::lower_bound(list.begin(), list.end(), filter.window.start(),
                               [&](std::uint64_t s, Timestamp t) { return events_[s - 1].event.occurred_at() < t; });
    for (auto it = lo; it != list.end(); ++it) {
      const auto& stored = events_[*it - 1];
      if (stored.event.occurred_at() >= filter.window.end()) break;
      if (filter.event_types && !filter.event_types->count(stored.event.event_type())) continue;
      if (stored.duplicate && filter.skip_duplicates) continue;
      out.push_back(stored);
    }
  };
  const auto& scope = filter.scope;
  if (const auto* lift = scope.lift()) {
    if (auto it = by_lift_.find(*lift); it != by_lift_.end()) scan(it->second);
  } else {
    for (const auto& [id, list] : by_lift_) {
      if (scope.matches(id)) scan(list);
    }
  }
  std::sort(out.begin(), out.end(), [](const StoredEvent& a, const StoredEvent& b) {
    if (a.event.occurred_at() != b.event.occurred_at()) return a.event.occurred_at() < b.event.occurred_at();
    return a.seq < b.seq;
  });
  return out;
}

std::vector<LiftEvent> EventStore::query_events(const EventFilter& filter) const {
  auto stored = query_stored(filter);
  std::vector<LiftEvent> out;
  out.reserve(stored.size());
  for (auto& s : stored) out.push_back(std::move(s.event));
  return out;
}

std::map<LiftId, StoredEvent> EventStore::latest_event_per_lift(const SiteConfig& site) const {
  std::shared_lock lock(mutex_);
  std::map<LiftId, StoredEvent> out;
  for (const auto& [id, list] : by_lift_) {
    if (list.empty() || !site.find_lift(id)) continue;
    out.emplace(id, events_[list.back() - 1]);
  }
  return out;
}

std::optional<StoredEvent> EventStore::latest_before(const LiftId& lift, Timestamp before,
                                                     EventType type) const {
  std::shared_lock lock(mutex_);
  auto it = by_lift_.find(lift);
  if (it == by_lift_.end()) return std::nullopt;
  const auto& list = it->second;
  auto hi = std::lower_bound(list.begin(), list.end(), before,
                             [&](std::uint64_t s, Timestamp t) { return events_[s - 1].event.occurred_at() < t; });
  while (hi != list.begin()) {
    --hi;
    const auto& stored = events_[*hi - 1];
    if (stored.event.event_type() == type && !stored.duplicate) return stored;
  }
  return std::nullopt;
}

std::vector<StoredEvent> EventStore::all_events() const {
  std::shared_lock lock(mutex_);
  return events_;
}

std::size_t EventStore::event_count() const {
  std::shared_lock lock(mutex_);
  return events_.size();
}

std::vector<LiftId> EventStore::lifts_with_events() const {
  std::shared_lock lock(mutex_);
  std::vector<LiftId> out;
  for (const auto& [id, list] : by_lift_) out.push_back(id);
  return out;
}

void EventStore::record_signin(const SignInRecord& record) {
  std::unique_lock lock(mutex_);
  write_lines(signins_out_.get(), encode_signin(record) + "\n");
  signins_.push_back(record);
}

std::vector<SignInRecord> EventStore::query_signin_history(const TimeWindow& window) const {
  std::shared_lock lock(mutex_);
  std::vector<SignInRecord> out;
  for (const auto& r : signins_) {
    if (window.contains(r.at)) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
  return out;
}

void EventStore::append_transition(const StatusTransition& transition) {
  std::unique_lock lock(mutex_);
  write_lines(transitions_out_.get(), encode_transition(transition) + "\n");
  transitions_.push_back(transition);
}

std::vector<StatusTransition> EventStore::transitions() const {
  std::shared_lock lock(mutex_);
  return transitions_;
}

void EventStore::upsert_user(const UserAccount& user) {
  std::unique_lock lock(mutex_);
  write_lines(users_out_.get(), encode_user(user) + "\n");
  users_.insert_or_assign(user.id, user);
}

std::optional<UserAccount> EventStore::find_user(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = users_.find(id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::vector<UserAccount> EventStore::users() const {
  std::shared_lock lock(mutex_);
  std::vector<UserAccount> out;
  for (const auto& [id, u] : users_) out.push_back(u);
  return out;
}

}  // namespace vt
