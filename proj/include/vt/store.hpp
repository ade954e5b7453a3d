#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include "vt/accounts.hpp"
#include "vt/event.hpp"

namespace vt {

struct StoredEvent {
  std::uint64_t seq = 0;
  LiftEvent event;
  /// Same (lift, occurred_at, event_type) as an earlier event.
  bool duplicate = false;
};

struct AppendReceipt {
  std::uint64_t seq = 0;
  bool duplicate = false;
};

/// Append-only event log plus the users, sign-in and status-transition
/// tables. Each table is one JSON-lines file in the store directory; the
/// in-memory indexes are rebuilt when the store is opened. Without a
/// directory the store lives in memory only.
///
/// Many concurrent readers, one writer at a time.
class EventStore {
 public:
  /// Throws Failure(StorageFailure) if an existing file cannot be read or
  /// holds a line that no longer validates against `site`.
  explicit EventStore(SiteConfig site, std::optional<std::filesystem::path> dir = std::nullopt);

  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;

  const SiteConfig& site() const { return site_; }
  const std::optional<std::filesystem::path>& directory() const { return dir_; }
  static constexpr const char* kEventsFile = "events.jsonl";
  static constexpr const char* kSignInsFile = "signins.jsonl";
  static constexpr const char* kTransitionsFile = "transitions.jsonl";
  static constexpr const char* kUsersFile = "users.jsonl";

  AppendReceipt append_event(const LiftEvent& event);
  /// All-or-nothing: either every event is written or none is.
  std::vector<AppendReceipt> append_events(std::span<const LiftEvent> events);

  /// Events with occurred_at in [start, end) matching scope and types, ordered
  /// by occurred_at then sequence number.
  std::vector<LiftEvent> query_events(const EventFilter& filter) const;
  std::vector<StoredEvent> query_stored(const EventFilter& filter) const;

  /// For each configured lift with events: the event with maximal occurred_at,
  /// ties broken by the later sequence number.
  std::map<LiftId, StoredEvent> latest_event_per_lift(const SiteConfig& site) const;

  /// Latest non-duplicate event of `type` for `lift` with occurred_at < `before`.
  std::optional<StoredEvent> latest_before(const LiftId& lift, Timestamp before, EventType type) const;

  /// Every stored event in append order.
  std::vector<StoredEvent> all_events() const;
  std::size_t event_count() const;
  std::vector<LiftId> lifts_with_events() const;

  void record_signin(const SignInRecord& record);
  std::vector<SignInRecord> query_signin_history(const TimeWindow& window) const;

  void append_transition(const StatusTransition& transition);
  std::vector<StatusTransition> transitions() const;

  /// Later records for the same id replace earlier ones.
  void upsert_user(const UserAccount& user);
  std::optional<UserAccount> find_user(std::string_view id) const;
  std::vector<UserAccount> users() const;

 private:
  using DedupKey = std::tuple<LiftId, Timestamp, EventType>;

  void load();
  void index_event(LiftEvent event);
  void write_lines(std::ofstream* out, const std::string& blob);
  std::ofstream* open_table(const char* name);

  SiteConfig site_;
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;

  std::vector<StoredEvent> events_;  // index = seq - 1
  std::map<LiftId, std::vector<std::uint64_t>> by_lift_;  // seqs sorted by (occurred_at, seq)
  std::set<DedupKey> seen_;
  std::vector<SignInRecord> signins_;
  std::vector<StatusTransition> transitions_;
  std::map<std::string, UserAccount, std::less<>> users_;

  std::unique_ptr<std::ofstream> events_out_;
  std::unique_ptr<std::ofstream> signins_out_;
  std::unique_ptr<std::ofstream> transitions_out_;
  std::unique_ptr<std::ofstream> users_out_;
};

std::string encode_transition(const StatusTransition& t);
Result<StatusTransition> decode_transition(std::string_view line);
std::string encode_signin(const SignInRecord& r);
Result<SignInRecord> decode_signin(std::string_view line);
std::string encode_user(const UserAccount& u);
Result<UserAccount> decode_user(std::string_view line);

}  // namespace vt
