#include "vt/notify.hpp"

#include <fstream>

#include "json.hpp"

namespace vt {

std::string_view to_string(DispatchOutcome outcome) {
  return outcome == DispatchOutcome::Delivered ? "delivered" : "failed";
}

std::string render_notification_text(const LiftId& lift, OperationMode mode, Timestamp since) {
  return "Lift " + lift.str() + " is not working (" + std::string(describe(mode)) + ") since " +
         format_timestamp(since) + ".";
}

std::string encode_outbox_line(const Notification& n, DispatchOutcome outcome) {
  nlohmann::ordered_json j;
  j["lift"] = n.lift.str();
  j["to_mode"] = to_string(n.to_mode);
  j["at"] = format_timestamp(n.at);
  j["rendered_text"] = n.rendered_text;
  j["outcome"] = to_string(outcome);
  return j.dump();
}

OutboxFileSink::OutboxFileSink(std::filesystem::path path) : path_(std::move(path)) {}

void OutboxFileSink::deliver(const Notification& n) {
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Failure(ErrorCode::SinkUnavailable, "cannot open outbox " + path_.string());
  out << encode_outbox_line(n, DispatchOutcome::Delivered) << '\n';
  out.flush();
  if (!out) throw Failure(ErrorCode::SinkUnavailable, "cannot write outbox " + path_.string());
}

void StreamSink::deliver(const Notification& n) {
  std::lock_guard lock(mutex_);
  out_ << encode_outbox_line(n, DispatchOutcome::Delivered) << '\n';
  out_.flush();
  if (!out_) throw Failure(ErrorCode::SinkUnavailable, "stream closed");
}

void MemorySink::deliver(const Notification& n) {
  std::lock_guard lock(mutex_);
  ++attempts_;
  if (failures_pending_ > 0) {
    --failures_pending_;
    throw Failure(ErrorCode::SinkUnavailable, "memory sink set to fail");
  }
  delivered_.push_back(n);
}

void MemorySink::fail_next(int n) {
  std::lock_guard lock(mutex_);
  failures_pending_ = n;
}

std::vector<Notification> MemorySink::delivered() const {
  std::lock_guard lock(mutex_);
  return delivered_;
}

int MemorySink::attempts() const {
  std::lock_guard lock(mutex_);
  return attempts_;
}

}  // namespace vt
