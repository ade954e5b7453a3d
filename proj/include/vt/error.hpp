#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace vt {

enum class ErrorCode {
  UnknownLift,
  UnknownBuilding,
  LevelOutOfRange,
  MissingWaitTime,
  UnexpectedWaitTime,
  NegativeWaitTime,
  InvalidDirection,
  InvalidWindow,
  InvalidScope,
  MalformedPayload,
  StorageFailure,
  UnknownLevel,
  UnknownNode,
  NoRoute,
  InvalidConfig,
  SinkUnavailable,
  InvalidTransition,
  ConfigError,
  BindFailure,
};

std::string_view to_string(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;
  std::optional<std::size_t> line;  // 1-based, for payload errors

  std::string describe() const;
};

/// Value-or-error return for operations whose failure is an expected outcome
/// (validation, lookups). I/O failures are thrown as `Failure` instead.
template <class T>
class [[nodiscard]] Result {
 public:
  Result(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Error error) : state_(std::move(error)) {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return checked(); }
  T& value() & { return const_cast<T&>(checked()); }
  T&& value() && { return std::move(const_cast<T&>(checked())); }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Error& error() const { return std::get<1>(state_); }

 private:
  const T& checked() const {
    if (!ok()) throw std::logic_error("Result::value() on error: " + error().describe());
    return std::get<0>(state_);
  }

  std::variant<T, Error> state_;
};

inline Error make_error(ErrorCode code, std::string message) {
  return Error{code, std::move(message), std::nullopt};
}

class Failure : public std::runtime_error {
 public:
  Failure(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vt
