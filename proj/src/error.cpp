#include "vt/error.hpp"

namespace vt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLift: return "UnknownLift";
    case ErrorCode::UnknownBuilding: return "UnknownBuilding";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::MissingWaitTime: return "MissingWaitTime";
    case ErrorCode::UnexpectedWaitTime: return "UnexpectedWaitTime";
    case ErrorCode::NegativeWaitTime: return "NegativeWaitTime";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidScope: return "InvalidScope";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NoRoute: return "NoRoute";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SinkUnavailable: return "SinkUnavailable";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::BindFailure: return "BindFailure";
  }
  return "Unknown";
}

std::string Error::describe() const {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace vt
