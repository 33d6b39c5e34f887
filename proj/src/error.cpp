#include "bqt/error.hpp"

namespace bqt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateChannel: return "DegenerateChannel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::CutoffMismatch: return "CutoffMismatch";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::MalformedState: return "MalformedState";
    case ErrorCode::InconsistentFamily: return "InconsistentFamily";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::InvalidBloch: return "InvalidBloch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::MalformedGate: return "MalformedGate";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bqt
