#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bqt {

enum class ErrorCode {
  DegenerateChannel,
  OutOfRange,
  CutoffTooSmall,
  CutoffMismatch,
  DegenerateState,
  MalformedState,
  InconsistentFamily,
  DegenerateSpectrum,
  InvalidBloch,
  OutOfDomain,
  MalformedGate,
  ResourceLimit,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bqt
