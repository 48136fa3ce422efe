#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pixi {

enum class ErrorCode {
  InvalidArgument,
  NotFound,
  WrongState,
  Mismatch,
  Conflict,
  PolicyViolation,
  EpisodeExhausted,
  Forbidden,
  Io,
  Parse,
  Internal,
};

std::string_view to_string(ErrorCode code);

// Base exception for all library errors. The code drives HTTP status mapping
// and the machine-readable `error.code` field of API responses.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace pixi
