#include "pixi/common/error.hpp"

namespace pixi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::WrongState: return "wrong_state";
    case ErrorCode::Mismatch: return "mismatch";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::PolicyViolation: return "policy_violation";
    case ErrorCode::EpisodeExhausted: return "episode_exhausted";
    case ErrorCode::Forbidden: return "forbidden";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Internal: return "internal";
  }
  return "internal";
}

}  // namespace pixi
