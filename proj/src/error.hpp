#pragma once

#include <stdexcept>
#include <string>

namespace cognate {

// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
  InvalidArgument,  // bad parameter (empty grid, q_len 0, dimension mismatch)
  Io,               // file missing or unreadable
  Parse,            // malformed file content; message carries file:line
  Domain,           // value outside an operation's domain (negative score, NaN)
  Config,           // missing resource for a requested feature set
  Internal,         // invariant broken at runtime (non-finite loss, ...)
};

constexpr const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "invalid_argument";
    case ErrorCode::Io:
      return "io";
    case ErrorCode::Parse:
      return "parse";
    case ErrorCode::Domain:
      return "domain";
    case ErrorCode::Config:
      return "config";
    case ErrorCode::Internal:
      return "internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cognate
