#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace p3dc {

/// Failure categories. The CLI prints these as the `error_code:` prefix.
enum class ErrorCode {
  Format,        // malformed or truncated binary/manifest
  Schema,        // manifest and payload disagree
  Data,          // non-finite or out-of-domain payload values
  Io,            // filesystem failure
  Precondition,  // caller violated an operation's precondition
  Degenerate,    // zero vector where a direction is required
  Domain,        // value outside a transform's domain
  Capacity,      // split too small for the requested episode shape
  Config,        // invalid user-supplied configuration
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace p3dc
