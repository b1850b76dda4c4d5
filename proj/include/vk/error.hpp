#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vk {

enum class ErrorCode {
  EnumerationTooLarge,
  DomainMismatch,
  PreconditionViolated,
  MalformedCode,
  IndexTypeMismatch,
  ParseError,
  DuplicateName,
  UnknownFormer,
  ArityMismatch,
  ElementOutOfRange,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable kernel failure. The code is the stable part; the
/// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vk
