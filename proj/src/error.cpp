#include "vk/error.hpp"

namespace vk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::MalformedCode: return "MalformedCode";
    case ErrorCode::IndexTypeMismatch: return "IndexTypeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownFormer: return "UnknownFormer";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ElementOutOfRange: return "ElementOutOfRange";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace vk
