#include "nesynth/error.hpp"

namespace nesynth {

std::string_view category_name(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::Parse: return "PARSE";
    case ErrorCategory::Spec: return "SPEC";
    case ErrorCategory::Config: return "CONFIG";
    case ErrorCategory::Io: return "IO";
    case ErrorCategory::Runtime: return "RUNTIME";
    }
    return "RUNTIME";
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCategory::Parse,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

} // namespace nesynth
