#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nesynth {

/// Broad failure class; the CLI maps these onto message prefixes and exit codes.
enum class ErrorCategory {
    Parse,   // sketch/program/theta text
    Spec,    // example files
    Config,  // training configuration
    Io,      // filesystem
    Runtime, // everything detected after inputs were accepted
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Syntax or placement error in sketch text, with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace nesynth
