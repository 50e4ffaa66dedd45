#include "cssdh/error.hpp"

namespace cssdh {

std::string ParseDiagnostic::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

SyntaxError::SyntaxError(ParseDiagnostic diagnostic)
    : Error(diagnostic.to_string()), diagnostic_(std::move(diagnostic)) {}

UndefinedPrefix::UndefinedPrefix(std::string prefix, std::optional<ParseDiagnostic> diagnostic)
    : Error(diagnostic ? diagnostic->to_string() : "undefined prefix '" + prefix + "'"),
      prefix_(std::move(prefix)),
      diagnostic_(std::move(diagnostic)) {}

}  // namespace cssdh
