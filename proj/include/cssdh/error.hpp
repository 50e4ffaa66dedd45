#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cssdh {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position inside a parsed text; both coordinates are 1-based and count
/// code points, not bytes.
struct ParseDiagnostic {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;

  std::string to_string() const;
};

class SyntaxError : public Error {
 public:
  explicit SyntaxError(ParseDiagnostic diagnostic);
  const ParseDiagnostic& diagnostic() const noexcept { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

class UndefinedPrefix : public Error {
 public:
  explicit UndefinedPrefix(std::string prefix,
                           std::optional<ParseDiagnostic> diagnostic = std::nullopt);
  const std::string& prefix() const noexcept { return prefix_; }
  const std::optional<ParseDiagnostic>& diagnostic() const noexcept { return diagnostic_; }

 private:
  std::string prefix_;
  std::optional<ParseDiagnostic> diagnostic_;
};

class MalformedCurie : public Error {
 public:
  using Error::Error;
};

class InvalidTerm : public Error {
 public:
  using Error::Error;
};

class InvalidTriple : public Error {
 public:
  using Error::Error;
};

class UndeclaredClass : public Error {
 public:
  explicit UndeclaredClass(const std::string& iri) : Error("undeclared class: " + iri) {}
};

class UndeclaredProperty : public Error {
 public:
  explicit UndeclaredProperty(const std::string& iri) : Error("undeclared property: " + iri) {}
};

}  // namespace cssdh
