#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solitonlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is a byte index into the source.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::string token)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message +
              (token.empty() ? std::string{} : " ('" + token + "')")),
        offset_(offset),
        message_(std::move(message)),
        token_(std::move(token)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t offset_;
  std::string message_;
  std::string token_;
};

/// Evaluation left the domain of a node (log of non-positive, 1/0, ...).
class DomainError : public Error {
 public:
  DomainError(std::size_t offset, const std::string& message)
      : Error("domain error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold (e.g. a non-unit ξ).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Scenario file does not match the schema; `pointer` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Expression text inside a scenario file failed to parse.
class ScenarioExpressionError : public SchemaError {
 public:
  ScenarioExpressionError(std::string pointer, const ParseError& cause)
      : SchemaError(std::move(pointer), cause.what()), offset_(cause.offset()) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace solitonlab
