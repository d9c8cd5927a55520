#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrlm {

// Base for every error the runtime raises. `kind()` is the stable,
// machine-readable name used in CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("SyntaxError", message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class InvalidSplit : public Error {
 public:
  explicit InvalidSplit(const std::string& message) : Error("InvalidSplit", message) {}
};

class OutOfBounds : public Error {
 public:
  explicit OutOfBounds(const std::string& message) : Error("OutOfBounds", message) {}
};

class EmptyReduce : public Error {
 public:
  EmptyReduce() : Error("EmptyReduce", "reduce over an empty list") {}
};

class PlanInvalid : public Error {
 public:
  explicit PlanInvalid(const std::string& message) : Error("PlanInvalid", message) {}
};

class ContextOverflow : public Error {
 public:
  ContextOverflow(std::size_t tokens, std::size_t window)
      : Error("ContextOverflow", "prompt of " + std::to_string(tokens) +
                                     " tokens exceeds context window " + std::to_string(window)),
        tokens_(tokens),
        window_(window) {}

  std::size_t tokens() const noexcept { return tokens_; }
  std::size_t window() const noexcept { return window_; }

 private:
  std::size_t tokens_;
  std::size_t window_;
};

// Failure of a backend while serving one call. `cause` is one of
// Timeout, HttpError, MalformedResponse.
class OracleError : public Error {
 public:
  OracleError(std::string cause, std::uint64_t call_index, const std::string& message)
      : Error("OracleError", cause + " (call " + std::to_string(call_index) + "): " + message),
        cause_(std::move(cause)),
        call_index_(call_index) {}

  const std::string& cause() const noexcept { return cause_; }
  std::uint64_t call_index() const noexcept { return call_index_; }

 private:
  std::string cause_;
  std::uint64_t call_index_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

}  // namespace lrlm
