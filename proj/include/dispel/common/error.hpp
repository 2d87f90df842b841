#pragma once

#include <stdexcept>
#include <string>

namespace dispel {

// Exit-code classes used by the command-line tool.
enum class ErrorClass { config = 2, numeric = 3, io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }
  int exit_code() const noexcept { return static_cast<int>(cls_); }

 private:
  ErrorClass cls_;
};

// Invalid input values, schema violations, unknown keys.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

// Parameter outside its physical domain.
class DomainError : public ConfigError {
 public:
  explicit DomainError(const std::string& what) : ConfigError(what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

class ConvergenceError : public NumericError {
 public:
  explicit ConvergenceError(const std::string& what) : NumericError(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

// Rethrows with a message prefix as the base type of the same exit-code class.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string msg = context + ": " + e.what();
  switch (e.error_class()) {
    case ErrorClass::config: throw ConfigError(msg);
    case ErrorClass::numeric: throw NumericError(msg);
    case ErrorClass::io: throw IoError(msg);
  }
  throw Error(e.error_class(), msg);
}

}  // namespace dispel
