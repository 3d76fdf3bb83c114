#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metricga {

// Base of every error raised by the library. Callers that only care about
// the category (for exit codes) catch the derived types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Endpoint unreachable, child process died, timeout.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Endpoint answered, but the answer does not follow the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input record; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace metricga
