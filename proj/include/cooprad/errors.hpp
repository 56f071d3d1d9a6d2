#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cooprad {

enum class ErrorKind {
  validation,         // bad inputs, broken invariants, degenerate geometry
  parse,              // malformed file content (carries a byte offset where known)
  io,                 // filesystem / stream failures
  capacity,           // request exceeds a documented hard cap
  numerical,          // solver or fit failure
  insufficient_data,  // too few counts / no decay to fit
};

const char* error_kind_name(ErrorKind k);

/// Process exit code for the CLI contract: 1 validation, 2 I/O, 3 numerical.
int error_exit_code(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(ErrorKind::validation, msg) {}
};

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t byte_offset)
      : Error(ErrorKind::parse, msg + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset(byte_offset) {}
  std::size_t byte_offset;
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorKind::io, msg) {}
};

struct CapacityError : Error {
  explicit CapacityError(const std::string& msg) : Error(ErrorKind::capacity, msg) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& msg) : Error(ErrorKind::numerical, msg) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& msg)
      : Error(ErrorKind::insufficient_data, msg) {}
};

}  // namespace cooprad
