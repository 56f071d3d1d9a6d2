#include "cooprad/errors.hpp"

namespace cooprad {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::insufficient_data: return "insufficient-data";
  }
  return "unknown";
}

int error_exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return 2;
    case ErrorKind::numerical: return 3;
    default: return 1;  // validation, parse, capacity, insufficient data
  }
}

}  // namespace cooprad
