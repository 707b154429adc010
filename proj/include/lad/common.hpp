#pragma once

#include <stdexcept>
#include <string>

namespace lad {

inline constexpr const char* kVersion = "0.1.0";

// Raised for bad input data: unreadable files, malformed formats, values
// that violate a documented precondition. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal invariant is violated (inconsistent counts,
// impossible state). CLI maps this to exit code 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

}  // namespace lad
