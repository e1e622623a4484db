#pragma once

#include <stdexcept>
#include <string>

namespace unshade {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user input: bad config keys, malformed files, bad CLI values.
struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(what) {}
};

// Numerical failure during training/inference (non-finite loss and friends).
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(what) {}
};

inline void check(bool ok, const std::string& msg) {
  if (!ok) throw Error(msg);
}

inline void check_usage(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace unshade
