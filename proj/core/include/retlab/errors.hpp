#pragma once

#include <stdexcept>
#include <string>

namespace retlab {

// Bad flags, bad hyperparameters, bad run setup. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: CSV schema violations, invalid records, corrupt model
// files. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant. CLI exit code 4.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace retlab
