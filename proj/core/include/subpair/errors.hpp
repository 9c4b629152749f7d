#pragma once

#include <stdexcept>
#include <string>

namespace subpair {

// Raised for malformed run configs, missing config/checkpoint files.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for unreadable or badly malformed datasets. CLI exit code 3.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a training run cannot continue (e.g. loss became NaN).
struct TrainError : std::runtime_error {
  explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace subpair
