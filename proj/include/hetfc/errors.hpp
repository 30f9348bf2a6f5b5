#pragma once

#include <stdexcept>
#include <string>

namespace hetfc {

// Bad config file / malformed CLI input. Mapped to exit code 2 by the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime model failure (non-stationary model, overflow, singular fit).
// Mapped to exit code 1 by the CLI.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hetfc
