#pragma once

#include <stdexcept>
#include <string>

namespace mzsup {

// Invalid user-supplied configuration (bad model name, weights, counts...).
// Messages name the offending key so CLI errors stay actionable.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble while reading configs or writing results.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mzsup
