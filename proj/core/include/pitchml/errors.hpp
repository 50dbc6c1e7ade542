#pragma once

#include <stdexcept>
#include <string>

namespace pitchml {

// Bad inputs, files, configs. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures at runtime (numerical aborts, I/O mid-flight). Exit code 3.
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pitchml
