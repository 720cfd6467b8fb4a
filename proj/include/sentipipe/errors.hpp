#pragma once

#include <stdexcept>
#include <string>

namespace sentipipe {

// Invalid user input: malformed files, bad config, schema violations.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while running an otherwise valid job (non-finite loss, shape
// mismatch, I/O failure mid-run). CLI exit code 1.
class RunError : public std::runtime_error {
 public:
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sentipipe
