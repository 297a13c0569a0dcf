#pragma once

#include <stdexcept>
#include <string>

namespace fasttrack {

/// Invalid user input: bad config values, malformed rows, bad flags.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure: missing or unwritable files.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fasttrack
