#pragma once

#include <stdexcept>
#include <string>

namespace ii {

// Data / precondition errors raised by library operations. The CLI maps
// these to exit code 1 (usage errors handled by the argument parser map
// to exit code 2).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ii
