#pragma once
#include <stdexcept>
#include <string>

namespace mw {

// Numerical failure (iteration budget exhausted, non-convergent matching, ...).
// The CLI maps this family to exit code 2.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// File/format failure (bad magic, unsupported version, truncated data, unwritable
// path, ...). The CLI maps this family to exit code 3.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mw
