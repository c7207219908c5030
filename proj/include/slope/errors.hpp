#pragma once

#include <stdexcept>
#include <string>

namespace slope {

// Bad arguments: dimension mismatch, invalid tuning vector, malformed input.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// The data is well formed but the numerics refuse: singular Gram matrix,
// non-orthogonal design on an orthogonal-only path, zero pattern, ...
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slope
