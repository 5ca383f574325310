#pragma once

#include <stdexcept>
#include <string>

namespace logdet {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact zero pivot: the matrix is singular to working precision.
class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A row prefix lost rank (Gram matrix not positive definite, or a
/// perpendicular length fell under the rank tolerance).
class DegenerateRows : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many singular draws for the ensemble to be meaningful.
class DegenerateEnsemble : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logdet
