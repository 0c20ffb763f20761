#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dkpair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched grid, matrix size or generator count.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A precondition on the input data failed (not an OSU, y does not commute, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A quantized value is not close to an integer or changed under grid refinement.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class GapClosedError : public Error {
 public:
  GapClosedError(const std::string& what, std::size_t point, double gap)
      : Error(what), point_(point), gap_(gap) {}
  std::size_t point() const { return point_; }
  double gap() const { return gap_; }

 private:
  std::size_t point_;
  double gap_;
};

}  // namespace dkpair
