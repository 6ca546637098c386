#pragma once

#include <stdexcept>
#include <string>

namespace itj {

/// Base class of every fault raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: a bad sequence file, an invalid polynomial, a violated
/// precondition the caller controls.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The chart does not cover the escape disc.
class GridTooSmall : public Error {
 public:
  GridTooSmall(const std::string& what, double required_half_width)
      : Error(what), required_half_width_(required_half_width) {}
  double required_half_width() const noexcept { return required_half_width_; }

 private:
  double required_half_width_;
};

class RootFindError : public Error {
 public:
  using Error::Error;
};

/// A construction that is well defined in the continuum failed at the
/// current raster resolution (curve did not close, sequence did not settle).
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A mapping-sequence construction violated one of its defining conditions.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, int time) : Error(what), time_(time) {}
  int time() const noexcept { return time_; }

 private:
  int time_;
};

}  // namespace itj
