#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace roughpde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Array extent does not match the grid; axis() is the offending axis (-1 for component count).
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int axis, std::size_t expected, std::size_t got)
      : Error("dimension mismatch on " +
              (axis < 0 ? std::string("component axis") : "axis " + std::to_string(axis)) +
              ": expected " + std::to_string(expected) + ", got " + std::to_string(got)),
        axis_(axis) {}
  int axis() const { return axis_; }

 private:
  int axis_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> ratios, std::vector<double> increments)
      : Error(what), ratios_(std::move(ratios)), increments_(std::move(increments)) {}
  const std::vector<double>& ratios() const { return ratios_; }
  const std::vector<double>& increments() const { return increments_; }

 private:
  std::vector<double> ratios_;
  std::vector<double> increments_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace roughpde
