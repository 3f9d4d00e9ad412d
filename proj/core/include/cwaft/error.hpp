#pragma once

#include <stdexcept>
#include <string>

namespace cwaft {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// Every unnormalized log-weight of a censored row was -inf.
class DegenerateRow : public Error {
 public:
  DegenerateRow(std::size_t row)
      : Error("degenerate responsibility row " + std::to_string(row)), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class EmptyComponent : public Error {
 public:
  EmptyComponent(int component)
      : Error("component " + std::to_string(component) + " has no responsibility mass"),
        component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

class SingularDesign : public Error {
 public:
  SingularDesign(int component)
      : Error("weighted covariate Gram matrix of component " + std::to_string(component) +
              " is singular"),
        component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

class AllRestartsFailed : public Error {
 public:
  using Error::Error;
};

class TooFewSuccesses : public Error {
 public:
  using Error::Error;
};

class CauseOutOfRange : public Error {
 public:
  CauseOutOfRange(int cause, int n_causes)
      : Error("cause " + std::to_string(cause) + " outside 1.." + std::to_string(n_causes)) {}
};

}  // namespace cwaft
