#pragma once

#include <stdexcept>
#include <string>

namespace featacq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input, or a numeric routine failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Labels contain a single class where both are required.
class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

class UndefinedCoherenceError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file content. The message carries the location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The completion solver produced a non-finite objective.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace featacq
