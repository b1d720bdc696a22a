#pragma once

#include <stdexcept>
#include <string>

namespace rydberg {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NullSpaceDegenerate : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class AxisMismatch : public Error {
 public:
  using Error::Error;
};

class AxisTooNarrow : public Error {
 public:
  using Error::Error;
};

class UnknownComponent : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroDetuning : public Error {
 public:
  using Error::Error;
};

class NegativeRatio : public Error {
 public:
  using Error::Error;
};

class TrackingLost : public Error {
 public:
  using Error::Error;
};

class ValidityGate : public Error {
 public:
  using Error::Error;
};

class NoExtremum : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A solver failure at one (velocity, probe detuning) grid point.
class SolverPointError : public Error {
 public:
  SolverPointError(const std::string& what, double velocity, double delta21)
      : Error(what + " at v=" + std::to_string(velocity) +
              ", delta21=" + std::to_string(delta21)),
        velocity_(velocity),
        delta21_(delta21) {}

  double velocity() const { return velocity_; }
  double delta21() const { return delta21_; }

 private:
  double velocity_;
  double delta21_;
};

}  // namespace rydberg
