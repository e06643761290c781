#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "omf/report.hpp"

namespace omf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor's parameter constraints or hypotheses do not hold.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A numerical hypothesis gate rejected the construction.
class GateError : public ConstructionError {
 public:
  GateError(const std::string& what, VerificationReport report)
      : ConstructionError(what), report_(std::move(report)) {}

  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

/// Evaluation outside the domain, or at a point where a required limit
/// does not exist numerically.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace omf
