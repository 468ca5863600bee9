#ifndef ZIPPERLAB_ERRORS_HPP
#define ZIPPERLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zipperlab {

/// Base class for all library errors.
class ZipperError : public std::runtime_error {
public:
  explicit ZipperError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad argument or violated precondition (CLI exit code 2).
class InvalidArgumentError : public ZipperError {
public:
  explicit InvalidArgumentError(const std::string& msg) : ZipperError(msg) {}
};

/// Verblunsky coefficient is not a strict contraction.
class ContractionError : public InvalidArgumentError {
public:
  explicit ContractionError(const std::string& msg) : InvalidArgumentError(msg) {}
};

/// Scattering block b is numerically singular; the message names the event.
class SingularBlockError : public ZipperError {
public:
  explicit SingularBlockError(const std::string& msg) : ZipperError(msg) {}
};

/// A defect operator has an eigenvalue too small to invert.
class DefectInversionError : public ZipperError {
public:
  explicit DefectInversionError(const std::string& msg) : ZipperError(msg) {}
};

/// NaN/overflow, eigensolver failure, or a cocycle residual abort (exit code 3).
class NumericError : public ZipperError {
public:
  explicit NumericError(const std::string& msg) : ZipperError(msg) {}
};

/// Bracket closure did not stabilize within the round budget.
class NonConvergenceError : public ZipperError {
public:
  explicit NonConvergenceError(const std::string& msg) : ZipperError(msg) {}
};

/// Operation requires alpha != 0.
class DegenerateInputError : public InvalidArgumentError {
public:
  explicit DegenerateInputError(const std::string& msg) : InvalidArgumentError(msg) {}
};

}  // namespace zipperlab

#endif
