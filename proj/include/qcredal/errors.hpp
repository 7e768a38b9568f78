/**
 * This code is part of qcredal.
 *
 * (C) Copyright the qcredal developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QCREDAL_ERRORS_HPP
#define QCREDAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcredal {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Matrix validation failures
class NotSquareError : public Error {
public:
  using Error::Error;
};
class NonFiniteError : public Error {
public:
  using Error::Error;
};
class NotHermitianError : public Error {
public:
  using Error::Error;
};
class DimensionMismatchError : public Error {
public:
  using Error::Error;
};
class NoConvergenceError : public Error {
public:
  using Error::Error;
};
class NotUnitaryError : public Error {
public:
  using Error::Error;
};

// Measurement validation failures
class NotProjectorError : public Error {
public:
  using Error::Error;
};
class NotOrthogonalError : public Error {
public:
  using Error::Error;
};
class NotCompleteError : public Error {
public:
  using Error::Error;
};
class RankNotOneError : public Error {
public:
  using Error::Error;
};
class NotDensityMatrixError : public Error {
public:
  using Error::Error;
};

// Optimization failures
class MaxIterationsError : public Error {
public:
  using Error::Error;
};
class SolverFailureError : public Error {
public:
  using Error::Error;
};
class BracketFailureError : public Error {
public:
  using Error::Error;
};
class DimensionTooLargeError : public Error {
public:
  using Error::Error;
};

// Credal-level failures
class IncoherentError : public Error {
public:
  using Error::Error;
};
class UndefinedConditioningError : public Error {
public:
  using Error::Error;
};
class NotMaximalError : public Error {
public:
  using Error::Error;
};
class InvalidDistributionError : public Error {
public:
  using Error::Error;
};
class NotIncoherentError : public Error {
public:
  using Error::Error;
};

// Scenario file failures; both carry a JSONPath-style location.
class ParseError : public Error {
public:
  ParseError(const std::string &path, const std::string &reason)
      : Error("parse error at " + path + ": " + reason), path_(path) {}
  const std::string &path() const { return path_; }

private:
  std::string path_;
};
class ValidationError : public Error {
public:
  ValidationError(const std::string &path, const std::string &reason)
      : Error("validation error at " + path + ": " + reason), path_(path) {}
  const std::string &path() const { return path_; }

private:
  std::string path_;
};

} // namespace qcredal

#endif // QCREDAL_ERRORS_HPP
