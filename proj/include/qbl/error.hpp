#pragma once

#include <stdexcept>
#include <string>

namespace qbl {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not reach its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double tolerance)
      : Error(what), estimate_(estimate), tolerance_(tolerance) {}
  double estimate() const { return estimate_; }
  double tolerance() const { return tolerance_; }

 private:
  double estimate_;
  double tolerance_;
};

// Malformed external data (CSV rows, snapshot files, non-finite samples).
class DataError : public Error {
 public:
  using Error::Error;
};

// Operator preconditions on the input field.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Non-finite accumulation inside an operator.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long node) : Error(what), node_(node) {}
  long node() const { return node_; }

 private:
  long node_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

// Rate fit with too few usable points.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

// Configuration rejected before any compute starts; carries the key path.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& msg)
      : Error(path.empty() ? msg : path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace qbl
