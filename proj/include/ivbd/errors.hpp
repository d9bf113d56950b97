#pragma once

#include <stdexcept>
#include <string>

namespace ivbd {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProbability : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ZeroAssignmentProbability : public Error {
 public:
  using Error::Error;
};

class EmptyData : public Error {
 public:
  using Error::Error;
};

/// A covariate cell has observations for only one assignment arm.
class EmptyStratum : public Error {
 public:
  EmptyStratum(const std::string& cell, const std::string& what)
      : Error(what), cell_(cell) {}
  const std::string& cell() const { return cell_; }

 private:
  std::string cell_;
};

class WeightMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateFirstStage : public Error {
 public:
  using Error::Error;
};

class NonMonotoneCurve : public Error {
 public:
  using Error::Error;
};

class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

/// Input file violates the expected schema; carries 1-based row and the
/// offending column name when known.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, long row = 0, std::string column = "")
      : Error(what), row_(row), column_(std::move(column)) {}
  long row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  long row_;
  std::string column_;
};

}  // namespace ivbd
