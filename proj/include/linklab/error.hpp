#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linklab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed scalar value (instance id, number, enum flag).
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A row of an input table violated the file contract. Row numbers are
// 1-based physical lines, so the header is row 1.
class IngestError : public Error {
 public:
  IngestError(std::string source, std::size_t row, const std::string& message)
      : Error(source + ":" + std::to_string(row) + ": " + message),
        source_(std::move(source)),
        row_(row) {}

  const std::string& source() const { return source_; }
  std::size_t row() const { return row_; }

 private:
  std::string source_;
  std::size_t row_;
};

// Scoring could not proceed (empty universe, missing instances in strict
// mode, no evaluable pairs).
class EvalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// An input file is missing or unreadable.
class InputError : public Error {
 public:
  using Error::Error;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

}  // namespace linklab
