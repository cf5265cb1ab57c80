#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qclust {

// Base class for everything thrown by this library. Callers that want a
// single catch site can catch qclust::Error; more specific types below
// carry enough context to produce a useful message at the CLI boundary.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidEdgeError : public Error {
 public:
  using Error::Error;
};

class DuplicateEdgeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidPairError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ProblemTooLargeError : public Error {
 public:
  using Error::Error;
};

// Strict decoding found a vertex whose one-hot row is not exactly one bit.
class ConstraintViolationError : public Error {
 public:
  ConstraintViolationError(const std::string& what, int vertex)
      : Error(what), vertex_(vertex) {}
  int vertex() const { return vertex_; }

 private:
  int vertex_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qclust
