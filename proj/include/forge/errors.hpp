#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid vertex ids, self-loops, duplicate or missing edges.
class GraphError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A numeric or structural parameter outside the supported domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class SpectralError : public Error {
 public:
  using Error::Error;
};

class MatchingError : public Error {
 public:
  using Error::Error;
};

class SurgeryError : public Error {
 public:
  SurgeryError(std::string step, const std::string& what)
      : Error(step + ": " + what), step_(std::move(step)) {}

  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace forge
