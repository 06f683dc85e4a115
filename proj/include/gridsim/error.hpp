#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax problem in a text input; line is 1-based, 0 when not applicable.
struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  std::size_t line;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

struct SimulationError : Error {
  using Error::Error;
};

}  // namespace gridsim
