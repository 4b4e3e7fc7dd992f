#pragma once

#include <stdexcept>
#include <string>

namespace grades {

struct InfeasibleNetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

struct UnknownFactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoContributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownPresetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace grades
