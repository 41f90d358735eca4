#pragma once

#include <stdexcept>
#include <string>

namespace pdacache {

// Malformed input: non-rectangular grid, bad token, bad JSON shape.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments that disagree with each other (profile length vs. columns, ...).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured cell or permutation budget would be exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user failed to reconstruct its file. Never expected on validated input.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdacache
