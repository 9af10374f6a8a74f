#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foliagraph {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Combinatorial side.
struct SizeLimitError : Error { using Error::Error; };
struct ExhaustionLimitError : Error { using Error::Error; };
struct CycleError : Error { using Error::Error; };
struct EndpointError : Error { using Error::Error; };
struct NotEulerianError : Error { using Error::Error; };

// Parser / evaluation. Offsets are 1-based columns into the source text.
struct SyntaxError : Error {
  SyntaxError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) + ", expected " + expected),
        offset(offset), expected(std::move(expected)) {}
  std::size_t offset;
  std::string expected;
};
struct EvalError : Error {
  EvalError(std::string what, std::size_t offset) : Error(std::move(what)), offset(offset) {}
  std::size_t offset;
};

// Grid side.
struct VanishingFormError : Error {
  VanishingFormError(std::size_t node) : Error("one-form vanishes at node " + std::to_string(node)), node(node) {}
  std::size_t node;
};
struct DimensionError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };

// Leaf space / multiplier.
struct StepFailureError : Error { using Error::Error; };
struct CoverageError : Error { using Error::Error; };
struct AmbiguityError : Error { using Error::Error; };
struct ChartGapError : Error { using Error::Error; };

}  // namespace foliagraph
