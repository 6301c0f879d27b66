#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace osid {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: descriptors, flags, out-of-range parameters.
struct ConfigError : Error {
  using Error::Error;
};

struct IllegalFamilyParam : ConfigError {
  using ConfigError::ConfigError;
};

// Operation requires exactly-rational coefficients but the sequence only
// provides rational enclosures.
struct InexactSequence : ConfigError {
  using ConfigError::ConfigError;
};

// --- expression DSL ---

struct SyntaxError : Error {
  size_t offset;
  std::string expected;
  SyntaxError(size_t off, std::string exp)
      : Error("syntax error at offset " + std::to_string(off) + ": expected " + exp),
        offset(off),
        expected(std::move(exp)) {}
};

struct UnknownIdentifier : Error {
  size_t offset;
  std::string name;
  UnknownIdentifier(size_t off, std::string id)
      : Error("unknown identifier '" + id + "' at offset " + std::to_string(off)),
        offset(off),
        name(std::move(id)) {}
};

struct ArityMismatch : Error {
  size_t offset;
  std::string name;
  size_t expected_arity;
  size_t got_arity;
  ArityMismatch(size_t off, std::string fn, size_t want, size_t got)
      : Error("function '" + fn + "' takes " + std::to_string(want) + " argument(s), got " +
              std::to_string(got) + " (offset " + std::to_string(off) + ")"),
        offset(off),
        name(std::move(fn)),
        expected_arity(want),
        got_arity(got) {}
};

struct DimensionExceeded : Error {
  size_t offset;
  int var_index;
  int dimension;
  DimensionExceeded(size_t off, int var, int dim)
      : Error("variable x" + std::to_string(var) + " exceeds declared dimension " +
              std::to_string(dim) + " (offset " + std::to_string(off) + ")"),
        offset(off),
        var_index(var),
        dimension(dim) {}
};

// --- evaluation ---

// The expression produced a negative value; nonnegative codomain is a hard
// contract, never a clamp.
struct NegativeValue : Error {
  std::vector<double> point;
  double value;
  NegativeValue(std::vector<double> at, double v);
};

// Division by zero, sqrt of a negative, or a non-finite result.
struct DomainError : Error {
  using Error::Error;
};

// --- scalar calculus / decomposition / minorant ---

struct PieceBudgetExceeded : Error {
  size_t pieces;
  size_t cap;
  PieceBudgetExceeded(size_t n, size_t limit)
      : Error("piecewise profile needs " + std::to_string(n) + " pieces, cap is " +
              std::to_string(limit)),
        pieces(n),
        cap(limit) {}
};

// Set-level and point-level routes disagreed; always an implementation bug.
struct CrossValidationMismatch : Error {
  using Error::Error;
};

struct RadiusBelowMesh : Error {
  using Error::Error;
};

struct MonotonicityViolation : Error {
  using Error::Error;
};

struct DominationViolation : Error {
  using Error::Error;
};

}  // namespace osid
