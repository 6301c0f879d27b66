#pragma once

#include <span>
#include <string>
#include <vector>

#include "osid/errors.hpp"
#include "osid/rational.hpp"

namespace osid {

// Closed-form nonnegative test function over variables x1..xd. Arithmetic
// over rational literals with integer powers and {abs, min, max, sin, cos,
// exp, sqrt}. Evaluation is plain double precision and pure: identical AST
// and point give bit-identical results.
class FunctionAst {
 public:
  int dimension() const { return dim_; }

  // Throws NegativeValue when the (root) result is negative, DomainError on
  // division by zero, sqrt of a negative, or a non-finite result.
  double evaluate(std::span<const double> point) const;

  // Minimal-parentheses rendering; parse(str()) reproduces the same AST.
  std::string str() const;

  struct Node {
    enum class Op {
      Literal, Var, Add, Sub, Mul, Div, Pow, Neg,
      Abs, Min, Max, Sin, Cos, Exp, Sqrt,
    };
    Op op;
    Rat literal;        // Literal
    int var = 0;        // Var, 1-based
    long exponent = 0;  // Pow
    int a = -1, b = -1; // child indices
  };
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  friend FunctionAst parse_function(const std::string&, int);
  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
};

// Recursive-descent parse of the ASCII expression grammar (precedence low to
// high: additive, multiplicative, unary minus, integer power, atoms).
// Whitespace-insensitive. Errors carry the byte offset.
FunctionAst parse_function(const std::string& expr, int dimension);

}  // namespace osid
