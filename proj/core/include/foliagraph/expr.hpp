#pragma once

#include <memory>
#include <string>

#include "foliagraph/errors.hpp"

namespace foliagraph {

// Variables available to component expressions. On Cartesian grids rho and
// phi evaluate to sqrt(x^2+y^2) and atan2(y,x).
struct EvalEnv {
  double x = 0, y = 0, z = 0;
  double rho() const;
  double phi() const;
};

class Expr {
 public:
  virtual ~Expr() = default;
  virtual double eval(const EvalEnv& env) const = 0;
  virtual void print(std::string& out) const = 0;
  std::size_t offset = 0;  // 1-based source column, for error reports
};

using ExprPtr = std::shared_ptr<const Expr>;

// Recursive descent over:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ['-'] atom ['^' int]
//   atom   := number | var | func '(' expr ')' | '(' expr ')'
//           | 'piecewise(' cond ',' expr ',' expr ')'
//   cond   := var ('<'|'<='|'>'|'>=') number
// Left-associative, whitespace insensitive. Throws SyntaxError with a
// 1-based offset and the expected token set.
ExprPtr parse_expr(const std::string& source);

std::string print_expr(const ExprPtr& e);

double eval_expr(const ExprPtr& e, const EvalEnv& env);  // throws EvalError on division by zero

}  // namespace foliagraph
