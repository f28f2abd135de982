#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "darboux_lab/poly.hpp"

namespace dlab {

class ParseError : public Error {
 public:
  enum class Kind {
    Syntax,
    NonRationalLiteral,
    UnboundParameter,
    UnknownVariable,
    DuplicateEquation,
    MissingEquation,
    DuplicateDeclaration,
  };

  ParseError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  // Message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  int line_;
  int column_;
  std::string detail_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Parsed polynomial expression. Symbols are resolved at evaluation time so
// the same tree can be re-read with a parameter promoted to a variable.
struct Expr {
  enum class Op { Number, Symbol, Add, Sub, Mul, Pow, Neg };
  Op op = Op::Number;
  Rational value;        // Number
  std::string name;      // Symbol
  unsigned exponent = 0; // Pow
  ExprPtr lhs, rhs;
  int line = 0;
  int column = 0;
};

// Parses `text` (one expression); `line` and `column_offset` position error
// messages inside a larger file.
ExprPtr parse_expr(std::string_view text, int line = 1, int column_offset = 0);

struct SymbolTable {
  VarList vars;
  std::map<std::string, Rational, std::less<>> params;
  // Symbols that evaluate to zero (variables removed by plane restriction).
  std::set<std::string, std::less<>> zeroed;
};

Poly evaluate(const Expr& e, const SymbolTable& symbols);

// Parses a polynomial over `vars`, e.g. "2*x^2 - x*y + 1/2"; parameters may
// be referenced by name.
Poly parse_poly(std::string_view text, const VarList& vars,
                const std::map<std::string, Rational, std::less<>>& params = {});

}  // namespace dlab
