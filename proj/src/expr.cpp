#include "darboux_lab/expr.hpp"

#include <cctype>

namespace dlab {

ParseError::ParseError(Kind kind, int line, int column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

struct Token {
  enum class Type { Number, Ident, Op, End };
  Type type = Type::End;
  std::string text;
  int column = 0;  // 1-based
};

class Parser {
 public:
  Parser(std::string_view text, int line, int column_offset)
      : text_(text), line_(line), offset_(column_offset) {
    tokenize();
  }

  ExprPtr parse() {
    auto e = parse_sum();
    if (peek().type != Token::Type::End) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, line_, t.column, msg);
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      const int col = offset_ + static_cast<int>(i) + 1;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        if (j < text_.size() && (text_[j] == '.' || std::isalpha(static_cast<unsigned char>(text_[j])))) {
          std::size_t k = j;
          while (k < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[k])) || text_[k] == '.' ||
                                      text_[k] == '_'))
            ++k;
          throw ParseError(ParseError::Kind::NonRationalLiteral, line_, col,
                           "non-rational literal '" + std::string(text_.substr(i, k - i)) +
                               "' (write exact fractions such as 1/2)");
        }
        tokens_.push_back({Token::Type::Number, std::string(text_.substr(i, j - i)), col});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        tokens_.push_back({Token::Type::Ident, std::string(text_.substr(i, j - i)), col});
        i = j;
      } else if (c == '.') {
        throw ParseError(ParseError::Kind::NonRationalLiteral, line_, col,
                         "non-rational literal (write exact fractions such as 1/2)");
      } else if (std::string_view("+-*^/()").find(c) != std::string_view::npos) {
        tokens_.push_back({Token::Type::Op, std::string(1, c), col});
        ++i;
      } else {
        throw ParseError(ParseError::Kind::Syntax, line_, col, std::string("unexpected character '") + c + "'");
      }
    }
    tokens_.push_back({Token::Type::End, "end of expression", offset_ + static_cast<int>(text_.size()) + 1});
  }

  const Token& peek() const { return tokens_[pos_]; }
  bool at_op(char c) const { return peek().type == Token::Type::Op && peek().text[0] == c; }
  Token next() { return tokens_[pos_++]; }

  static ExprPtr binary(Expr::Op op, ExprPtr a, ExprPtr b, const Token& t, int line) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    e->line = line;
    e->column = t.column;
    return e;
  }

  ExprPtr parse_sum() {
    auto lhs = parse_product();
    while (at_op('+') || at_op('-')) {
      const Token t = next();
      auto rhs = parse_product();
      lhs = binary(t.text[0] == '+' ? Expr::Op::Add : Expr::Op::Sub, lhs, rhs, t, line_);
    }
    return lhs;
  }

  ExprPtr parse_product() {
    auto lhs = parse_unary();
    while (at_op('*') || at_op('/')) {
      const Token t = next();
      if (t.text[0] == '/') fail(t, "division is only allowed inside rational literals such as 3/4");
      auto rhs = parse_unary();
      lhs = binary(Expr::Op::Mul, lhs, rhs, t, line_);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at_op('-') || at_op('+')) {
      const Token t = next();
      auto operand = parse_unary();
      if (t.text[0] == '+') return operand;
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::Neg;
      e->lhs = std::move(operand);
      e->line = line_;
      e->column = t.column;
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    auto base = parse_primary();
    if (at_op('^')) {
      const Token t = next();
      const Token exp = next();
      if (exp.type != Token::Type::Number) fail(exp, "exponent must be a positive integer");
      if (at_op('/')) fail(peek(), "exponent must be a positive integer");
      const unsigned long v = std::stoul(exp.text);
      if (v == 0 || v > 1000) fail(exp, "exponent must be a positive integer (at most 1000)");
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::Pow;
      e->lhs = std::move(base);
      e->exponent = static_cast<unsigned>(v);
      e->line = line_;
      e->column = t.column;
      return e;
    }
    return base;
  }

  ExprPtr parse_primary() {
    const Token t = next();
    auto e = std::make_shared<Expr>();
    e->line = line_;
    e->column = t.column;
    if (t.type == Token::Type::Number) {
      e->op = Expr::Op::Number;
      std::string literal = t.text;
      // A rational literal p/q binds tighter than any operator.
      if (at_op('/') && tokens_[pos_ + 1].type == Token::Type::Number) {
        next();
        literal += "/" + next().text;
      }
      try {
        e->value = Rational::parse(literal);
      } catch (const DivisionByZero&) {
        fail(t, "zero denominator in '" + literal + "'", ParseError::Kind::NonRationalLiteral);
      }
      return e;
    }
    if (t.type == Token::Type::Ident) {
      e->op = Expr::Op::Symbol;
      e->name = t.text;
      return e;
    }
    if (t.type == Token::Type::Op && t.text[0] == '(') {
      auto inner = parse_sum();
      if (!at_op(')')) fail(peek(), "expected ')'");
      next();
      return inner;
    }
    fail(t, t.type == Token::Type::End ? "unexpected end of expression" : "unexpected '" + t.text + "'");
  }

  std::string_view text_;
  int line_;
  int offset_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(std::string_view text, int line, int column_offset) {
  return Parser(text, line, column_offset).parse();
}

Poly evaluate(const Expr& e, const SymbolTable& symbols) {
  const VarList& vars = symbols.vars;
  switch (e.op) {
    case Expr::Op::Number:
      return Poly::constant(vars, e.value);
    case Expr::Op::Symbol: {
      if (auto idx = vars.index_of(e.name)) return Poly::variable(vars, *idx);
      if (symbols.zeroed.count(e.name)) return Poly(vars);
      if (auto it = symbols.params.find(e.name); it != symbols.params.end()) return Poly::constant(vars, it->second);
      throw ParseError(ParseError::Kind::UnboundParameter, e.line, e.column, "unbound symbol '" + e.name + "'");
    }
    case Expr::Op::Add:
      return evaluate(*e.lhs, symbols) + evaluate(*e.rhs, symbols);
    case Expr::Op::Sub:
      return evaluate(*e.lhs, symbols) - evaluate(*e.rhs, symbols);
    case Expr::Op::Mul:
      return evaluate(*e.lhs, symbols) * evaluate(*e.rhs, symbols);
    case Expr::Op::Pow:
      return evaluate(*e.lhs, symbols).pow(e.exponent);
    case Expr::Op::Neg:
      return -evaluate(*e.lhs, symbols);
  }
  throw Error("corrupt expression tree");
}

Poly parse_poly(std::string_view text, const VarList& vars,
                const std::map<std::string, Rational, std::less<>>& params) {
  const auto e = parse_expr(text);
  SymbolTable symbols{vars, params, {}};
  return evaluate(*e, symbols);
}

}  // namespace dlab
