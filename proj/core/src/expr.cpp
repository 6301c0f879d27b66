#include "osid/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace osid {

namespace {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
  Kind kind;
  size_t offset;
  std::string text;  // Number / Ident
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const size_t at = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) text += src[i++];
      if (i < src.size() && src[i] == '.') {
        text += src[i++];
        if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i])))
          throw SyntaxError(i, "digit after decimal point");
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) text += src[i++];
      }
      out.push_back({Token::Kind::Number, at, text});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        text += src[i++];
      out.push_back({Token::Kind::Ident, at, text});
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '+': kind = Token::Kind::Plus; break;
      case '-': kind = Token::Kind::Minus; break;
      case '*': kind = Token::Kind::Star; break;
      case '/': kind = Token::Kind::Slash; break;
      case '^': kind = Token::Kind::Caret; break;
      case '(': kind = Token::Kind::LParen; break;
      case ')': kind = Token::Kind::RParen; break;
      case ',': kind = Token::Kind::Comma; break;
      default:
        throw SyntaxError(at, "a valid token (got '" + std::string(1, c) + "')");
    }
    out.push_back({kind, at, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::Kind::End, src.size(), ""});
  return out;
}

const std::map<std::string, size_t> kFunctions = {
    {"abs", 1}, {"min", 2}, {"max", 2}, {"sin", 1}, {"cos", 1}, {"exp", 1}, {"sqrt", 1},
};

class Parser {
 public:
  Parser(const std::string& src, int dim) : tokens_(lex(src)), dim_(dim) {}

  int run(std::vector<FunctionAst::Node>& out) {
    const int root = additive();
    expect(Token::Kind::End, "end of input");
    out = std::move(nodes_);
    return root;
  }

 private:
  using Op = FunctionAst::Node::Op;

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) throw SyntaxError(peek().offset, what);
    ++pos_;
  }

  int add_node(FunctionAst::Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  int binary(Op op, int a, int b) {
    FunctionAst::Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    return add_node(std::move(n));
  }

  int additive() {
    int lhs = multiplicative();
    while (true) {
      if (peek().kind == Token::Kind::Plus) {
        take();
        lhs = binary(Op::Add, lhs, multiplicative());
      } else if (peek().kind == Token::Kind::Minus) {
        take();
        lhs = binary(Op::Sub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  int multiplicative() {
    int lhs = unary();
    while (true) {
      if (peek().kind == Token::Kind::Star) {
        take();
        lhs = binary(Op::Mul, lhs, unary());
      } else if (peek().kind == Token::Kind::Slash) {
        take();
        lhs = binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (peek().kind == Token::Kind::Minus) {
      take();
      FunctionAst::Node n;
      n.op = Op::Neg;
      n.a = unary();
      return add_node(std::move(n));
    }
    return power();
  }

  int power() {
    int base = atom();
    if (peek().kind != Token::Kind::Caret) return base;
    take();
    bool neg = false;
    if (peek().kind == Token::Kind::Minus) {
      take();
      neg = true;
    }
    if (peek().kind != Token::Kind::Number || peek().text.find('.') != std::string::npos)
      throw SyntaxError(peek().offset, "integer exponent");
    const Token t = take();
    FunctionAst::Node n;
    n.op = Op::Pow;
    n.a = base;
    n.exponent = std::stol(t.text);
    if (neg) n.exponent = -n.exponent;
    return add_node(std::move(n));
  }

  int atom() {
    const Token t = peek();
    switch (t.kind) {
      case Token::Kind::Number: {
        take();
        FunctionAst::Node n;
        n.op = Op::Literal;
        n.literal = rat_parse(t.text);
        return add_node(std::move(n));
      }
      case Token::Kind::LParen: {
        take();
        int inner = additive();
        expect(Token::Kind::RParen, "')'");
        return inner;
      }
      case Token::Kind::Ident:
        return identifier();
      default:
        throw SyntaxError(t.offset, "a number, variable, function call or '('");
    }
  }

  int identifier() {
    const Token t = take();
    auto fn = kFunctions.find(t.text);
    if (peek().kind == Token::Kind::LParen) {
      if (fn == kFunctions.end()) throw UnknownIdentifier(t.offset, t.text);
      take();
      std::vector<int> args;
      args.push_back(additive());
      while (peek().kind == Token::Kind::Comma) {
        take();
        args.push_back(additive());
      }
      expect(Token::Kind::RParen, "')'");
      if (args.size() != fn->second)
        throw ArityMismatch(t.offset, t.text, fn->second, args.size());
      FunctionAst::Node n;
      if (t.text == "abs") n.op = Op::Abs;
      else if (t.text == "min") n.op = Op::Min;
      else if (t.text == "max") n.op = Op::Max;
      else if (t.text == "sin") n.op = Op::Sin;
      else if (t.text == "cos") n.op = Op::Cos;
      else if (t.text == "exp") n.op = Op::Exp;
      else n.op = Op::Sqrt;
      n.a = args[0];
      if (args.size() > 1) n.b = args[1];
      return add_node(std::move(n));
    }
    // Variable: x<index>, 1-based.
    if (t.text.size() >= 2 && t.text[0] == 'x' &&
        std::all_of(t.text.begin() + 1, t.text.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int idx = std::stoi(t.text.substr(1));
      if (idx < 1) throw UnknownIdentifier(t.offset, t.text);
      if (idx > dim_) throw DimensionExceeded(t.offset, idx, dim_);
      FunctionAst::Node n;
      n.op = Op::Var;
      n.var = idx;
      return add_node(std::move(n));
    }
    throw UnknownIdentifier(t.offset, t.text);
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int dim_;
  std::vector<FunctionAst::Node> nodes_;
};

double eval_node(const std::vector<FunctionAst::Node>& nodes, int idx,
                 std::span<const double> point) {
  using Op = FunctionAst::Node::Op;
  const FunctionAst::Node& n = nodes[idx];
  switch (n.op) {
    case Op::Literal:
      return n.literal.get_d();
    case Op::Var:
      return point[n.var - 1];
    case Op::Add:
      return eval_node(nodes, n.a, point) + eval_node(nodes, n.b, point);
    case Op::Sub:
      return eval_node(nodes, n.a, point) - eval_node(nodes, n.b, point);
    case Op::Mul:
      return eval_node(nodes, n.a, point) * eval_node(nodes, n.b, point);
    case Op::Div: {
      const double den = eval_node(nodes, n.b, point);
      if (den == 0) throw DomainError("division by zero");
      return eval_node(nodes, n.a, point) / den;
    }
    case Op::Pow: {
      double base = eval_node(nodes, n.a, point);
      long e = n.exponent;
      if (e < 0) {
        if (base == 0) throw DomainError("zero raised to a negative power");
        base = 1.0 / base;
        e = -e;
      }
      double result = 1.0;
      while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
      }
      return result;
    }
    case Op::Neg:
      return -eval_node(nodes, n.a, point);
    case Op::Abs:
      return std::fabs(eval_node(nodes, n.a, point));
    case Op::Min:
      return std::fmin(eval_node(nodes, n.a, point), eval_node(nodes, n.b, point));
    case Op::Max:
      return std::fmax(eval_node(nodes, n.a, point), eval_node(nodes, n.b, point));
    case Op::Sin:
      return std::sin(eval_node(nodes, n.a, point));
    case Op::Cos:
      return std::cos(eval_node(nodes, n.a, point));
    case Op::Exp:
      return std::exp(eval_node(nodes, n.a, point));
    case Op::Sqrt: {
      const double arg = eval_node(nodes, n.a, point);
      if (arg < 0) throw DomainError("sqrt of a negative value");
      return std::sqrt(arg);
    }
  }
  throw DomainError("unreachable node");
}

int precedence(FunctionAst::Node::Op op) {
  using Op = FunctionAst::Node::Op;
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

// Exact decimal rendering when the denominator is 2^a * 5^b, else "p/q"
// (which reparses as a division, printing identically from then on).
std::string literal_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  mpz_class den = r.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return rat_str(r);
  const unsigned k = std::max(twos, fives);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, k);
  mpz_class scaled = r.get_num() * (pow10 / r.get_den());
  std::string digits = scaled.get_str();
  bool neg = false;
  if (!digits.empty() && digits[0] == '-') {
    neg = true;
    digits = digits.substr(1);
  }
  while (digits.size() <= k) digits.insert(digits.begin(), '0');
  digits.insert(digits.size() - k, ".");
  return (neg ? "-" : "") + digits;
}

void print_node(const std::vector<FunctionAst::Node>& nodes, int idx, std::string& out) {
  using Op = FunctionAst::Node::Op;
  const FunctionAst::Node& n = nodes[idx];
  auto child = [&](int c, bool parens) {
    if (parens) out += "(";
    print_node(nodes, c, out);
    if (parens) out += ")";
  };
  const int prec = precedence(n.op);
  auto left_parens = [&](int c) { return precedence(nodes[c].op) < prec; };
  auto right_parens = [&](int c) { return precedence(nodes[c].op) <= prec; };
  switch (n.op) {
    case Op::Literal:
      out += literal_str(n.literal);
      return;
    case Op::Var:
      out += "x" + std::to_string(n.var);
      return;
    case Op::Add:
      // Right side keeps parens at equal precedence so the left-associative
      // reparse yields the same tree.
      child(n.a, left_parens(n.a));
      out += " + ";
      child(n.b, right_parens(n.b));
      return;
    case Op::Sub:
      child(n.a, left_parens(n.a));
      out += " - ";
      child(n.b, right_parens(n.b));
      return;
    case Op::Mul:
      child(n.a, left_parens(n.a));
      out += "*";
      child(n.b, right_parens(n.b));
      return;
    case Op::Div:
      child(n.a, left_parens(n.a));
      out += "/";
      child(n.b, right_parens(n.b));
      return;
    case Op::Neg:
      out += "-";
      child(n.a, precedence(nodes[n.a].op) < prec);
      return;
    case Op::Pow:
      child(n.a, precedence(nodes[n.a].op) < 5);
      out += "^";
      out += std::to_string(n.exponent);
      return;
    case Op::Abs:
    case Op::Min:
    case Op::Max:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Sqrt: {
      const char* name = n.op == Op::Abs   ? "abs"
                         : n.op == Op::Min ? "min"
                         : n.op == Op::Max ? "max"
                         : n.op == Op::Sin ? "sin"
                         : n.op == Op::Cos ? "cos"
                         : n.op == Op::Exp ? "exp"
                                           : "sqrt";
      out += name;
      out += "(";
      print_node(nodes, n.a, out);
      if (n.b >= 0) {
        out += ", ";
        print_node(nodes, n.b, out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

double FunctionAst::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim_)
    throw ConfigError("point dimension " + std::to_string(point.size()) +
                      " does not match function dimension " + std::to_string(dim_));
  const double value = eval_node(nodes_, root_, point);
  if (!std::isfinite(value)) throw DomainError("non-finite function value");
  if (value < 0) throw NegativeValue(std::vector<double>(point.begin(), point.end()), value);
  return value;
}

std::string FunctionAst::str() const {
  std::string out;
  print_node(nodes_, root_, out);
  return out;
}

FunctionAst parse_function(const std::string& expr, int dimension) {
  if (expr.empty()) throw SyntaxError(0, "nonempty expression");
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  FunctionAst ast;
  ast.dim_ = dimension;
  ast.root_ = Parser(expr, dimension).run(ast.nodes_);
  return ast;
}

}  // namespace osid
