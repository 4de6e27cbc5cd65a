#include "optswitch/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace optswitch {

struct Expr::Node {
  Kind kind = Kind::Literal;
  double value = 0.0;  // Literal only
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Kind;

NodePtr make_node(Kind kind, double value, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->value = value;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_unary(Kind k) {
  return k == Kind::Neg || k == Kind::Abs || k == Kind::Exp || k == Kind::Log;
}

bool is_binary(Kind k) {
  return k == Kind::Add || k == Kind::Sub || k == Kind::Mul || k == Kind::Div ||
         k == Kind::Min || k == Kind::Max || k == Kind::Pow;
}

// ---- lexer ----

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };

struct Token {
  Tok type = Tok::End;
  std::size_t offset = 0;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    cur_ = Token{};
    cur_.offset = pos_;
    if (pos_ >= src_.size()) {
      cur_.type = Tok::End;
      return;
    }
    char c = src_[pos_];
    switch (c) {
      case '+': cur_.type = Tok::Plus; ++pos_; return;
      case '-': cur_.type = Tok::Minus; ++pos_; return;
      case '*': cur_.type = Tok::Star; ++pos_; return;
      case '/': cur_.type = Tok::Slash; ++pos_; return;
      case '(': cur_.type = Tok::LParen; ++pos_; return;
      case ')': cur_.type = Tok::RParen; ++pos_; return;
      case ',': cur_.type = Tok::Comma; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
        if (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) {
          ++exp;
          while (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) ++exp;
          end = exp;
        }
      }
      double value = 0.0;
      auto res = std::from_chars(src_.data() + pos_, src_.data() + end, value);
      if (res.ec != std::errc{} || res.ptr != src_.data() + end) {
        throw Error(ErrorCode::UnexpectedToken,
                    "malformed number at offset " + std::to_string(pos_));
      }
      cur_.type = Tok::Number;
      cur_.number = value;
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      cur_.type = Tok::Ident;
      cur_.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return;
    }
    throw Error(ErrorCode::UnexpectedToken,
                std::string("unexpected character '") + c + "' at offset " + std::to_string(pos_));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_;
};

// ---- recursive-descent parser ----

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  NodePtr run() {
    NodePtr e = sum();
    const Token& t = lex_.peek();
    if (t.type != Tok::End) {
      if (t.type == Tok::RParen)
        throw Error(ErrorCode::UnbalancedParenthesis,
                    "unmatched ')' at offset " + std::to_string(t.offset));
      throw Error(ErrorCode::UnexpectedToken,
                  "trailing input at offset " + std::to_string(t.offset));
    }
    return e;
  }

 private:
  NodePtr sum() {
    NodePtr left = term();
    for (;;) {
      Tok t = lex_.peek().type;
      if (t != Tok::Plus && t != Tok::Minus) return left;
      lex_.take();
      NodePtr right = term();
      left = make_node(t == Tok::Plus ? Kind::Add : Kind::Sub, 0.0, left, right);
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      Tok t = lex_.peek().type;
      if (t != Tok::Star && t != Tok::Slash) return left;
      lex_.take();
      NodePtr right = unary();
      left = make_node(t == Tok::Star ? Kind::Mul : Kind::Div, 0.0, left, right);
    }
  }

  NodePtr unary() {
    if (lex_.peek().type == Tok::Minus) {
      lex_.take();
      return make_node(Kind::Neg, 0.0, unary(), nullptr);
    }
    return primary();
  }

  NodePtr primary() {
    Token t = lex_.take();
    switch (t.type) {
      case Tok::Number:
        return make_node(Kind::Literal, t.number, nullptr, nullptr);
      case Tok::LParen: {
        NodePtr e = sum();
        expect_rparen(t.offset);
        return e;
      }
      case Tok::Ident:
        return identifier(t);
      case Tok::End:
        throw Error(ErrorCode::EmptyInput,
                    "expected expression at offset " + std::to_string(t.offset));
      case Tok::RParen:
        throw Error(ErrorCode::UnbalancedParenthesis,
                    "unmatched ')' at offset " + std::to_string(t.offset));
      default:
        throw Error(ErrorCode::UnexpectedToken,
                    "expected value at offset " + std::to_string(t.offset));
    }
  }

  NodePtr identifier(const Token& t) {
    if (t.text == "t") return make_node(Kind::VarT, 0.0, nullptr, nullptr);
    if (t.text == "x") return make_node(Kind::VarX, 0.0, nullptr, nullptr);

    Kind kind;
    int arity;
    if (t.text == "min") { kind = Kind::Min; arity = 2; }
    else if (t.text == "max") { kind = Kind::Max; arity = 2; }
    else if (t.text == "pow") { kind = Kind::Pow; arity = 2; }
    else if (t.text == "abs") { kind = Kind::Abs; arity = 1; }
    else if (t.text == "exp") { kind = Kind::Exp; arity = 1; }
    else if (t.text == "log") { kind = Kind::Log; arity = 1; }
    else {
      throw Error(ErrorCode::UnknownIdentifier,
                  "unknown identifier '" + t.text + "' at offset " + std::to_string(t.offset));
    }

    const Token& open = lex_.peek();
    if (open.type != Tok::LParen)
      throw Error(ErrorCode::UnexpectedToken,
                  "expected '(' after '" + t.text + "' at offset " + std::to_string(open.offset));
    std::size_t open_off = open.offset;
    lex_.take();

    NodePtr first = sum();
    NodePtr second;
    if (arity == 2) {
      const Token& comma = lex_.peek();
      if (comma.type != Tok::Comma)
        throw Error(ErrorCode::UnexpectedToken,
                    "expected ',' in call to '" + t.text + "' at offset " +
                        std::to_string(comma.offset));
      lex_.take();
      second = sum();
    }
    expect_rparen(open_off);
    return make_node(kind, 0.0, first, second);
  }

  void expect_rparen(std::size_t open_offset) {
    const Token& t = lex_.peek();
    if (t.type == Tok::End)
      throw Error(ErrorCode::UnbalancedParenthesis,
                  "'(' at offset " + std::to_string(open_offset) + " is never closed; input ends at offset " +
                      std::to_string(t.offset));
    if (t.type != Tok::RParen)
      throw Error(ErrorCode::UnexpectedToken,
                  "expected ')' at offset " + std::to_string(t.offset));
    lex_.take();
  }

  Lexer lex_;
};

// ---- printing ----

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    default: return 4;  // literals, variables, calls
  }
}

std::string format_literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Expr::Node& n, std::string& out);

void print_child(const Expr::Node& child, int min_prec, std::string& out) {
  if (precedence(child.kind) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Literal: out += format_literal(n.value); return;
    case Kind::VarT: out += 't'; return;
    case Kind::VarX: out += 'x'; return;
    case Kind::Neg:
      out += '-';
      print_child(*n.a, 3, out);
      return;
    // left-associative: right children at equal precedence need parens
    case Kind::Add:
      print_child(*n.a, 1, out);
      out += " + ";
      print_child(*n.b, 2, out);
      return;
    case Kind::Sub:
      print_child(*n.a, 1, out);
      out += " - ";
      print_child(*n.b, 2, out);
      return;
    case Kind::Mul:
      print_child(*n.a, 2, out);
      out += "*";
      print_child(*n.b, 3, out);
      return;
    case Kind::Div:
      print_child(*n.a, 2, out);
      out += "/";
      print_child(*n.b, 3, out);
      return;
    case Kind::Min: out += "min"; break;
    case Kind::Max: out += "max"; break;
    case Kind::Pow: out += "pow"; break;
    case Kind::Abs: out += "abs"; break;
    case Kind::Exp: out += "exp"; break;
    case Kind::Log: out += "log"; break;
  }
  out += '(';
  print_node(*n.a, out);
  if (n.b) {
    out += ", ";
    print_node(*n.b, out);
  }
  out += ')';
}

[[noreturn]] void eval_fail(ErrorCode code, const Expr::Node& n, const char* what) {
  std::string sub;
  print_node(n, sub);
  throw Error(code, std::string(what) + " in subexpression '" + sub + "'");
}

double eval_node(const Expr::Node& n, double t, double x) {
  double r;
  switch (n.kind) {
    case Kind::Literal: return n.value;
    case Kind::VarT: return t;
    case Kind::VarX: return x;
    case Kind::Neg: return -eval_node(*n.a, t, x);
    case Kind::Add: r = eval_node(*n.a, t, x) + eval_node(*n.b, t, x); break;
    case Kind::Sub: r = eval_node(*n.a, t, x) - eval_node(*n.b, t, x); break;
    case Kind::Mul: r = eval_node(*n.a, t, x) * eval_node(*n.b, t, x); break;
    case Kind::Div: {
      double num = eval_node(*n.a, t, x);
      double den = eval_node(*n.b, t, x);
      if (den == 0.0) eval_fail(ErrorCode::DivisionByZero, n, "division by zero");
      r = num / den;
      break;
    }
    case Kind::Min: r = std::fmin(eval_node(*n.a, t, x), eval_node(*n.b, t, x)); break;
    case Kind::Max: r = std::fmax(eval_node(*n.a, t, x), eval_node(*n.b, t, x)); break;
    case Kind::Pow: r = std::pow(eval_node(*n.a, t, x), eval_node(*n.b, t, x)); break;
    case Kind::Abs: r = std::fabs(eval_node(*n.a, t, x)); break;
    case Kind::Exp: r = std::exp(eval_node(*n.a, t, x)); break;
    case Kind::Log: {
      double arg = eval_node(*n.a, t, x);
      if (arg <= 0.0) eval_fail(ErrorCode::LogOfNonPositive, n, "log of non-positive value");
      r = std::log(arg);
      break;
    }
    default: r = 0.0; break;
  }
  if (!std::isfinite(r)) eval_fail(ErrorCode::NonFiniteResult, n, "non-finite result");
  return r;
}

bool nodes_equal(const Expr::Node* a, const Expr::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == Kind::Literal) {
    // bit-level so that -0 and 0 literals stay distinguishable
    return a->value == b->value && std::signbit(a->value) == std::signbit(b->value);
  }
  return nodes_equal(a->a.get(), b->a.get()) && nodes_equal(a->b.get(), b->b.get());
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Parser p(text);
  return Expr(p.run());
}

Expr Expr::literal(double value) { return Expr(make_node(Kind::Literal, value, nullptr, nullptr)); }
Expr Expr::var_t() { return Expr(make_node(Kind::VarT, 0.0, nullptr, nullptr)); }
Expr Expr::var_x() { return Expr(make_node(Kind::VarX, 0.0, nullptr, nullptr)); }

Expr Expr::unary(Kind kind, Expr a) {
  if (!is_unary(kind)) throw Error(ErrorCode::UnexpectedToken, "not a unary operator");
  return Expr(make_node(kind, 0.0, a.root_, nullptr));
}

Expr Expr::binary(Kind kind, Expr a, Expr b) {
  if (!is_binary(kind)) throw Error(ErrorCode::UnexpectedToken, "not a binary operator");
  return Expr(make_node(kind, 0.0, a.root_, b.root_));
}

double Expr::eval(double t, double x) const {
  if (!root_) throw Error(ErrorCode::EmptyInput, "evaluating empty expression");
  return eval_node(*root_, t, x);
}

std::string Expr::print() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::operator==(const Expr& other) const { return nodes_equal(root_.get(), other.root_.get()); }

Expr::Kind Expr::kind() const { return root_ ? root_->kind : Kind::Literal; }

Expr shift_expr(const Expr& e, double c) {
  return Expr::binary(Expr::Kind::Add, e, Expr::literal(c));
}

}  // namespace optswitch
