// Recursive-descent parser for the expression grammar:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := atom ('^' exponent)?
//   atom   := number | ident | '(' expr ')' | func '(' expr ')'
//   exponent := signed-number | '(' signed-number ('/' number)? ')'
//
// Offsets in errors are 1-based byte positions.

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "projdens/errors.hpp"
#include "projdens/expr.hpp"

namespace projdens {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return factor();
  }

  Expr factor() {
    Expr base = atom();
    if (accept('^')) return pow(base, exponent());
    return base;
  }

  double exponent() {
    skip_ws();
    if (accept('(')) {
      double v = signed_number();
      if (accept('/')) {
        skip_ws();
        const std::size_t at = pos_;
        double d = number();
        if (d == 0.0) {
          pos_ = at;
          fail("zero denominator in exponent");
        }
        v /= d;
      }
      expect(')');
      return v;
    }
    return signed_number();
  }

  double signed_number() {
    skip_ws();
    double sign = 1.0;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      if (text_[pos_] == '-') sign = -1.0;
      ++pos_;
    }
    return sign * number();
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      pos_ = start;
      if (pos_ >= text_.size()) fail("expected number before end of input");
      fail("expected number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == digits) pos_ = save;
    }
    const std::string token(text_.substr(start, pos_ - start));
    return std::strtod(token.c_str(), nullptr);
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || index >= dim_) {
        throw DimensionError("variable " + std::string(name) + " outside chart dimension " +
                             std::to_string(dim_));
      }
      return Expr::variable(index);
    }

    static constexpr std::pair<std::string_view, Op> kFunctions[] = {
        {"sin", Op::kSin},   {"cos", Op::kCos},   {"exp", Op::kExp},
        {"log", Op::kLog},   {"sqrt", Op::kSqrt}, {"atan", Op::kAtan},
    };
    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return apply(op, arg);
      }
    }
    throw UnknownIdentifierError("unknown identifier '" + std::string(name) + "' at offset " +
                                 std::to_string(start + 1));
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int dim) { return Parser(text, dim).parse(); }

}  // namespace projdens
