#pragma once

// Recursive-descent parser for the scalar expression grammar:
//
//   expr     := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := ("-")? power
//   power    := atom ("^" rational)?
//   atom     := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//   rational := INTEGER | "(" ["-"] INTEGER ["/" INTEGER] ")"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geomom/expr.hpp"

namespace geomom {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Names bound to the two parameter slots; any other identifier is a constant.
using ParamNames = std::array<std::string, 2>;

inline const ParamNames& default_param_names() {
  static const ParamNames names{"u", "v"};
  return names;
}

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, const ParamNames& params) : src_(src), params_(params) {}

  Expr parse() {
    skip();
    if (pos_ >= src_.size()) fail("empty expression");
    Expr e = expr();
    skip();
    if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = raw::binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = raw::binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = raw::binary(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = raw::binary(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return raw::unary(Op::Neg, power());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return raw::pow(base, rational());
    return base;
  }

  int integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      pos_ = start;
      fail("exponent must be an integer or a parenthesised rational");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    return value;
  }

  Rational rational() {
    if (accept('(')) {
      const bool negative = accept('-');
      int num = integer();
      int den = 1;
      if (accept('/')) {
        const std::size_t at = pos_;
        den = integer();
        if (den == 0) {
          pos_ = at;
          fail("zero denominator in exponent");
        }
      }
      expect(')');
      return Rational(negative ? -num : num, den);
    }
    return Rational(integer());
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text == ".") {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    return raw::number(value);
  }

  Expr atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      skip();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        auto fn = fn_from_name(name);
        if (!fn) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        Expr arg = expr();
        expect(')');
        return raw::call(*fn, arg);
      }
      if (fn_from_name(name)) {
        pos_ = start;
        fail("function '" + name + "' used without argument");
      }
      for (int i = 0; i < 2; ++i) {
        if (name == params_[i]) return raw::param(i, name);
      }
      return raw::constant(name);
    }
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view src_;
  const ParamNames& params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `source` into an unfolded tree. Identifiers matching `params` become
/// parameter nodes; all others are constants resolved at evaluation time.
inline Expr parse(std::string_view source, const ParamNames& params = default_param_names()) {
  return detail::Parser(source, params).parse();
}

}  // namespace geomom
