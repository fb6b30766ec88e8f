#pragma once

// Recursive-descent parser for polynomial text:
//
//   expr     := term (('+'|'-') term)*
//   term     := ['-'] factor ('*' factor)*
//   factor   := atom ('^' uint)?
//   atom     := rational | 'i' | 'z' uint | 'conj(z' uint ')' | '(' expr ')'
//   rational := int ('/' uint)?
//
// Whitespace is insignificant. A leading unary minus on a term is accepted so
// that the canonical printer's output parses back.

#include <cctype>
#include <string>
#include <string_view>

#include "lgheat/errors.hpp"
#include "lgheat/poly.hpp"

namespace lgheat {

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, int nvars) : text_(text), nvars_(nvars) {}

  MixedPolynomial parse() {
    MixedPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::Parse) const {
    throw ParseError(code, msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  mpz_class uint_literal() {
    if (!at_digit()) fail("expected unsigned integer");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
  }

  MixedPolynomial expr() {
    MixedPolynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MixedPolynomial term() {
    const bool negate = accept('-');
    MixedPolynomial acc = factor();
    while (accept('*')) acc *= factor();
    return negate ? -acc : acc;
  }

  MixedPolynomial factor() {
    MixedPolynomial base = atom();
    if (accept('^')) {
      if (peek('-')) fail("negative exponent", ErrorCode::NegativeExponent);
      const mpz_class e = uint_literal();
      if (e > 255) fail("exponent too large");
      base = pow(base, static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  MixedPolynomial variable(bool conjugate) {
    const std::size_t at = pos_;
    const mpz_class idx = uint_literal();
    if (idx < 1 || idx > nvars_) {
      pos_ = at;
      fail("variable z" + idx.get_str() + " out of range for n=" + std::to_string(nvars_), ErrorCode::VariableOutOfRange);
    }
    return MixedPolynomial::variable(nvars_, static_cast<int>(idx.get_si()) - 1, conjugate);
  }

  MixedPolynomial atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MixedPolynomial inner = expr();
      expect(')');
      return inner;
    }
    if (c == 'i') {
      ++pos_;
      return MixedPolynomial::constant(nvars_, GaussianRational::imaginary_unit());
    }
    if (c == 'z') {
      ++pos_;
      return variable(false);
    }
    if (text_.substr(pos_, 5) == "conj(") {
      pos_ += 5;
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != 'z') fail("expected 'z' inside conj(");
      ++pos_;
      MixedPolynomial v = variable(true);
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = uint_literal();
      mpz_class den = 1;
      if (accept('/')) {
        den = uint_literal();
        if (den == 0) fail("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return MixedPolynomial::constant(nvars_, GaussianRational(r));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int nvars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses polynomial text in variables z1..zn.
inline MixedPolynomial parse_polynomial(std::string_view text, int nvars) {
  if (nvars < 1 || nvars > Monomial::kMaxVariables) {
    throw Error(ErrorCode::InvalidArgument, "variable count must be in [1, 8]");
  }
  return detail::PolyParser(text, nvars).parse();
}

/// Largest k such that zk or conj(zk) occurs in the text (0 if none).
inline int infer_variable_count(std::string_view text) {
  int best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'z') continue;
    std::size_t j = i + 1;
    int v = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      v = v * 10 + (text[j] - '0');
      if (v > 1000) break;
      ++j;
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace lgheat
