#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "poly.hpp"

namespace posicert {

// Position-bearing syntax error for the polynomial grammar.
struct ParseError : std::runtime_error {
  ParseError(int line_, int column_, const std::string &msg)
      : std::runtime_error(std::to_string(line_) + ":" +
                           std::to_string(column_) + ": " + msg),
        line(line_), column(column_) {}
  int line;
  int column;
};

namespace detail {

// Grammar:
//   expr    := ['+'|'-'] term { ('+'|'-') term }
//   term    := factor { '*' factor }
//   factor  := primary [ '^' NAT ]
//   primary := NAT [ '/' NAT ] | 'x' NAT | '(' expr ')'
// Implicit multiplication is not part of the language, and '/' only forms
// rational literals.
class PolyParser {
public:
  PolyParser(std::string_view text, std::uint32_t nvars)
      : text_(text), nvars_(nvars) {}

  Poly parse() {
    skip_space();
    if (at_end())
      fail("empty input");
    Poly p = parse_expr();
    skip_space();
    if (!at_end())
      fail("unexpected trailing input");
    return p;
  }

private:
  Poly parse_expr() {
    skip_space();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      advance();
    }
    Poly acc = parse_term();
    if (negate)
      acc = -acc;
    while (true) {
      skip_space();
      if (at_end())
        break;
      const char c = peek();
      if (c != '+' && c != '-')
        break;
      advance();
      Poly t = parse_term();
      acc = c == '+' ? acc + t : acc - t;
    }
    return acc;
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    while (true) {
      skip_space();
      if (at_end())
        break;
      const char c = peek();
      if (c == '*') {
        advance();
        acc = acc * parse_factor();
      } else if (c == '/') {
        fail("division is only allowed inside rational literals");
      } else {
        break;
      }
    }
    return acc;
  }

  Poly parse_factor() {
    Poly base = parse_primary();
    skip_space();
    if (!at_end() && peek() == '^') {
      advance();
      skip_space();
      if (at_end() || !is_digit(peek()))
        fail("expected a nonnegative integer exponent after '^'");
      const unsigned long e = parse_small_nat();
      base = base.pow(e);
    }
    return base;
  }

  Poly parse_primary() {
    skip_space();
    if (at_end())
      fail("expected a number, variable, or '('");
    const char c = peek();
    if (is_digit(c)) {
      Int num = parse_integer();
      skip_space();
      if (!at_end() && peek() == '/') {
        advance();
        skip_space();
        if (at_end() || !is_digit(peek()))
          fail("expected an integer denominator");
        const int dline = line_, dcol = col_;
        Int den = parse_integer();
        if (sgn(den) == 0)
          throw ParseError(dline, dcol, "zero denominator");
        Rat r(num, den);
        r.canonicalize();
        return Poly::constant(nvars_, r);
      }
      return Poly::constant(nvars_, Rat(num));
    }
    if (c == 'x') {
      const int vline = line_, vcol = col_;
      advance();
      if (at_end() || !is_digit(peek()))
        throw ParseError(vline, vcol, "expected a variable index after 'x'");
      const unsigned long idx = parse_small_nat();
      if (idx < 1 || idx > nvars_)
        throw ParseError(vline, vcol,
                         "variable index out of range: x" +
                             std::to_string(idx) + " (nvars = " +
                             std::to_string(nvars_) + ")");
      return Poly::variable(nvars_, static_cast<std::uint32_t>(idx));
    }
    if (c == '(') {
      advance();
      Poly p = parse_expr();
      skip_space();
      if (at_end() || peek() != ')')
        fail("expected ')'");
      advance();
      return p;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Int parse_integer() {
    std::string digits;
    while (!at_end() && is_digit(peek())) {
      digits.push_back(peek());
      advance();
    }
    return Int(digits);
  }

  unsigned long parse_small_nat() {
    const int nline = line_, ncol = col_;
    Int v = parse_integer();
    if (!v.fits_ulong_p())
      throw ParseError(nline, ncol, "integer too large here");
    return v.get_ui();
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
        advance();
      else
        break;
    }
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(line_, col_, msg);
  }

  std::string_view text_;
  std::uint32_t nvars_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace detail

inline Poly parse_poly(std::string_view text, std::uint32_t nvars) {
  return detail::PolyParser(text, nvars).parse();
}

// Deterministic rendering: descending graded-lex term order, lowest-terms
// coefficients, explicit '*'. parse_poly(print_poly(p), p.nvars()) == p.
inline std::string print_poly(const Poly &p) {
  if (p.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (const auto &t : p.terms()) {
    const bool neg = is_negative(t.coeff);
    if (first) {
      if (neg)
        out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    const Rat mag = rat_abs(t.coeff);
    if (t.mon.is_constant()) {
      out += rat_to_string(mag);
      continue;
    }
    bool printed = false;
    if (mag != 1) {
      out += rat_to_string(mag);
      printed = true;
    }
    for (std::size_t i = 0; i < t.mon.nvars(); ++i) {
      const auto e = t.mon[i];
      if (e == 0)
        continue;
      if (printed)
        out += "*";
      out += "x" + std::to_string(i + 1);
      if (e > 1)
        out += "^" + std::to_string(e);
      printed = true;
    }
  }
  return out;
}

} // namespace posicert
