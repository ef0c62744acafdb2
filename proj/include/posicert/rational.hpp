#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace posicert {

// Exact rational coefficients. mpq_class keeps values canonical (lowest
// terms, positive denominator) after every arithmetic operation.
using Rat = mpq_class;
using Int = mpz_class;

inline bool is_zero(const Rat &x) { return sgn(x) == 0; }
inline bool is_negative(const Rat &x) { return sgn(x) < 0; }
inline bool is_nonnegative(const Rat &x) { return sgn(x) >= 0; }

inline Rat rat_pow(const Rat &base, unsigned long e) {
  Rat acc(1);
  Rat b = base;
  while (e > 0) {
    if (e & 1UL)
      acc *= b;
    if (e >>= 1UL)
      b *= b;
  }
  return acc;
}

inline Rat rat_abs(const Rat &x) { return is_negative(x) ? Rat(-x) : x; }

// Parses "a" or "a/b" with optional leading sign, arbitrary precision.
// Rejects everything else (floats in particular have no business here).
inline Rat parse_rational(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  auto check_int = [&](const std::string &part) {
    if (part.empty())
      throw std::invalid_argument("invalid rational: '" + s + "'");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size())
      throw std::invalid_argument("invalid rational: '" + s + "'");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw std::invalid_argument("invalid rational: '" + s + "'");
  };
  if (slash == std::string::npos) {
    check_int(s);
    return Rat(Int(s));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Int d(den);
  if (sgn(d) == 0)
    throw std::invalid_argument("zero denominator in rational: '" + s + "'");
  Rat r(Int(num), d);
  r.canonicalize();
  return r;
}

// "a" when the denominator is 1, "a/b" otherwise. Exact decimal digits.
inline std::string rat_to_string(const Rat &x) {
  if (x.get_den() == 1)
    return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

} // namespace posicert
