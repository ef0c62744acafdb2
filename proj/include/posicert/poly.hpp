#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"

namespace posicert {

// Sparse multivariate polynomial with exact rational coefficients.
//
// Canonical form: terms are kept sorted in descending graded-lex order and
// never carry a zero coefficient, so two polynomials are equal exactly when
// their term vectors are equal. Values are immutable after construction and
// every operation is a pure function of its inputs.
class Poly {
public:
  struct Term {
    Monomial mon;
    Rat coeff;

    friend bool operator==(const Term &a, const Term &b) {
      return a.mon == b.mon && a.coeff == b.coeff;
    }
  };

  using TermMap = std::map<Monomial, Rat, GrlexDescending>;

  Poly() = default;

  static Poly zero(std::uint32_t nvars) {
    require_vars(nvars);
    Poly p;
    p.nvars_ = nvars;
    return p;
  }

  static Poly constant(std::uint32_t nvars, Rat value) {
    Poly p = zero(nvars);
    if (!posicert::is_zero(value))
      p.terms_.push_back({Monomial(nvars), std::move(value)});
    return p;
  }

  // 1-based variable index, matching the x1..xN surface syntax.
  static Poly variable(std::uint32_t nvars, std::uint32_t index) {
    Poly p = zero(nvars);
    if (index < 1 || index > nvars)
      throw std::invalid_argument("variable index out of range");
    Monomial m(nvars);
    m[index - 1] = 1;
    p.terms_.push_back({std::move(m), Rat(1)});
    return p;
  }

  static Poly term(std::uint32_t nvars, Monomial mon, Rat coeff) {
    Poly p = zero(nvars);
    if (mon.nvars() != nvars)
      throw std::invalid_argument("monomial length does not match nvars");
    if (!posicert::is_zero(coeff))
      p.terms_.push_back({std::move(mon), std::move(coeff)});
    return p;
  }

  static Poly from_term_map(std::uint32_t nvars, TermMap &&terms) {
    Poly p = zero(nvars);
    p.terms_.reserve(terms.size());
    for (auto &[mon, c] : terms) {
      if (mon.nvars() != nvars)
        throw std::invalid_argument("monomial length does not match nvars");
      if (!posicert::is_zero(c))
        p.terms_.push_back({mon, std::move(c)});
    }
    return p;
  }

  std::uint32_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<Term> &terms() const { return terms_; }

  // -1 for the zero polynomial (sentinel; callers that cannot accept a
  // zero input must reject it before asking for a degree).
  long total_degree() const {
    if (terms_.empty())
      return -1;
    return static_cast<long>(terms_.front().mon.degree());
  }

  Rat coeff(const Monomial &m) const {
    for (const auto &t : terms_)
      if (t.mon == m)
        return t.coeff;
    return Rat(0);
  }

  Rat constant_term() const { return coeff(Monomial(nvars_)); }

  friend Poly operator+(const Poly &a, const Poly &b) {
    a.require_same_vars(b);
    Poly out = zero(a.nvars_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      const auto &ta = a.terms_[i];
      const auto &tb = b.terms_[j];
      if (ta.mon == tb.mon) {
        Rat c = ta.coeff + tb.coeff;
        if (!posicert::is_zero(c))
          out.terms_.push_back({ta.mon, std::move(c)});
        ++i, ++j;
      } else if (grlex_after(ta.mon, tb.mon)) {
        out.terms_.push_back(ta);
        ++i;
      } else {
        out.terms_.push_back(tb);
        ++j;
      }
    }
    for (; i < a.terms_.size(); ++i)
      out.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j)
      out.terms_.push_back(b.terms_[j]);
    return out;
  }

  friend Poly operator-(const Poly &a) {
    Poly out = a;
    for (auto &t : out.terms_)
      t.coeff = -t.coeff;
    return out;
  }

  friend Poly operator-(const Poly &a, const Poly &b) { return a + (-b); }

  friend Poly operator*(const Poly &a, const Poly &b) {
    a.require_same_vars(b);
    if (a.is_zero() || b.is_zero())
      return zero(a.nvars_);
    // Iterate the smaller operand in the outer loop; accumulation through
    // an ordered map keeps the result canonical.
    const Poly &small = a.terms_.size() <= b.terms_.size() ? a : b;
    const Poly &big = a.terms_.size() <= b.terms_.size() ? b : a;
    TermMap acc;
    for (const auto &ts : small.terms_) {
      const bool unit = ts.coeff == 1;
      for (const auto &tb : big.terms_) {
        Monomial m = ts.mon * tb.mon;
        auto it = acc.find(m);
        if (it == acc.end()) {
          acc.emplace(std::move(m), unit ? tb.coeff : Rat(ts.coeff * tb.coeff));
        } else {
          if (unit)
            it->second += tb.coeff;
          else
            it->second += ts.coeff * tb.coeff;
        }
      }
    }
    return from_term_map(a.nvars_, std::move(acc));
  }

  Poly scaled(const Rat &c) const {
    if (posicert::is_zero(c))
      return zero(nvars_);
    Poly out = zero(nvars_);
    out.terms_.reserve(terms_.size());
    for (const auto &t : terms_)
      out.terms_.push_back({t.mon, Rat(t.coeff * c)});
    return out;
  }

  friend Poly operator*(const Poly &a, const Rat &c) { return a.scaled(c); }
  friend Poly operator*(const Rat &c, const Poly &a) { return a.scaled(c); }

  Poly pow(unsigned long e) const {
    Poly acc = constant(nvars_, Rat(1));
    if (e == 0)
      return acc;
    Poly base = *this;
    while (true) {
      if (e & 1UL)
        acc = acc * base;
      e >>= 1UL;
      if (e == 0)
        break;
      base = base * base;
    }
    return acc;
  }

  Rat eval(std::span<const Rat> point) const {
    if (point.size() != nvars_)
      throw std::invalid_argument("evaluation point has wrong dimension");
    // Lazily grown power table per variable.
    std::vector<std::vector<Rat>> powers(nvars_);
    for (std::uint32_t i = 0; i < nvars_; ++i)
      powers[i].push_back(Rat(1));
    auto power = [&](std::uint32_t i, std::uint32_t e) -> const Rat & {
      auto &col = powers[i];
      while (col.size() <= e)
        col.push_back(Rat(col.back() * point[i]));
      return col[e];
    };
    Rat acc(0);
    for (const auto &t : terms_) {
      Rat prod = t.coeff;
      for (std::uint32_t i = 0; i < nvars_; ++i)
        if (const auto e = t.mon[i])
          prod *= power(i, e);
      acc += prod;
    }
    return acc;
  }

  Rat eval(const std::vector<Rat> &point) const {
    return eval(std::span<const Rat>(point));
  }

  // Ring homomorphism X_i -> images[i]. All images must live in a common
  // ambient ring; the result lives there too.
  Poly substitute(const std::vector<Poly> &images) const {
    if (images.size() != nvars_)
      throw std::invalid_argument("substitution needs one image per variable");
    const std::uint32_t out_vars = images.front().nvars();
    for (const auto &im : images)
      if (im.nvars() != out_vars)
        throw std::invalid_argument("substitution images disagree on nvars");
    std::vector<std::vector<Poly>> powers(nvars_);
    for (std::uint32_t i = 0; i < nvars_; ++i)
      powers[i].push_back(constant(out_vars, Rat(1)));
    auto power = [&](std::uint32_t i, std::uint32_t e) -> const Poly & {
      auto &col = powers[i];
      while (col.size() <= e)
        col.push_back(col.back() * images[i]);
      return col[e];
    };
    Poly acc = zero(out_vars);
    for (const auto &t : terms_) {
      Poly prod = constant(out_vars, t.coeff);
      for (std::uint32_t i = 0; i < nvars_; ++i)
        if (const auto e = t.mon[i])
          prod = prod * power(i, e);
      acc = acc + prod;
    }
    return acc;
  }

  Poly homogeneous_component(std::uint64_t d) const {
    Poly out = zero(nvars_);
    for (const auto &t : terms_)
      if (t.mon.degree() == d)
        out.terms_.push_back(t);
    return out;
  }

  friend bool operator==(const Poly &a, const Poly &b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

  // Total order (terms compared grlex-first); used for deterministic
  // keying of polynomial-valued maps. Not a mathematical ordering.
  static int compare(const Poly &a, const Poly &b) {
    if (a.nvars_ != b.nvars_)
      return a.nvars_ < b.nvars_ ? -1 : 1;
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto &ta = a.terms_[i];
      const auto &tb = b.terms_[i];
      if (ta.mon != tb.mon)
        return grlex_after(ta.mon, tb.mon) ? 1 : -1;
      const int c = cmp(ta.coeff, tb.coeff);
      if (c != 0)
        return c;
    }
    if (a.terms_.size() != b.terms_.size())
      return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
  }

private:
  static void require_vars(std::uint32_t nvars) {
    if (nvars == 0)
      throw std::invalid_argument("polynomial needs at least one variable");
  }

  void require_same_vars(const Poly &other) const {
    if (nvars_ != other.nvars_)
      throw std::invalid_argument("variable count mismatch");
  }

  std::uint32_t nvars_ = 0;
  std::vector<Term> terms_;
};

struct PolyOrder {
  bool operator()(const Poly &a, const Poly &b) const {
    return Poly::compare(a, b) < 0;
  }
};

} // namespace posicert
