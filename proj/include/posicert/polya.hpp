#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace posicert {

// Geometry shared by the simplex construction:
//   simplex { y in [0,inf)^{2n} : sum y = 2n(N + 1/4) },
//   its image under y -> ((y_1 - y_{n+1})/2, ...) is the l1 ball of
//   radius n(N + 1/4).
struct SimplexGeometry {
  std::uint32_t nvars = 0; // n, the original variable count
  Rat ball_bound;          // N
  Rat radius;              // n(N + 1/4)
  Rat level;               // 2n(N + 1/4)

  static SimplexGeometry for_ball(std::uint32_t nvars, const Rat &bound) {
    if (nvars == 0)
      throw std::invalid_argument("need at least one variable");
    if (sgn(bound) <= 0)
      throw std::invalid_argument("ball bound must be positive");
    SimplexGeometry g;
    g.nvars = nvars;
    g.ball_bound = bound;
    g.radius = Rat(nvars) * (bound + Rat(1, 4));
    g.level = Rat(2) * g.radius;
    return g;
  }

  // Recovers N from a given simplex level; used by the standalone polya
  // command where only 2n and the level are supplied.
  static SimplexGeometry from_level(std::uint32_t doubled_vars,
                                    const Rat &level) {
    if (doubled_vars == 0 || doubled_vars % 2 != 0)
      throw std::invalid_argument("variable count must be 2n");
    const std::uint32_t n = doubled_vars / 2;
    const Rat bound = level / Rat(2 * n) - Rat(1, 4);
    if (sgn(bound) <= 0)
      throw std::invalid_argument("level too small for a positive ball bound");
    return for_ball(n, bound);
  }
};

// The homogeneous form F in 2n variables built from the parts q_d of q:
//   F(Y) = sum_d q_d((Y_1 - Y_{n+1})/2, ...) * (sum Y / level)^{deg q - d},
// with d running over 0..deg q so that F agrees with q on the simplex:
// whenever sum y = level and y >= 0, F(y) = q((y_1 - y_{n+1})/2, ...).
inline Poly simplex_form(const Poly &q, const SimplexGeometry &geom) {
  if (q.is_zero())
    throw std::invalid_argument("cannot homogenize the zero polynomial");
  if (q.nvars() != geom.nvars)
    throw std::invalid_argument("variable count mismatch");
  const std::uint32_t n = geom.nvars;
  const std::uint32_t n2 = 2 * n;

  std::vector<Poly> half_differences;
  half_differences.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i)
    half_differences.push_back(
        (Poly::variable(n2, i) - Poly::variable(n2, n + i)).scaled(Rat(1, 2)));

  Poly sum_scaled = Poly::zero(n2);
  for (std::uint32_t i = 1; i <= n2; ++i)
    sum_scaled = sum_scaled + Poly::variable(n2, i);
  sum_scaled = sum_scaled.scaled(Rat(1) / geom.level);

  const long d = q.total_degree();
  Poly form = Poly::zero(n2);
  for (long k = 0; k <= d; ++k) {
    const Poly part = q.homogeneous_component(static_cast<std::uint64_t>(k));
    if (part.is_zero())
      continue;
    form = form + part.substitute(half_differences) *
                      sum_scaled.pow(static_cast<unsigned long>(d - k));
  }
  return form;
}

struct PolyaResult {
  unsigned exponent = 0; // smallest admissible power of (sum Y / level)
  Poly scaled_form;      // G = (sum Y / level)^exponent * F, coeffs >= 0
  Poly form;             // the input F
};

namespace detail {

// Integer view of the running product; signs are unaffected by the
// positive denominator so the nonnegativity scan can stay integral.
struct IntPoly {
  std::vector<std::pair<Monomial, Int>> terms; // grlex-descending
  Int den{1};

  static IntPoly from(const Poly &p) {
    IntPoly out;
    for (const auto &t : p.terms())
      mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(),
              t.coeff.get_den().get_mpz_t());
    out.terms.reserve(p.term_count());
    for (const auto &t : p.terms())
      out.terms.emplace_back(t.mon,
                             Int(t.coeff.get_num() *
                                 (out.den / t.coeff.get_den())));
    return out;
  }

  bool all_nonnegative() const {
    for (const auto &[mon, c] : terms)
      if (sgn(c) < 0)
        return false;
    return true;
  }

  // Multiply by (Y_1 + ... + Y_{2n}).
  void multiply_by_variable_sum(std::uint32_t n2) {
    std::map<Monomial, Int, GrlexDescending> acc;
    for (const auto &[mon, c] : terms) {
      for (std::uint32_t i = 0; i < n2; ++i) {
        Monomial m = mon;
        m[i] += 1;
        auto it = acc.find(m);
        if (it == acc.end())
          acc.emplace(std::move(m), c);
        else
          it->second += c;
      }
    }
    terms.assign(std::make_move_iterator(acc.begin()),
                 std::make_move_iterator(acc.end()));
  }

  Poly to_poly(std::uint32_t nvars, const Int &extra_den) const {
    Poly::TermMap out;
    const Int full_den = den * extra_den;
    for (const auto &[mon, c] : terms) {
      Rat r(c, full_den);
      r.canonicalize();
      out.emplace(mon, std::move(r));
    }
    return Poly::from_term_map(nvars, std::move(out));
  }
};

} // namespace detail

// Smallest k <= cap with (sum Y / level)^k * F coefficient-nonnegative,
// searched incrementally from k = 0 by reusing the previous product.
// Returns nothing when the cap is exhausted; the caller decides whether
// that means F fails on the closed orthant or the budget was too small.
inline std::optional<PolyaResult> polya_exponent(const Poly &form,
                                                 const SimplexGeometry &geom,
                                                 unsigned cap) {
  if (form.is_zero())
    throw std::invalid_argument("form must be nonzero");
  const long d = form.total_degree();
  for (const auto &t : form.terms())
    if (static_cast<long>(t.mon.degree()) != d)
      throw std::invalid_argument("form must be homogeneous");
  if (form.nvars() != 2 * geom.nvars)
    throw std::invalid_argument("form must live in 2n variables");

  detail::IntPoly running = detail::IntPoly::from(form);
  for (unsigned k = 0;; ++k) {
    if (running.all_nonnegative()) {
      PolyaResult res;
      res.exponent = k;
      res.form = form;
      Int level_num = geom.level.get_num();
      Int level_den = geom.level.get_den();
      // G = running / (den * level^k); fold level's denominator into the
      // numerator side to keep everything integral.
      Int extra(1);
      for (unsigned i = 0; i < k; ++i)
        extra *= level_num;
      detail::IntPoly scaled = running;
      if (k > 0) {
        Int num_scale(1);
        for (unsigned i = 0; i < k; ++i)
          num_scale *= level_den;
        for (auto &[mon, c] : scaled.terms)
          c *= num_scale;
      }
      res.scaled_form = scaled.to_poly(form.nvars(), extra);
      return res;
    }
    if (k == cap)
      return std::nullopt;
    running.multiply_by_variable_sum(form.nvars());
  }
}

// Terms of a coefficient-nonnegative polynomial in descending graded-lex
// order; feeds the substitution back to the original variables.
inline std::vector<std::pair<Rat, Monomial>>
nonnegative_terms(const Poly &p) {
  std::vector<std::pair<Rat, Monomial>> out;
  out.reserve(p.term_count());
  for (const auto &t : p.terms()) {
    if (is_negative(t.coeff))
      throw std::invalid_argument("negative coefficient present");
    out.emplace_back(t.coeff, t.mon);
  }
  return out;
}

} // namespace posicert
