#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <posicert/parse.hpp>
#include <posicert/polya.hpp>

#include "testutil.hpp"

using namespace posicert;
using testutil::Rng;

namespace {
Poly P(const char *text, std::uint32_t nvars) {
  return parse_poly(text, nvars);
}

// Brute-force oracle: multiply (sum Y)^k * F afresh for each k and scan.
bool nonneg_after_power(const Poly &form, unsigned k) {
  const std::uint32_t n2 = form.nvars();
  Poly sum = Poly::zero(n2);
  for (std::uint32_t i = 1; i <= n2; ++i)
    sum = sum + Poly::variable(n2, i);
  const Poly prod = sum.pow(k) * form;
  for (const auto &t : prod.terms())
    if (is_negative(t.coeff))
      return false;
  return true;
}

std::vector<Rat> random_simplex_point(Rng &rng, std::uint32_t n2,
                                      const Rat &level) {
  while (true) {
    std::vector<long> ticks(n2);
    long total = 0;
    for (auto &t : ticks) {
      t = rng.range(0, 12);
      total += t;
    }
    if (total == 0)
      continue;
    std::vector<Rat> y;
    y.reserve(n2);
    for (const auto t : ticks) {
      Rat v = level * Rat(t, total);
      v.canonicalize();
      y.push_back(std::move(v));
    }
    return y;
  }
}

std::vector<Rat> fold_to_ball(const std::vector<Rat> &y, std::uint32_t n) {
  std::vector<Rat> x;
  x.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Rat v = (y[i] - y[n + i]) / 2;
    v.canonicalize();
    x.push_back(std::move(v));
  }
  return x;
}
} // namespace

TEST_CASE("simplex geometry") {
  const auto g = SimplexGeometry::for_ball(1, Rat(1));
  CHECK(g.radius == Rat(5, 4));
  CHECK(g.level == Rat(5, 2));

  const auto g2 = SimplexGeometry::for_ball(2, Rat(4));
  CHECK(g2.radius == Rat(17, 2));
  CHECK(g2.level == Rat(17));

  const auto back = SimplexGeometry::from_level(2, Rat(5, 2));
  CHECK(back.ball_bound == Rat(1));
  CHECK_THROWS_AS(SimplexGeometry::from_level(3, Rat(5, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SimplexGeometry::from_level(2, Rat(1, 4)),
                  std::invalid_argument);
}

TEST_CASE("simplex form examples") {
  const auto geom = SimplexGeometry::for_ball(1, Rat(1));

  CHECK(simplex_form(P("x1", 1), geom) == P("1/2*x1 - 1/2*x2", 2));
  const Poly f = simplex_form(P("1 + x1", 1), geom);
  CHECK(f == P("9/10*x1 - 1/10*x2", 2));

  // Agreement at the simplex corner y = (0, 5/2).
  const std::vector<Rat> corner = {Rat(0), Rat(5, 2)};
  CHECK(f.eval(corner) == Rat(-1, 4));
  const std::vector<Rat> folded = {Rat(-5, 4)};
  CHECK(P("1 + x1", 1).eval(folded) == Rat(-1, 4));

  CHECK_THROWS_AS(simplex_form(Poly::zero(1), geom), std::invalid_argument);
}

TEST_CASE("simplex form is homogeneous and agrees with q on the simplex") {
  Rng rng(88001);
  for (int instance = 0; instance < 20; ++instance) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(3));
    const auto geom =
        SimplexGeometry::for_ball(n, testutil::random_positive_rat(rng, 5, 3));
    const Poly q = testutil::random_nonzero_poly(rng, n, 3, 6);
    const Poly form = simplex_form(q, geom);
    const long d = q.total_degree();
    for (const auto &t : form.terms())
      CHECK(static_cast<long>(t.mon.degree()) == d);
    for (int pt = 0; pt < 5; ++pt) {
      const auto y = random_simplex_point(rng, 2 * n, geom.level);
      CHECK(form.eval(y) == q.eval(fold_to_ball(y, n)));
    }
  }
}

TEST_CASE("polya exponent search") {
  const auto geom = SimplexGeometry::for_ball(1, Rat(1));

  const Poly easy = P("x1^2 + x2^2", 2);
  const auto r0 = polya_exponent(easy, geom, 10);
  REQUIRE(r0.has_value());
  CHECK(r0->exponent == 0);
  CHECK(r0->scaled_form == easy);
  CHECK(r0->form == easy);

  const Poly mixed = P("x1^2 - x1*x2 + x2^2", 2);
  const auto r1 = polya_exponent(mixed, geom, 10);
  REQUIRE(r1.has_value());
  CHECK(r1->exponent == 1);
  // (Y1 + Y2) * F = Y1^3 + Y2^3, then divided by level^1 = 5/2.
  CHECK(r1->scaled_form.scaled(geom.level) == P("x1^3 + x2^3", 2));
  CHECK(!nonneg_after_power(mixed, 0));
  CHECK(nonneg_after_power(mixed, 1));

  const Poly degenerate = P("x1^2 - 2*x1*x2 + x2^2", 2);
  CHECK(!polya_exponent(degenerate, geom, 25).has_value());
  for (unsigned k = 0; k <= 25; ++k)
    CHECK(!nonneg_after_power(degenerate, k));

  CHECK_THROWS_AS(polya_exponent(Poly::zero(2), geom, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(polya_exponent(P("x1^2 + x2", 2), geom, 5),
                  std::invalid_argument);
}

TEST_CASE("polya search matches the brute-force oracle") {
  Rng rng(88002);
  const auto geom = SimplexGeometry::for_ball(1, Rat(2));
  for (int iter = 0; iter < 25; ++iter) {
    // Random homogeneous quadratics; minimality cross-checked per k.
    Poly form = Poly::zero(2);
    for (int t = 0; t < 3; ++t) {
      Monomial m(2);
      const unsigned a = static_cast<unsigned>(rng.below(3));
      m[0] = a;
      m[1] = 2 - a;
      form = form + Poly::term(2, m, testutil::random_nonzero_rat(rng, 4, 2));
    }
    if (form.is_zero())
      continue;
    const unsigned cap = 8;
    const auto res = polya_exponent(form, geom, cap);
    if (res.has_value()) {
      CHECK(nonneg_after_power(form, res->exponent));
      if (res->exponent > 0)
        CHECK(!nonneg_after_power(form, res->exponent - 1));
      // Exactness: G * level^k = (sum Y)^k * F.
      const Poly lhs = res->scaled_form.scaled(rat_pow(geom.level,
                                                       res->exponent));
      Poly sum = P("x1 + x2", 2);
      CHECK(lhs == sum.pow(res->exponent) * form);
    } else {
      for (unsigned k = 0; k <= cap; ++k)
        CHECK(!nonneg_after_power(form, k));
    }
  }
}

TEST_CASE("nonnegative term listing") {
  const Poly g = P("x1^3 + x2^3", 2);
  const auto terms = nonnegative_terms(g);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].first == Rat(1));
  CHECK(terms[0].second[0] == 3);
  CHECK(terms[1].second[1] == 3);

  CHECK(nonnegative_terms(Poly::zero(2)).empty());
  CHECK_THROWS_AS(nonnegative_terms(P("x1 - x2", 2)), std::invalid_argument);

  // Ordering agrees with an independently sorted copy.
  Rng rng(88003);
  for (int iter = 0; iter < 50; ++iter) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(3));
    const Poly p = testutil::random_nonneg_poly(rng, n, 5, 8);
    auto listed = nonnegative_terms(p);
    auto sorted = listed;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) {
                return grlex_after(a.second, b.second);
              });
    CHECK(listed.size() == sorted.size());
    for (std::size_t i = 0; i < listed.size(); ++i)
      CHECK(listed[i].second == sorted[i].second);
  }
}
