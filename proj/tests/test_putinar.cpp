#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <posicert/parse.hpp>
#include <posicert/putinar.hpp>

#include "testutil.hpp"

using namespace posicert;
using testutil::Rng;

namespace {
Poly P(const char *text, std::uint32_t nvars) {
  return parse_poly(text, nvars);
}

ProblemInstance one_dim_instance() {
  ProblemInstance inst;
  inst.nvars = 1;
  inst.f = P("x1 + 2", 1);
  inst.generators = {P("1 - x1^2", 1)};
  inst.ball_bound = Rat(1);
  return inst;
}
} // namespace

TEST_CASE("search budget defaults and validation") {
  const auto b = SearchBudget::defaults();
  REQUIRE(b.lambda_schedule.size() == 13);
  CHECK(b.lambda_schedule.front() == Rat(1));
  CHECK(b.lambda_schedule.back() == Rat(1, 4096));
  CHECK(b.max_inner_exponent == 6);
  CHECK(b.polya_cap == 50);
  CHECK(b.sample_density == 8);
  b.validate();

  SearchBudget bad = b;
  bad.lambda_schedule = {Rat(1, 2), Rat(1, 2)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.lambda_schedule = {Rat(-1)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("generator scaling bounds") {
  const auto inst = one_dim_instance();
  const auto geom = SimplexGeometry::for_ball(1, Rat(1));
  const auto scaling = scale_generators(inst, geom);
  REQUIRE(scaling.factors.size() == 1);
  CHECK(scaling.bounds[0] == Rat(41, 16)); // 1 + (5/4)^2
  CHECK(scaling.factors[0] == Rat(16, 41));

  ProblemInstance small = inst;
  small.generators = {Poly::constant(1, Rat(1, 2))};
  const auto s2 = scale_generators(small, geom);
  CHECK(s2.bounds[0] == Rat(1, 2));
  CHECK(s2.factors[0] == Rat(1)); // already below 1

  // |c * g| <= 1 at sampled points of the ball.
  Rng rng(99001);
  for (int iter = 0; iter < 40; ++iter) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(2));
    ProblemInstance r;
    r.nvars = n;
    r.f = Poly::constant(n, Rat(1));
    r.generators = {testutil::random_nonzero_poly(rng, n, 3, 5)};
    r.ball_bound = testutil::random_positive_rat(rng, 4, 2);
    const auto g = SimplexGeometry::for_ball(n, r.ball_bound);
    const auto sc = scale_generators(r, g);
    for (int pt = 0; pt < 8; ++pt) {
      // random point of the l1 ball: scale a random box point inward
      auto x = testutil::random_point(rng, n, 2, 3);
      Rat l1(0);
      for (const auto &c : x)
        l1 += rat_abs(c);
      if (sgn(l1) == 0)
        continue;
      for (auto &c : x) {
        c *= g.radius / (l1 > g.radius ? l1 : g.radius);
        c.canonicalize();
      }
      const Rat value = r.generators[0].eval(x) * sc.factors[0];
      CHECK(rat_abs(value) <= 1);
    }
  }
}

TEST_CASE("penalized objective") {
  // Vacuous generator sum leaves f untouched.
  const Poly f = P("x1 + 2", 1);
  CHECK(penalized_objective(f, {}, Rat(1), 1) == f);

  // Frozen hand expansion for the scaled 1-D generator, lambda = 1, k = 1:
  // q = 127842/68921 + x1 - 2800/68921 x1^2 + 8704/68921 x1^4
  //     + 4096/68921 x1^6.
  const Poly scaled_g = P("1 - x1^2", 1).scaled(Rat(16, 41));
  const Poly q = penalized_objective(f, {scaled_g}, Rat(1), 1);
  CHECK(q == P("4096/68921*x1^6 + 8704/68921*x1^4 - 2800/68921*x1^2 "
               "+ x1 + 127842/68921",
               1));

  // Reassembly identity f = q + lambda * sum (g~-1)^{2k} g~ exactly.
  Rng rng(99002);
  for (int iter = 0; iter < 50; ++iter) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(2));
    const Poly rf = testutil::random_poly(rng, n, 3, 4);
    std::vector<Poly> gs;
    for (std::uint64_t i = 0, m = 1 + rng.below(2); i < m; ++i)
      gs.push_back(testutil::random_nonzero_poly(rng, n, 2, 3));
    const Rat lambda = testutil::random_positive_rat(rng, 3, 3);
    const unsigned k = 1 + static_cast<unsigned>(rng.below(2));
    const Poly rq = penalized_objective(rf, gs, lambda, k);
    Poly rebuilt = rq;
    const Poly one = Poly::constant(n, Rat(1));
    for (const auto &g : gs)
      rebuilt = rebuilt + ((g - one).pow(2 * k) * g).scaled(lambda);
    CHECK(rebuilt == rf);
  }

  CHECK_THROWS_AS(penalized_objective(f, {}, Rat(0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(penalized_objective(f, {}, Rat(1), 0),
                  std::invalid_argument);
}

TEST_CASE("grid prescreen") {
  const auto geom = SimplexGeometry::for_ball(1, Rat(1));
  CHECK(!grid_nonpositive_point(Poly::constant(1, Rat(1)), geom, 8));

  const auto witness = grid_nonpositive_point(P("x1", 1), geom, 8);
  REQUIRE(witness.has_value());
  CHECK(sgn(P("x1", 1).eval(*witness)) <= 0);
  CHECK(rat_abs((*witness)[0]) <= geom.radius);

  for (unsigned density : {1u, 2u, 5u, 8u, 16u})
    CHECK(!grid_nonpositive_point(P("x1^2 + 1", 1), geom, density));
}

TEST_CASE("feasible-set prescreen") {
  auto inst = one_dim_instance();
  const auto geom = SimplexGeometry::for_ball(1, Rat(1));
  CHECK(!grid_feasible_nonpositive_point(inst, geom, 8));

  inst.f = Poly::constant(1, Rat(-1));
  const auto witness = grid_feasible_nonpositive_point(inst, geom, 8);
  REQUIRE(witness.has_value());
  for (const auto &g : inst.generators)
    CHECK(sgn(g.eval(*witness)) >= 0);
}

TEST_CASE("opposite pair image") {
  for (std::uint32_t n = 1; n <= 3; ++n)
    for (std::uint32_t i = 1; i <= n; ++i)
      for (long bound : {1L, 4L}) {
        const Rat N(bound);
        const ModuleElem e = opposite_pair_image(i, n, N);
        const Rat shift = N + Rat(1, 4);
        const Poly xi = Poly::variable(n, i);
        CHECK(e.denotation() ==
              Poly::constant(n, shift * shift) - xi * xi);
      }
  CHECK_THROWS_AS(opposite_pair_image(4, 3, Rat(1)), std::invalid_argument);
}

TEST_CASE("module pullback of simple forms") {
  // G = Y1 with n = 1, N = 1: structure matches the affine image.
  const ModuleElem e = module_pullback(P("x1", 2), 1, Rat(1));
  CHECK(e.denotation() == P("5/4 + x1", 1));
  REQUIRE(e.square_part().size() == 1);
  CHECK(e.square_part().terms()[0].body == P("x1 + 1/2", 1));
  REQUIRE(e.ball_part().size() == 1);
  CHECK(e.ball_part().terms()[0].body == Poly::constant(1, 1));

  // G = 1: multiplicative identity shape.
  const ModuleElem c = module_pullback(Poly::constant(2, 1), 1, Rat(1));
  REQUIRE(c.square_part().size() == 1);
  CHECK(c.square_part().terms()[0].body == Poly::constant(1, 1));
  CHECK(c.ball_part().empty());

  // Even power becomes a perfect square of the affine image.
  const ModuleElem sq = module_pullback(P("x1^2", 2), 1, Rat(1));
  CHECK(sq.ball_part().empty());
  REQUIRE(sq.square_part().size() == 1);
  CHECK(sq.square_part().terms()[0].body == P("5/4 + x1", 1));

  CHECK_THROWS_AS(module_pullback(P("-x1", 2), 1, Rat(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(module_pullback(P("x1", 1), 1, Rat(1)),
                  std::invalid_argument);
}

TEST_CASE("module pullback agrees with the substitution") {
  Rng rng(99003);
  for (int iter = 0; iter < 40; ++iter) {
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(2));
    const Rat N = testutil::random_positive_rat(rng, 4, 2);
    const Poly form = testutil::random_nonneg_poly(rng, 2 * n, 4, 6);
    if (form.is_zero())
      continue;
    const ModuleElem pulled = module_pullback(form, n, N);

    std::vector<Poly> images;
    const Rat shift = N + Rat(1, 4);
    for (std::uint32_t i = 1; i <= n; ++i)
      images.push_back(Poly::constant(n, shift) + Poly::variable(n, i));
    for (std::uint32_t i = 1; i <= n; ++i)
      images.push_back(Poly::constant(n, shift) - Poly::variable(n, i));
    CHECK(pulled.denotation() == form.substitute(images));

    // Emitted weights stay nonnegative.
    CHECK(pulled.square_part().all_weights_nonnegative());
    CHECK(pulled.ball_part().all_weights_nonnegative());
  }
}

TEST_CASE("certify the 1-D example instance") {
  const auto inst = one_dim_instance();
  const auto result = certify(inst, SearchBudget::defaults());
  REQUIRE(result.status == CertifyResult::Status::certified);
  REQUIRE(result.certificate.has_value());
  const auto &cert = *result.certificate;

  CHECK(verify_putinar(cert, inst).accepted);
  CHECK(cert.provenance.lambda == Rat(1));
  CHECK(cert.provenance.inner_exponent == 1);
  CHECK(cert.provenance.scalings == std::vector<Rat>{Rat(16, 41)});

  // Independent re-expansion (no fast path): sum everything by hand.
  Poly total = Poly::zero(1);
  for (const auto &t : cert.sigma0.terms())
    total = total + (t.body * t.body).scaled(t.weight);
  for (std::size_t i = 0; i < cert.sigmas.size(); ++i)
    for (const auto &t : cert.sigmas[i].terms())
      total = total + (t.body * t.body).scaled(t.weight) * inst.generators[i];
  for (const auto &t : cert.sigma_ball.terms())
    total = total +
            (t.body * t.body).scaled(t.weight) * ball_polynomial(1, Rat(1));
  CHECK(total == inst.f);
}

TEST_CASE("certify rejects a non-positive objective") {
  auto inst = one_dim_instance();
  inst.f = Poly::constant(1, Rat(-1));
  const auto result = certify(inst, SearchBudget::defaults());
  REQUIRE(result.status == CertifyResult::Status::not_positive);
  REQUIRE(!result.witness.empty());
  CHECK(sgn(inst.f.eval(result.witness)) <= 0);
}

TEST_CASE("certify a 2-D instance") {
  ProblemInstance inst;
  inst.nvars = 2;
  inst.f = P("3 - x1", 2);
  inst.generators = {P("1 - x1^2 - x2^2", 2)};
  inst.ball_bound = Rat(1);
  const auto result = certify(inst, SearchBudget::defaults());
  REQUIRE(result.status == CertifyResult::Status::certified);
  CHECK(verify_putinar(*result.certificate, inst).accepted);
}

TEST_CASE("certificate size gate") {
  // Tiny budget: every admissible attempt predicts past the gate.
  auto inst = one_dim_instance();
  SearchBudget budget = SearchBudget::defaults();
  budget.max_certificate_terms = 1;
  budget.max_inner_exponent = 2;
  const auto result = certify(inst, budget);
  REQUIRE(result.status == CertifyResult::Status::budget_exhausted);
  bool saw_too_large = false;
  for (const auto &a : result.attempts)
    if (a.outcome == CertifyAttempt::Outcome::certificate_too_large) {
      saw_too_large = true;
      CHECK(a.predicted_terms > 1);
    }
  CHECK(saw_too_large);

  CHECK_THROWS_AS(module_pullback(P("x1^4 + x2^4", 2), 1, Rat(1), 2),
                  PullbackTooLarge);
  // A generous budget changes nothing about the result.
  const auto loose = module_pullback(P("x1^4 + x2^4", 2), 1, Rat(1), 1u << 20);
  const auto plain = module_pullback(P("x1^4 + x2^4", 2), 1, Rat(1));
  CHECK(loose.denotation() == plain.denotation());
}

TEST_CASE("certify reports budget exhaustion with diagnostics") {
  auto inst = one_dim_instance();
  // Positive on the feasible set [-1, 1] but negative at the ball grid
  // corner -5/4, so every prescreen finds a witness for q.
  inst.f = P("x1 + 9/8", 1);
  SearchBudget budget;
  budget.lambda_schedule = {Rat(1, 4096)};
  budget.max_inner_exponent = 2;
  budget.polya_cap = 4;
  budget.sample_density = 8;
  const auto result = certify(inst, budget);
  REQUIRE(result.status == CertifyResult::Status::budget_exhausted);
  CHECK(result.attempts.size() == 2);
  for (const auto &a : result.attempts)
    CHECK(a.outcome == CertifyAttempt::Outcome::skipped_on_witness);
}
