#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "certmodel.hpp"
#include "instance.hpp"
#include "polya.hpp"
#include "sos.hpp"

namespace posicert {

struct SearchBudget {
  std::vector<Rat> lambda_schedule; // strictly decreasing positives
  unsigned max_inner_exponent = 6;  // k in (g_i - 1)^{2k}
  unsigned polya_cap = 50;
  unsigned sample_density = 8; // grid resolution per axis

  // Assembly guard: an attempt whose certificate would exceed this many
  // coefficient terms (upper-bound prediction) is recorded and skipped
  // instead of exhausting memory. High-degree admissible forms can demand
  // certificates in the tens of millions of terms.
  std::uint64_t max_certificate_terms = 20'000'000;

  static SearchBudget defaults() {
    SearchBudget b;
    Rat lambda(1);
    for (int i = 0; i <= 12; ++i) {
      b.lambda_schedule.push_back(lambda);
      lambda /= 2;
    }
    return b;
  }

  void validate() const {
    if (lambda_schedule.empty())
      throw std::invalid_argument("lambda schedule must be nonempty");
    for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
      if (sgn(lambda_schedule[i]) <= 0)
        throw std::invalid_argument("lambda values must be positive");
      if (i > 0 && lambda_schedule[i] >= lambda_schedule[i - 1])
        throw std::invalid_argument("lambda schedule must decrease strictly");
    }
    if (max_inner_exponent == 0)
      throw std::invalid_argument("inner exponent budget must be positive");
    if (sample_density == 0)
      throw std::invalid_argument("sample density must be positive");
    if (max_certificate_terms == 0)
      throw std::invalid_argument("certificate term budget must be positive");
  }
};

// Certified scaling factors c_i with c_i * g_i <= 1 on the l1 ball:
// B_i = sum_a |coeff_a| * R^{deg a} dominates |g_i| there, and
// c_i = 1 / max(1, B_i).
struct GeneratorScaling {
  std::vector<Rat> factors;
  std::vector<Rat> bounds;
};

inline GeneratorScaling scale_generators(const ProblemInstance &instance,
                                         const SimplexGeometry &geom) {
  GeneratorScaling out;
  out.factors.reserve(instance.generators.size());
  out.bounds.reserve(instance.generators.size());
  for (const auto &g : instance.generators) {
    Rat bound(0);
    for (const auto &t : g.terms())
      bound += rat_abs(t.coeff) * rat_pow(geom.radius, t.mon.degree());
    Rat c = bound > 1 ? Rat(1) / bound : Rat(1);
    c.canonicalize();
    out.bounds.push_back(std::move(bound));
    out.factors.push_back(std::move(c));
  }
  return out;
}

// q = f - lambda * sum_i (g~_i - 1)^{2k} g~_i over the scaled generators.
// By construction f = q + lambda * sum_i (g~_i - 1)^{2k} g~_i exactly.
inline Poly penalized_objective(const Poly &f,
                                const std::vector<Poly> &scaled_generators,
                                const Rat &lambda, unsigned inner_exponent) {
  if (sgn(lambda) <= 0)
    throw std::invalid_argument("lambda must be positive");
  if (inner_exponent == 0)
    throw std::invalid_argument("inner exponent must be at least 1");
  Poly q = f;
  const Poly one = Poly::constant(f.nvars(), Rat(1));
  for (const auto &g : scaled_generators) {
    const Poly shifted = g - one;
    q = q - (shifted.pow(2UL * inner_exponent) * g).scaled(lambda);
  }
  return q;
}

namespace detail {

// Deterministic rational grid over the box [-R, R]^n, filtered to the
// l1 ball. Calls visit(point) until it returns true; reports whether any
// call did.
template <typename Visit>
bool scan_ball_grid(const SimplexGeometry &geom, unsigned density,
                    Visit &&visit) {
  const std::uint32_t n = geom.nvars;
  std::vector<unsigned> ticks(n, 0);
  std::vector<Rat> point(n, Rat(0));
  while (true) {
    Rat l1(0);
    for (std::uint32_t i = 0; i < n; ++i) {
      Rat frac(2 * static_cast<long>(ticks[i]), density);
      frac.canonicalize();
      Rat c = geom.radius * (frac - 1);
      l1 += rat_abs(c);
      point[i] = std::move(c);
    }
    if (l1 <= geom.radius && visit(point))
      return true;
    std::uint32_t i = 0;
    for (; i < n; ++i) {
      if (++ticks[i] <= density)
        break;
      ticks[i] = 0;
    }
    if (i == n)
      return false;
  }
}

} // namespace detail

// First grid point of the l1 ball with p <= 0, if any. A miss proves
// nothing; a hit soundly disqualifies p from being positive on the ball.
inline std::optional<std::vector<Rat>>
grid_nonpositive_point(const Poly &p, const SimplexGeometry &geom,
                       unsigned density) {
  std::optional<std::vector<Rat>> found;
  detail::scan_ball_grid(geom, density, [&](const std::vector<Rat> &x) {
    if (sgn(p.eval(x)) <= 0) {
      found = x;
      return true;
    }
    return false;
  });
  return found;
}

// First grid point that satisfies every constraint (including the ball)
// yet has f <= 0; such a point refutes positivity of f on the feasible set.
inline std::optional<std::vector<Rat>>
grid_feasible_nonpositive_point(const ProblemInstance &instance,
                                const SimplexGeometry &geom,
                                unsigned density) {
  const Poly ball = ball_polynomial(instance.nvars, instance.ball_bound);
  std::optional<std::vector<Rat>> found;
  detail::scan_ball_grid(geom, density, [&](const std::vector<Rat> &x) {
    for (const auto &g : instance.generators)
      if (sgn(g.eval(x)) < 0)
        return false;
    if (sgn(ball.eval(x)) < 0)
      return false;
    if (sgn(instance.f.eval(x)) <= 0) {
      found = x;
      return true;
    }
    return false;
  });
  return found;
}

// Module expression of the paired product (N + 1/4)^2 - X_i^2:
//   (N + 1/4)^2 - X_i^2
//     = (N - 1/4)^2 + sum_{j != i} X_j^2 + (N - sum X_j^2).
inline ModuleElem opposite_pair_image(std::uint32_t index, std::uint32_t nvars,
                                      const Rat &ball_bound) {
  if (index < 1 || index > nvars)
    throw std::invalid_argument("variable index out of range");
  Sos a(nvars);
  a.append(Rat(1), Poly::constant(nvars, ball_bound - Rat(1, 4)));
  for (std::uint32_t j = 1; j <= nvars; ++j)
    if (j != index)
      a.append(Rat(1), Poly::variable(nvars, j));
  return ModuleElem(std::move(a), Sos::unit(nvars), ball_bound);
}

// Raised when an assembled certificate would exceed the term budget; the
// predicted size is an upper bound on the number of stored coefficients.
struct PullbackTooLarge : std::runtime_error {
  explicit PullbackTooLarge(std::uint64_t predicted_)
      : std::runtime_error("predicted certificate size exceeds the budget"),
        predicted(predicted_) {}
  std::uint64_t predicted;
};

namespace detail {

// Caches for the pullback: per variable the univariate products
// (K + X_i)^a (K - X_i)^b, and per half-exponent the assembled product.
class PullbackTables {
public:
  PullbackTables(std::uint32_t nvars, const Rat &ball_bound)
      : n_(nvars), bound_(ball_bound), shift_(ball_bound + Rat(1, 4)),
        pair_cache_(nvars) {
    if (nvars > 32) // parity patterns are keyed by a 64-bit mask
      throw std::invalid_argument("pullback supports at most 32 variables");
  }

  // M_h = prod_i (K + X_i)^{h_i} (K - X_i)^{h_{n+i}} for a half-exponent
  // vector h of length 2n.
  const Poly &even_product(const Monomial &half) {
    auto it = even_cache_.find(half);
    if (it != even_cache_.end())
      return it->second;
    Poly m = Poly::constant(n_, Rat(1));
    for (std::uint32_t i = 0; i < n_; ++i) {
      const std::uint32_t a = half[i];
      const std::uint32_t b = half[n_ + i];
      if (a == 0 && b == 0)
        continue;
      m = m * pair_power(i, a, b);
    }
    return even_cache_.emplace(half, std::move(m)).first->second;
  }

  // Module element for the residual parity pattern (entries 0/1).
  const ModuleElem &tail(const Monomial &parity) {
    std::uint64_t mask = 0;
    for (std::uint32_t i = 0; i < 2 * n_; ++i)
      if (parity[i])
        mask |= (1ULL << i);
    auto it = tail_cache_.find(mask);
    if (it != tail_cache_.end())
      return it->second;
    ModuleElem elem = ModuleElem::identity(n_, bound_);
    for (std::uint32_t i = 1; i <= n_; ++i) {
      const bool plus = parity[i - 1] != 0;
      const bool minus = parity[n_ + i - 1] != 0;
      if (plus && minus)
        elem = elem * opposite_pair_image(i, n_, bound_);
      else if (plus)
        elem = elem * variable_image(i, +1, n_, bound_);
      else if (minus)
        elem = elem * variable_image(i, -1, n_, bound_);
    }
    elem = elem.compressed();
    return tail_cache_.emplace(mask, std::move(elem)).first->second;
  }

  // Upper bound on the term count of (K + X)^a (K - X)^b: dense in general,
  // only even powers when a == b.
  static std::uint64_t pair_term_bound(std::uint32_t a, std::uint32_t b) {
    if (a == b)
      return static_cast<std::uint64_t>(a) + 1;
    return static_cast<std::uint64_t>(a) + b + 1;
  }

private:
  const Poly &pair_power(std::uint32_t var, std::uint32_t a, std::uint32_t b) {
    auto &cache = pair_cache_[var];
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    auto it = cache.find(key);
    if (it != cache.end())
      return it->second;
    const Poly base_plus =
        Poly::constant(n_, shift_) + Poly::variable(n_, var + 1);
    const Poly base_minus =
        Poly::constant(n_, shift_) - Poly::variable(n_, var + 1);
    Poly value = base_plus.pow(a) * base_minus.pow(b);
    return cache.emplace(key, std::move(value)).first->second;
  }

  std::uint32_t n_;
  Rat bound_;
  Rat shift_; // K = N + 1/4
  std::vector<std::map<std::uint64_t, Poly>> pair_cache_;
  std::map<Monomial, Poly, GrlexDescending> even_cache_;
  std::map<std::uint64_t, ModuleElem> tail_cache_;
};

} // namespace detail

// Image of a coefficient-nonnegative form G under Y_i -> (N+1/4) + X_i,
// Y_{n+i} -> (N+1/4) - X_i, expressed inside the quadratic module.
//
// Per term c * Y^beta the even half of beta becomes a perfect square
// (the substitution is a ring homomorphism, so the image of Y^{2h} is the
// square of the image of Y^h), and the leftover 0/1 parity pattern is a
// product of at most 2n affine images, each expanded through the explicit
// identities above. The result's denotation equals the full substitution
// exactly; bodies that coincide are merged by weight.
inline ModuleElem module_pullback(
    const Poly &scaled_form, std::uint32_t nvars, const Rat &ball_bound,
    std::optional<std::uint64_t> term_budget = std::nullopt) {
  if (scaled_form.nvars() != 2 * nvars)
    throw std::invalid_argument("form must live in 2n variables");
  for (const auto &t : scaled_form.terms())
    if (is_negative(t.coeff))
      throw std::invalid_argument("negative coefficient present");

  detail::PullbackTables tables(nvars, ball_bound);
  const std::uint32_t doubled = 2 * nvars;

  if (term_budget) {
    // Size the output before materializing anything; the count of stored
    // coefficients is bounded by sum over terms of |M| * |tail body|.
    std::uint64_t bound = 0;
    Monomial parity(doubled);
    for (const auto &t : scaled_form.terms()) {
      std::uint64_t even_terms = 1;
      for (std::uint32_t i = 0; i < nvars; ++i) {
        even_terms *= detail::PullbackTables::pair_term_bound(
            t.mon[i] / 2, t.mon[nvars + i] / 2);
        if (even_terms > *term_budget) // saturate early
          throw PullbackTooLarge(bound + even_terms);
      }
      for (std::uint32_t i = 0; i < doubled; ++i)
        parity[i] = t.mon[i] % 2;
      const ModuleElem &tail = tables.tail(parity);
      for (const auto &st : tail.square_part().terms())
        bound += even_terms * st.body.term_count();
      for (const auto &st : tail.ball_part().terms())
        bound += even_terms * st.body.term_count();
      if (bound > *term_budget)
        throw PullbackTooLarge(bound);
    }
  }

  std::map<Poly, Rat, PolyOrder> square_acc;
  std::map<Poly, Rat, PolyOrder> ball_acc;
  auto fold = [](std::map<Poly, Rat, PolyOrder> &acc, Poly body, Rat weight) {
    auto it = acc.find(body);
    if (it == acc.end())
      acc.emplace(std::move(body), std::move(weight));
    else
      it->second += weight;
  };

  const std::uint32_t n2 = doubled;
  for (const auto &t : scaled_form.terms()) {
    Monomial half(n2), parity(n2);
    for (std::uint32_t i = 0; i < n2; ++i) {
      half[i] = t.mon[i] / 2;
      parity[i] = t.mon[i] % 2;
    }
    const Poly &even = tables.even_product(half);
    const ModuleElem &tail = tables.tail(parity);
    for (const auto &st : tail.square_part().terms())
      fold(square_acc, even * st.body, Rat(t.coeff * st.weight));
    for (const auto &st : tail.ball_part().terms())
      fold(ball_acc, even * st.body, Rat(t.coeff * st.weight));
  }

  Sos square_part(nvars), ball_part(nvars);
  for (auto &[body, w] : square_acc)
    square_part.append(std::move(w), body);
  for (auto &[body, w] : ball_acc)
    ball_part.append(std::move(w), body);
  return ModuleElem(std::move(square_part), std::move(ball_part), ball_bound);
}

struct CertifyAttempt {
  unsigned inner_exponent = 0;
  Rat lambda;
  enum class Outcome {
    skipped_on_witness,
    polya_cap_exceeded,
    certificate_too_large
  } outcome = Outcome::skipped_on_witness;
  std::uint64_t predicted_terms = 0; // set for certificate_too_large
};

struct CertifyResult {
  enum class Status { certified, budget_exhausted, not_positive };
  Status status = Status::budget_exhausted;
  std::optional<PutinarCertificate> certificate;
  std::vector<Rat> witness; // populated for not_positive
  std::vector<CertifyAttempt> attempts;
};

// End-to-end generator: scale the generators, search (inner exponent,
// lambda) in deterministic order, homogenize, find the smallest admissible
// power, pull the result back into the module, and assemble. A certificate
// is returned only after it passes the independent exact verifier; an
// assembly whose expansion differs from f aborts instead of being emitted.
inline CertifyResult certify(const ProblemInstance &instance,
                             const SearchBudget &budget) {
  instance.validate();
  budget.validate();
  const auto geom =
      SimplexGeometry::for_ball(instance.nvars, instance.ball_bound);

  CertifyResult result;
  if (auto witness = grid_feasible_nonpositive_point(instance, geom,
                                                     budget.sample_density)) {
    result.status = CertifyResult::Status::not_positive;
    result.witness = std::move(*witness);
    return result;
  }

  const GeneratorScaling scaling = scale_generators(instance, geom);
  std::vector<Poly> scaled;
  scaled.reserve(instance.generators.size());
  for (std::size_t i = 0; i < instance.generators.size(); ++i)
    scaled.push_back(instance.generators[i].scaled(scaling.factors[i]));

  for (unsigned k_inner = 1; k_inner <= budget.max_inner_exponent; ++k_inner) {
    for (const Rat &lambda : budget.lambda_schedule) {
      const Poly q = penalized_objective(instance.f, scaled, lambda, k_inner);
      if (q.is_zero() ||
          grid_nonpositive_point(q, geom, budget.sample_density)) {
        result.attempts.push_back(
            {k_inner, lambda, CertifyAttempt::Outcome::skipped_on_witness});
        continue;
      }
      const auto polya = polya_exponent(simplex_form(q, geom), geom,
                                        budget.polya_cap);
      if (!polya) {
        result.attempts.push_back(
            {k_inner, lambda, CertifyAttempt::Outcome::polya_cap_exceeded});
        continue;
      }

      ModuleElem pulled;
      try {
        pulled = module_pullback(polya->scaled_form, instance.nvars,
                                 instance.ball_bound,
                                 budget.max_certificate_terms);
      } catch (const PullbackTooLarge &e) {
        result.attempts.push_back(
            {k_inner, lambda, CertifyAttempt::Outcome::certificate_too_large,
             e.predicted});
        continue;
      }
      PutinarCertificate cert;
      cert.sigma0 = pulled.square_part();
      cert.sigma_ball = pulled.ball_part();
      cert.ball_bound = instance.ball_bound;
      const Poly one = Poly::constant(instance.nvars, Rat(1));
      for (std::size_t i = 0; i < scaled.size(); ++i) {
        Rat weight = lambda * scaling.factors[i];
        weight.canonicalize();
        cert.sigmas.push_back(Sos::single(
            std::move(weight), (scaled[i] - one).pow(k_inner)));
      }
      cert.provenance = {lambda, k_inner, polya->exponent, scaling.factors};

      const Verdict verdict = verify_putinar(cert, instance);
      if (!verdict.accepted)
        throw std::logic_error(
            "internal identity failure: assembled certificate does not "
            "expand to f (" +
            verdict.reason + ")");
      result.status = CertifyResult::Status::certified;
      result.certificate = std::move(cert);
      return result;
    }
  }
  result.status = CertifyResult::Status::budget_exhausted;
  return result;
}

} // namespace posicert
