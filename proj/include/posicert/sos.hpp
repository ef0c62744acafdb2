#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace posicert {

// The ball constraint polynomial N - (X_1^2 + ... + X_n^2).
inline Poly ball_polynomial(std::uint32_t nvars, const Rat &bound) {
  Poly w = Poly::constant(nvars, bound);
  for (std::uint32_t i = 1; i <= nvars; ++i) {
    const Poly xi = Poly::variable(nvars, i);
    w = w - xi * xi;
  }
  return w;
}

struct SosTerm {
  Rat weight;
  Poly body;
};

// Weighted sum of squares: sum_j weight_j * body_j^2.
//
// Construction drops terms that contribute nothing (zero weight or zero
// body); no further structural canonicalization happens, so equality of
// two Sos values is meaningful only through expand().
class Sos {
public:
  Sos() = default;
  explicit Sos(std::uint32_t nvars) : nvars_(nvars) {}

  static Sos unit(std::uint32_t nvars) {
    Sos s(nvars);
    s.append(Rat(1), Poly::constant(nvars, Rat(1)));
    return s;
  }

  static Sos single(Rat weight, Poly body) {
    Sos s(body.nvars());
    s.append(std::move(weight), std::move(body));
    return s;
  }

  void append(Rat weight, Poly body) {
    if (body.nvars() != nvars_)
      throw std::invalid_argument("variable count mismatch");
    if (is_zero(weight) || body.is_zero())
      return;
    terms_.push_back({std::move(weight), std::move(body)});
  }

  std::uint32_t nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<SosTerm> &terms() const { return terms_; }

  bool all_weights_nonnegative() const {
    for (const auto &t : terms_)
      if (is_negative(t.weight))
        return false;
    return true;
  }

  // List concatenation; expand(a + b) = expand(a) + expand(b).
  friend Sos operator+(const Sos &a, const Sos &b) {
    a.require_same_vars(b);
    Sos out = a;
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    return out;
  }

  // All cross products; expand(a * b) = expand(a) * expand(b).
  friend Sos operator*(const Sos &a, const Sos &b) {
    a.require_same_vars(b);
    Sos out(a.nvars_);
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto &ta : a.terms_)
      for (const auto &tb : b.terms_)
        out.append(Rat(ta.weight * tb.weight), ta.body * tb.body);
    return out;
  }

  // Multiplies every weight by c (c >= 0 keeps the SOS reading valid).
  Sos scaled(const Rat &c) const {
    Sos out(nvars_);
    if (is_zero(c))
      return out;
    out.terms_.reserve(terms_.size());
    for (const auto &t : terms_)
      out.terms_.push_back({Rat(t.weight * c), t.body});
    return out;
  }

  // Multiplies every body by p; each square gains a factor p^2.
  Sos bodies_times(const Poly &p) const {
    Sos out(nvars_);
    if (p.is_zero())
      return out;
    out.terms_.reserve(terms_.size());
    for (const auto &t : terms_)
      out.terms_.push_back({t.weight, t.body * p});
    return out;
  }

  // Expansion-preserving merge of proportional bodies: each body is
  // rescaled to leading coefficient 1 and the square of the factor moves
  // into the weight. Keeps pipeline intermediates from ballooning.
  Sos compressed() const {
    std::map<Poly, Rat, PolyOrder> acc;
    for (const auto &t : terms_) {
      const Rat lead = t.body.terms().front().coeff;
      Poly monic = t.body.scaled(Rat(1) / lead);
      Rat w = t.weight * lead * lead;
      auto it = acc.find(monic);
      if (it == acc.end())
        acc.emplace(std::move(monic), std::move(w));
      else
        it->second += w;
    }
    Sos out(nvars_);
    out.terms_.reserve(acc.size());
    for (auto &[body, w] : acc)
      out.append(std::move(w), body);
    return out;
  }

  Poly expand() const;

private:
  void require_same_vars(const Sos &other) const {
    if (nvars_ != other.nvars_)
      throw std::invalid_argument("variable count mismatch");
  }

  std::uint32_t nvars_ = 0;
  std::vector<SosTerm> terms_;
};

namespace detail {

// Dense exponent-grid expansion of sum_j w_j p_j^2. All arithmetic is
// integral until one final exact division, which avoids per-term rational
// canonicalization in the O(terms^2) inner loops.
inline bool sos_expand_fast(const Sos &s, Poly &out) {
  const std::uint32_t n = s.nvars();
  std::vector<std::uint64_t> maxexp(n, 0);
  Int global_den(1);
  std::vector<Int> scaled_dens;
  scaled_dens.reserve(s.size());
  for (const auto &t : s.terms()) {
    Int body_den(1);
    for (const auto &bt : t.body.terms()) {
      mpz_lcm(body_den.get_mpz_t(), body_den.get_mpz_t(),
              bt.coeff.get_den().get_mpz_t());
      for (std::uint32_t i = 0; i < n; ++i)
        maxexp[i] = std::max<std::uint64_t>(maxexp[i], 2 * bt.mon[i]);
    }
    Int den = t.weight.get_den() * body_den * body_den;
    mpz_lcm(global_den.get_mpz_t(), global_den.get_mpz_t(), den.get_mpz_t());
    scaled_dens.push_back(std::move(den));
  }
  std::uint64_t cells = 1;
  std::vector<std::uint64_t> stride(n, 1);
  for (std::uint32_t i = n; i-- > 0;) {
    stride[i] = cells;
    cells *= maxexp[i] + 1;
    if (cells > (1u << 22))
      return false;
  }

  std::vector<Int> grid(cells);
  std::vector<Int> local(cells);
  std::vector<char> dirty(cells, 0);
  std::vector<std::uint64_t> touched;
  std::vector<std::uint64_t> idx;
  std::vector<Int> ic;

  std::size_t square = 0;
  for (const auto &t : s.terms()) {
    Int body_den(1);
    for (const auto &bt : t.body.terms())
      mpz_lcm(body_den.get_mpz_t(), body_den.get_mpz_t(),
              bt.coeff.get_den().get_mpz_t());
    idx.clear();
    ic.clear();
    for (const auto &bt : t.body.terms()) {
      std::uint64_t ix = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        ix += stride[i] * bt.mon[i];
      idx.push_back(ix);
      ic.emplace_back(bt.coeff.get_num() *
                      (body_den / bt.coeff.get_den()));
    }
    touched.clear();
    const std::size_t k = idx.size();
    Int prod;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a; b < k; ++b) {
        const std::uint64_t cell = idx[a] + idx[b];
        prod = ic[a] * ic[b];
        if (a != b)
          prod <<= 1;
        if (!dirty[cell]) {
          dirty[cell] = 1;
          touched.push_back(cell);
          local[cell] = prod;
        } else {
          local[cell] += prod;
        }
      }
    }
    // global += weight_num * (global_den / (weight_den * body_den^2)) * local
    const Int mult =
        t.weight.get_num() * (global_den / scaled_dens[square]);
    for (const auto cell : touched) {
      mpz_addmul(grid[cell].get_mpz_t(), mult.get_mpz_t(),
                 local[cell].get_mpz_t());
      dirty[cell] = 0;
      local[cell] = 0;
    }
    ++square;
  }

  Poly::TermMap terms;
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    if (sgn(grid[cell]) == 0)
      continue;
    Monomial m(n);
    std::uint64_t rest = cell;
    for (std::uint32_t i = 0; i < n; ++i) {
      m[i] = static_cast<std::uint32_t>(rest / stride[i]);
      rest %= stride[i];
    }
    Rat c(grid[cell], global_den);
    c.canonicalize();
    terms.emplace(std::move(m), std::move(c));
  }
  out = Poly::from_term_map(n, std::move(terms));
  return true;
}

} // namespace detail

inline Poly Sos::expand() const {
  if (terms_.empty())
    return nvars_ == 0 ? Poly() : Poly::zero(nvars_);
  Poly out;
  if (detail::sos_expand_fast(*this, out))
    return out;
  out = Poly::zero(nvars_);
  for (const auto &t : terms_)
    out = out + (t.body * t.body).scaled(t.weight);
  return out;
}

inline Poly sos_expand(const Sos &s) { return s.expand(); }

// Smallest-first search for m = r1^2 + r2^2 + r3^2 + r4^2. Every
// nonnegative integer decomposes this way; instances here are desk-scale.
inline std::array<Int, 4> four_square_decomposition(const Int &m) {
  if (sgn(m) < 0)
    throw std::invalid_argument("four-square decomposition needs m >= 0");
  Int r1max = sqrt(m);
  for (Int r1(0); r1 <= r1max; ++r1) {
    const Int m1 = m - r1 * r1;
    Int r2max = sqrt(m1);
    for (Int r2(0); r2 <= r2max; ++r2) {
      const Int m2 = m1 - r2 * r2;
      Int r3max = sqrt(m2);
      for (Int r3(0); r3 <= r3max; ++r3) {
        const Int m3 = m2 - r3 * r3;
        if (mpz_perfect_square_p(m3.get_mpz_t())) {
          return {r1, r2, r3, Int(sqrt(m3))};
        }
      }
    }
  }
  throw std::logic_error("four-square search failed"); // unreachable
}

// Rewrites every weighted square with weight u/v as a sum of plain squares
// through u*v = r1^2 + ... + r4^2, preserving the expansion exactly.
inline Sos weights_to_squares(const Sos &s) {
  Sos out(s.nvars());
  for (const auto &t : s.terms()) {
    if (is_negative(t.weight))
      throw std::invalid_argument("negative weight has no square rewrite");
    const Int u = t.weight.get_num();
    const Int v = t.weight.get_den();
    const auto parts = four_square_decomposition(Int(u * v));
    for (const auto &r : parts) {
      if (sgn(r) == 0)
        continue;
      Rat f(r, v);
      f.canonicalize();
      out.append(Rat(1), t.body.scaled(f));
    }
  }
  return out;
}

// Element sigma_a + sigma_b * (N - sum X_i^2) of the quadratic module
// generated by the ball constraint. Closed under multiplication.
class ModuleElem {
public:
  ModuleElem() = default;
  ModuleElem(Sos square_part, Sos ball_part, Rat ball_bound)
      : square_part_(std::move(square_part)), ball_part_(std::move(ball_part)),
        ball_bound_(std::move(ball_bound)) {
    if (ball_part_.nvars() != square_part_.nvars()) {
      if (ball_part_.empty())
        ball_part_ = Sos(square_part_.nvars());
      else if (square_part_.empty())
        square_part_ = Sos(ball_part_.nvars());
      else
        throw std::invalid_argument("variable count mismatch");
    }
    if (sgn(ball_bound_) <= 0)
      throw std::invalid_argument("ball bound must be positive");
  }

  static ModuleElem identity(std::uint32_t nvars, Rat ball_bound) {
    return ModuleElem(Sos::unit(nvars), Sos(nvars), std::move(ball_bound));
  }

  std::uint32_t nvars() const { return square_part_.nvars(); }
  const Sos &square_part() const { return square_part_; }
  const Sos &ball_part() const { return ball_part_; }
  const Rat &ball_bound() const { return ball_bound_; }

  Poly denotation() const {
    const Poly w = ball_polynomial(nvars(), ball_bound_);
    return square_part_.expand() + ball_part_.expand() * w;
  }

  // (a0 + b0 w)(a1 + b1 w) = (a0 a1 + b0 b1 w^2) + (a0 b1 + a1 b0) w;
  // the w^2 factor is folded into the squares of b0 b1.
  friend ModuleElem operator*(const ModuleElem &u, const ModuleElem &v) {
    if (u.nvars() != v.nvars())
      throw std::invalid_argument("variable count mismatch");
    if (u.ball_bound_ != v.ball_bound_)
      throw std::invalid_argument("ball bound mismatch");
    const Poly w = ball_polynomial(u.nvars(), u.ball_bound_);
    Sos a = u.square_part_ * v.square_part_ +
            (u.ball_part_ * v.ball_part_).bodies_times(w);
    Sos b = u.square_part_ * v.ball_part_ + v.square_part_ * u.ball_part_;
    return ModuleElem(std::move(a), std::move(b), u.ball_bound_);
  }

  ModuleElem pow(unsigned long e) const {
    ModuleElem acc = identity(nvars(), ball_bound_);
    for (unsigned long i = 0; i < e; ++i)
      acc = acc * (*this);
    return acc;
  }

  ModuleElem compressed() const {
    return ModuleElem(square_part_.compressed(), ball_part_.compressed(),
                      ball_bound_);
  }

private:
  Sos square_part_;
  Sos ball_part_;
  Rat ball_bound_;
};

// Explicit module membership of (N + 1/4) + sign*X_i:
//   (N + 1/4) +- X_i = sum_{j != i} X_j^2 + (X_i +- 1/2)^2 + (N - sum X_j^2).
inline ModuleElem variable_image(std::uint32_t index, int sign,
                                 std::uint32_t nvars, const Rat &ball_bound) {
  if (index < 1 || index > nvars)
    throw std::invalid_argument("variable index out of range");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  Sos a(nvars);
  for (std::uint32_t j = 1; j <= nvars; ++j) {
    if (j == index)
      continue;
    a.append(Rat(1), Poly::variable(nvars, j));
  }
  Poly shifted = Poly::variable(nvars, index) +
                 Poly::constant(nvars, Rat(sign, 2));
  a.append(Rat(1), std::move(shifted));
  return ModuleElem(std::move(a), Sos::unit(nvars), ball_bound);
}

} // namespace posicert
