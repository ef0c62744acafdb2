#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace posicert {

// Exponent vector of a power product. The length always matches the
// ambient variable count of the polynomial holding it.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  std::size_t nvars() const { return exps_.size(); }

  // Total degree; 64-bit accumulation cannot overflow for any vector of
  // 32-bit exponents of sane length.
  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (auto e : exps_)
      d += e;
    return d;
  }

  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t &operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t> &exponents() const { return exps_; }

  bool is_constant() const {
    for (auto e : exps_)
      if (e != 0)
        return false;
    return true;
  }

  friend Monomial operator*(const Monomial &a, const Monomial &b) {
    Monomial m(a.exps_);
    for (std::size_t i = 0; i < m.exps_.size(); ++i)
      m.exps_[i] += b.exps_[i];
    return m;
  }

  friend bool operator==(const Monomial &a, const Monomial &b) {
    return a.exps_ == b.exps_;
  }
  friend bool operator!=(const Monomial &a, const Monomial &b) {
    return !(a == b);
  }

private:
  std::vector<std::uint32_t> exps_;
};

// Graded lexicographic comparison: higher total degree first, then the
// lexicographically larger exponent vector. Polynomials iterate and print
// in this (descending) order so output is deterministic everywhere.
inline bool grlex_after(const Monomial &a, const Monomial &b) {
  const auto da = a.degree(), db = b.degree();
  if (da != db)
    return da > db;
  return a.exponents() > b.exponents();
}

struct GrlexDescending {
  bool operator()(const Monomial &a, const Monomial &b) const {
    return grlex_after(a, b);
  }
};

} // namespace posicert
