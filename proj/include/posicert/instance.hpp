#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "poly.hpp"

namespace posicert {

// The question being certified: is f nonnegative on the set cut out by
// g_1 >= 0, ..., g_s >= 0? The caller asserts that N - sum X_i^2 lies in
// the quadratic module of the generators (the compactness certificate);
// nothing here checks that, it is the input contract.
struct ProblemInstance {
  std::uint32_t nvars = 0;
  Poly f;
  std::vector<Poly> generators;
  Rat ball_bound; // N

  void validate() const {
    if (nvars == 0)
      throw std::invalid_argument("instance needs at least one variable");
    if (f.nvars() != nvars)
      throw std::invalid_argument("objective has the wrong variable count");
    for (const auto &g : generators)
      if (g.nvars() != nvars)
        throw std::invalid_argument("generator has the wrong variable count");
    if (sgn(ball_bound) <= 0)
      throw std::invalid_argument("ball bound must be positive");
  }
};

} // namespace posicert
