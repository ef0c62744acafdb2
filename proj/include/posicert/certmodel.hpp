#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "instance.hpp"
#include "sos.hpp"

namespace posicert {

// Search witnesses recorded next to a generated certificate.
struct Provenance {
  Rat lambda;
  unsigned inner_exponent = 0;
  unsigned polya_exponent = 0;
  std::vector<Rat> scalings;
};

// f = sigma0 + sum_i sigmas[i] * g_i + sigma_ball * (N - sum X_j^2).
// The identity is checked by verify_putinar, never assumed; certificates
// loaded from files are untrusted until verified.
struct PutinarCertificate {
  Sos sigma0;
  std::vector<Sos> sigmas;
  Sos sigma_ball;
  Rat ball_bound;
  Provenance provenance;
};

// f = sum over e in {0,1}^s of terms[e] * g_1^{e_1} ... g_s^{e_s}.
struct PreorderingCertificate {
  std::uint32_t nvars = 0;
  std::vector<std::pair<std::vector<std::uint8_t>, Sos>> terms;
};

struct Verdict {
  bool accepted = false;
  Poly residual; // exact difference certificate-expansion minus f
  std::string reason;

  static Verdict accept(std::uint32_t nvars) {
    return {true, Poly::zero(nvars), ""};
  }
  static Verdict reject(Poly residual, std::string reason) {
    return {false, std::move(residual), std::move(reason)};
  }
};

// Exact symbolic check of the quadratic-module identity. Uses only
// polynomial arithmetic and SOS expansion, so it is independent of how
// the certificate was assembled.
inline Verdict verify_putinar(const PutinarCertificate &cert,
                              const ProblemInstance &instance) {
  instance.validate();
  if (cert.sigmas.size() != instance.generators.size())
    throw std::invalid_argument(
        "certificate and instance disagree on the generator count");
  if (cert.ball_bound != instance.ball_bound)
    throw std::invalid_argument(
        "certificate and instance disagree on the ball bound");

  const std::uint32_t n = instance.nvars;
  bool weights_ok = cert.sigma0.all_weights_nonnegative() &&
                    cert.sigma_ball.all_weights_nonnegative();
  for (const auto &s : cert.sigmas)
    weights_ok = weights_ok && s.all_weights_nonnegative();

  auto expanded = [n](const Sos &s) {
    return s.empty() ? Poly::zero(n) : s.expand();
  };

  Poly total = expanded(cert.sigma0);
  for (std::size_t i = 0; i < cert.sigmas.size(); ++i)
    total = total + expanded(cert.sigmas[i]) * instance.generators[i];
  total = total + expanded(cert.sigma_ball) * ball_polynomial(n, cert.ball_bound);
  Poly residual = total - instance.f;

  if (!weights_ok)
    return Verdict::reject(std::move(residual), "negative SOS weight");
  if (!residual.is_zero())
    return Verdict::reject(std::move(residual), "nonzero residual");
  return Verdict::accept(n);
}

inline Verdict verify_preordering(const PreorderingCertificate &cert,
                                  const Poly &f,
                                  const std::vector<Poly> &generators) {
  const std::uint32_t n = f.nvars();
  for (const auto &g : generators)
    if (g.nvars() != n)
      throw std::invalid_argument("generator has the wrong variable count");
  bool weights_ok = true;
  Poly total = Poly::zero(n);
  for (const auto &[exponents, sos] : cert.terms) {
    if (exponents.size() != generators.size())
      throw std::invalid_argument("malformed exponent vector");
    Poly prod = sos.empty() ? Poly::zero(n) : sos.expand();
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] > 1)
        throw std::invalid_argument("exponent entries must be 0 or 1");
      if (exponents[i] == 1)
        prod = prod * generators[i];
    }
    total = total + prod;
    weights_ok = weights_ok && sos.all_weights_nonnegative();
  }
  Poly residual = total - f;
  if (!weights_ok)
    return Verdict::reject(std::move(residual), "negative SOS weight");
  if (!residual.is_zero())
    return Verdict::reject(std::move(residual), "nonzero residual");
  return Verdict::accept(n);
}

// Largest total degree among the expanded summands of the identity.
inline long certificate_degree(const PutinarCertificate &cert,
                               const ProblemInstance &instance) {
  const std::uint32_t n = instance.nvars;
  long deg = cert.sigma0.empty() ? -1 : cert.sigma0.expand().total_degree();
  for (std::size_t i = 0; i < cert.sigmas.size(); ++i) {
    if (cert.sigmas[i].empty())
      continue;
    deg = std::max(deg, (cert.sigmas[i].expand() *
                         instance.generators[i]).total_degree());
  }
  if (!cert.sigma_ball.empty())
    deg = std::max(deg, (cert.sigma_ball.expand() *
                         ball_polynomial(n, cert.ball_bound)).total_degree());
  return deg;
}

inline long certificate_degree(const PreorderingCertificate &cert,
                               const std::vector<Poly> &generators) {
  long deg = -1;
  for (const auto &[exponents, sos] : cert.terms) {
    if (sos.empty())
      continue;
    Poly prod = sos.expand();
    for (std::size_t i = 0; i < exponents.size() && i < generators.size(); ++i)
      if (exponents[i] == 1)
        prod = prod * generators[i];
    deg = std::max(deg, prod.total_degree());
  }
  return deg;
}

} // namespace posicert
