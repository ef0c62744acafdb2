#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "certmodel.hpp"
#include "parse.hpp"

namespace posicert {

// Structural violation in a certificate document, with the path of the
// offending field.
struct SchemaError : std::runtime_error {
  SchemaError(std::string path_, const std::string &msg)
      : std::runtime_error(path_ + ": " + msg), path(std::move(path_)) {}
  std::string path;
};

// On-disk unit: the instance together with one certificate of either
// shape. Numbers are stored as exact "num/den" strings and polynomials as
// grammar text; nothing in the format is floating point.
struct CertificateDocument {
  ProblemInstance instance;
  std::variant<PutinarCertificate, PreorderingCertificate> certificate;

  bool is_putinar() const {
    return std::holds_alternative<PutinarCertificate>(certificate);
  }
};

namespace certio {

using json = nlohmann::json;

inline const json &field(const json &obj, const char *key,
                         const std::string &path) {
  if (!obj.is_object())
    throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(path + "." + key, "missing field");
  return *it;
}

inline void reject_unknown(const json &obj,
                           std::initializer_list<const char *> allowed,
                           const std::string &path) {
  if (!obj.is_object())
    throw SchemaError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char *key : allowed)
      known = known || it.key() == key;
    if (!known)
      throw SchemaError(path + "." + it.key(), "unknown field");
  }
}

inline std::string as_string(const json &v, const std::string &path) {
  if (!v.is_string())
    throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

inline std::uint32_t as_uint(const json &v, const std::string &path) {
  if (!v.is_number_unsigned())
    throw SchemaError(path, "expected a nonnegative integer");
  return v.get<std::uint32_t>();
}

inline Rat as_rational(const json &v, const std::string &path) {
  try {
    return parse_rational(as_string(v, path));
  } catch (const std::invalid_argument &e) {
    throw SchemaError(path, e.what());
  }
}

inline Poly as_poly(const json &v, std::uint32_t nvars,
                    const std::string &path) {
  try {
    return parse_poly(as_string(v, path), nvars);
  } catch (const ParseError &e) {
    throw SchemaError(path, e.what());
  }
}

inline json sos_to_json(const Sos &s) {
  json arr = json::array();
  for (const auto &t : s.terms())
    arr.push_back({{"weight", rat_to_string(t.weight)},
                   {"body", print_poly(t.body)}});
  return arr;
}

inline Sos sos_from_json(const json &arr, std::uint32_t nvars,
                         const std::string &path) {
  if (!arr.is_array())
    throw SchemaError(path, "expected an array of squares");
  Sos s(nvars);
  std::size_t i = 0;
  for (const auto &entry : arr) {
    const std::string epath = path + "[" + std::to_string(i) + "]";
    reject_unknown(entry, {"weight", "body"}, epath);
    // Negative weights load fine; the verifier is the policy point.
    s.append(as_rational(field(entry, "weight", epath), epath + ".weight"),
             as_poly(field(entry, "body", epath), nvars, epath + ".body"));
    ++i;
  }
  return s;
}

} // namespace certio

inline std::string save_certificate(const CertificateDocument &doc) {
  using certio::json;
  json root;
  root["version"] = 1;
  json inst;
  inst["nvars"] = doc.instance.nvars;
  inst["f"] = print_poly(doc.instance.f);
  json gens = json::array();
  for (const auto &g : doc.instance.generators)
    gens.push_back(print_poly(g));
  inst["generators"] = std::move(gens);

  if (doc.is_putinar()) {
    const auto &cert = std::get<PutinarCertificate>(doc.certificate);
    root["kind"] = "putinar";
    inst["ball_bound"] = rat_to_string(cert.ball_bound);
    json body;
    body["sigma0"] = certio::sos_to_json(cert.sigma0);
    json sigmas = json::array();
    for (const auto &s : cert.sigmas)
      sigmas.push_back(certio::sos_to_json(s));
    body["sigmas"] = std::move(sigmas);
    body["sigma_ball"] = certio::sos_to_json(cert.sigma_ball);
    json prov;
    prov["lambda"] = rat_to_string(cert.provenance.lambda);
    prov["k_inner"] = cert.provenance.inner_exponent;
    prov["k_polya"] = cert.provenance.polya_exponent;
    json scalings = json::array();
    for (const auto &c : cert.provenance.scalings)
      scalings.push_back(rat_to_string(c));
    prov["scalings"] = std::move(scalings);
    body["provenance"] = std::move(prov);
    root["certificate"] = std::move(body);
  } else {
    const auto &cert = std::get<PreorderingCertificate>(doc.certificate);
    root["kind"] = "preordering";
    json body;
    json terms = json::array();
    for (const auto &[exponents, sos] : cert.terms) {
      json entry;
      entry["exponents"] = exponents;
      entry["sos"] = certio::sos_to_json(sos);
      terms.push_back(std::move(entry));
    }
    body["terms"] = std::move(terms);
    root["certificate"] = std::move(body);
  }
  root["instance"] = std::move(inst);
  return root.dump(1);
}

inline CertificateDocument load_certificate(const std::string &text) {
  using certio::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error &e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  certio::reject_unknown(root, {"version", "kind", "instance", "certificate"},
                         "$");
  if (certio::as_uint(certio::field(root, "version", "$"), "$.version") != 1)
    throw SchemaError("$.version", "unsupported version");
  const std::string kind =
      certio::as_string(certio::field(root, "kind", "$"), "$.kind");
  if (kind != "putinar" && kind != "preordering")
    throw SchemaError("$.kind", "must be 'putinar' or 'preordering'");

  const json &inst = certio::field(root, "instance", "$");
  const bool putinar = kind == "putinar";
  if (putinar)
    certio::reject_unknown(inst, {"nvars", "f", "generators", "ball_bound"},
                           "$.instance");
  else
    certio::reject_unknown(inst, {"nvars", "f", "generators"}, "$.instance");

  CertificateDocument doc;
  doc.instance.nvars =
      certio::as_uint(certio::field(inst, "nvars", "$.instance"),
                      "$.instance.nvars");
  if (doc.instance.nvars == 0)
    throw SchemaError("$.instance.nvars", "must be positive");
  doc.instance.f = certio::as_poly(certio::field(inst, "f", "$.instance"),
                                   doc.instance.nvars, "$.instance.f");
  const json &gens = certio::field(inst, "generators", "$.instance");
  if (!gens.is_array())
    throw SchemaError("$.instance.generators", "expected an array");
  std::size_t gi = 0;
  for (const auto &g : gens) {
    doc.instance.generators.push_back(certio::as_poly(
        g, doc.instance.nvars,
        "$.instance.generators[" + std::to_string(gi) + "]"));
    ++gi;
  }

  const json &body = certio::field(root, "certificate", "$");
  if (putinar) {
    doc.instance.ball_bound =
        certio::as_rational(certio::field(inst, "ball_bound", "$.instance"),
                            "$.instance.ball_bound");
    if (sgn(doc.instance.ball_bound) <= 0)
      throw SchemaError("$.instance.ball_bound", "must be positive");
    certio::reject_unknown(
        body, {"sigma0", "sigmas", "sigma_ball", "provenance"},
        "$.certificate");
    PutinarCertificate cert;
    cert.ball_bound = doc.instance.ball_bound;
    cert.sigma0 =
        certio::sos_from_json(certio::field(body, "sigma0", "$.certificate"),
                              doc.instance.nvars, "$.certificate.sigma0");
    const json &sigmas = certio::field(body, "sigmas", "$.certificate");
    if (!sigmas.is_array())
      throw SchemaError("$.certificate.sigmas", "expected an array");
    std::size_t si = 0;
    for (const auto &s : sigmas) {
      cert.sigmas.push_back(certio::sos_from_json(
          s, doc.instance.nvars,
          "$.certificate.sigmas[" + std::to_string(si) + "]"));
      ++si;
    }
    cert.sigma_ball = certio::sos_from_json(
        certio::field(body, "sigma_ball", "$.certificate"),
        doc.instance.nvars, "$.certificate.sigma_ball");
    const json &prov = certio::field(body, "provenance", "$.certificate");
    certio::reject_unknown(prov, {"lambda", "k_inner", "k_polya", "scalings"},
                           "$.certificate.provenance");
    cert.provenance.lambda =
        certio::as_rational(certio::field(prov, "lambda", "$..provenance"),
                            "$.certificate.provenance.lambda");
    cert.provenance.inner_exponent =
        certio::as_uint(certio::field(prov, "k_inner", "$..provenance"),
                        "$.certificate.provenance.k_inner");
    cert.provenance.polya_exponent =
        certio::as_uint(certio::field(prov, "k_polya", "$..provenance"),
                        "$.certificate.provenance.k_polya");
    const json &scalings = certio::field(prov, "scalings", "$..provenance");
    if (!scalings.is_array())
      throw SchemaError("$.certificate.provenance.scalings",
                        "expected an array");
    std::size_t ci = 0;
    for (const auto &c : scalings) {
      cert.provenance.scalings.push_back(certio::as_rational(
          c, "$.certificate.provenance.scalings[" + std::to_string(ci) + "]"));
      ++ci;
    }
    doc.certificate = std::move(cert);
  } else {
    doc.instance.ball_bound = Rat(1); // unused by the preordering check
    certio::reject_unknown(body, {"terms"}, "$.certificate");
    PreorderingCertificate cert;
    cert.nvars = doc.instance.nvars;
    const json &terms = certio::field(body, "terms", "$.certificate");
    if (!terms.is_array())
      throw SchemaError("$.certificate.terms", "expected an array");
    std::size_t ti = 0;
    for (const auto &entry : terms) {
      const std::string tpath =
          "$.certificate.terms[" + std::to_string(ti) + "]";
      certio::reject_unknown(entry, {"exponents", "sos"}, tpath);
      const json &exps = certio::field(entry, "exponents", tpath);
      if (!exps.is_array())
        throw SchemaError(tpath + ".exponents", "expected an array");
      std::vector<std::uint8_t> evec;
      for (const auto &e : exps) {
        if (!e.is_number_unsigned() || e.get<std::uint64_t>() > 1)
          throw SchemaError(tpath + ".exponents", "entries must be 0 or 1");
        evec.push_back(static_cast<std::uint8_t>(e.get<std::uint64_t>()));
      }
      cert.terms.emplace_back(
          std::move(evec),
          certio::sos_from_json(certio::field(entry, "sos", tpath),
                                doc.instance.nvars, tpath + ".sos"));
      ++ti;
    }
    doc.certificate = std::move(cert);
  }
  return doc;
}

inline void save_certificate_file(const CertificateDocument &doc,
                                  const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path);
  out << save_certificate(doc) << "\n";
  if (!out)
    throw std::runtime_error("write failed: " + path);
}

inline CertificateDocument load_certificate_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_certificate(buf.str());
}

// Dispatches to the matching verifier.
inline Verdict verify_document(const CertificateDocument &doc) {
  if (doc.is_putinar())
    return verify_putinar(std::get<PutinarCertificate>(doc.certificate),
                          doc.instance);
  return verify_preordering(std::get<PreorderingCertificate>(doc.certificate),
                            doc.instance.f, doc.instance.generators);
}

} // namespace posicert
