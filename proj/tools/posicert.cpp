// Command-line front end: certify / verify / polya / eval.
//
// Exit codes:
//   certify: 0 certified, 2 budget exhausted, 3 not positive (witness
//            printed), 1 usage or parse error
//   verify:  0 accepted, 4 rejected (residual printed), 1 usage/file error
//   polya:   0 exponent found, 2 cap exceeded, 1 usage or parse error
//   eval:    0 evaluated, 1 usage or parse error

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <posicert/certfile.hpp>
#include <posicert/certmodel.hpp>
#include <posicert/parse.hpp>
#include <posicert/polya.hpp>
#include <posicert/putinar.hpp>

namespace {

using namespace posicert;

std::vector<Rat> parse_rational_list(const std::string &text,
                                     const char *what) {
  std::vector<Rat> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    if (item.empty())
      throw std::invalid_argument(std::string("empty entry in ") + what);
    out.push_back(parse_rational(item));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::string format_point(const std::vector<Rat> &point) {
  std::string out = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i)
      out += ", ";
    out += rat_to_string(point[i]);
  }
  return out + ")";
}

int run_certify(const std::string &f_text,
                const std::vector<std::string> &g_texts,
                const std::string &ball_text, unsigned nvars,
                const std::string &lambda_text, unsigned k_inner_max,
                unsigned polya_cap, unsigned density,
                std::uint64_t max_cert_terms, const std::string &out_path) {
  ProblemInstance inst;
  inst.nvars = nvars;
  inst.f = parse_poly(f_text, nvars);
  for (const auto &g : g_texts)
    inst.generators.push_back(parse_poly(g, nvars));
  inst.ball_bound = parse_rational(ball_text);

  SearchBudget budget = SearchBudget::defaults();
  if (!lambda_text.empty())
    budget.lambda_schedule = parse_rational_list(lambda_text,
                                                 "--lambda-schedule");
  budget.max_inner_exponent = k_inner_max;
  budget.polya_cap = polya_cap;
  budget.sample_density = density;
  budget.max_certificate_terms = max_cert_terms;
  budget.validate();

  const CertifyResult result = certify(inst, budget);
  switch (result.status) {
  case CertifyResult::Status::certified: {
    const auto &cert = *result.certificate;
    std::cout << "certified\n";
    std::cout << "lambda = " << rat_to_string(cert.provenance.lambda) << "\n";
    std::cout << "k_inner = " << cert.provenance.inner_exponent << "\n";
    std::cout << "k_polya = " << cert.provenance.polya_exponent << "\n";
    std::cout << "scalings =";
    for (const auto &c : cert.provenance.scalings)
      std::cout << " " << rat_to_string(c);
    std::cout << "\n";
    std::cout << "sigma0 squares = " << cert.sigma0.size() << "\n";
    std::cout << "certificate degree = " << certificate_degree(cert, inst)
              << "\n";
    if (!out_path.empty()) {
      CertificateDocument doc{inst, cert};
      save_certificate_file(doc, out_path);
      std::cout << "wrote " << out_path << "\n";
    }
    return 0;
  }
  case CertifyResult::Status::not_positive:
    std::cout << "not positive: objective is nonpositive at "
              << format_point(result.witness) << "\n";
    return 3;
  case CertifyResult::Status::budget_exhausted:
  default:
    std::cout << "budget exhausted after " << result.attempts.size()
              << " attempts\n";
    for (const auto &a : result.attempts) {
      std::cout << "  k_inner=" << a.inner_exponent
                << " lambda=" << rat_to_string(a.lambda) << " ";
      switch (a.outcome) {
      case CertifyAttempt::Outcome::skipped_on_witness:
        std::cout << "skipped (grid witness of nonpositivity)";
        break;
      case CertifyAttempt::Outcome::polya_cap_exceeded:
        std::cout << "polya cap exceeded";
        break;
      case CertifyAttempt::Outcome::certificate_too_large:
        std::cout << "certificate too large (predicted " << a.predicted_terms
                  << " terms)";
        break;
      }
      std::cout << "\n";
    }
    return 2;
  }
}

int run_verify(const std::string &cert_path) {
  const CertificateDocument doc = load_certificate_file(cert_path);
  const Verdict verdict = verify_document(doc);
  if (verdict.accepted) {
    std::cout << "Accept\n";
    return 0;
  }
  std::cout << "Reject: " << verdict.reason << "\n";
  std::cout << "residual = " << print_poly(verdict.residual) << "\n";
  return 4;
}

int run_polya(const std::string &form_text, unsigned nvars2,
              const std::string &level_text, unsigned cap) {
  const auto geom =
      SimplexGeometry::from_level(nvars2, parse_rational(level_text));
  const Poly form = parse_poly(form_text, nvars2);
  const auto result = polya_exponent(form, geom, cap);
  if (!result) {
    std::cout << "cap exceeded: no admissible exponent up to " << cap << "\n";
    return 2;
  }
  std::cout << "k = " << result->exponent << "\n";
  std::cout << "G = " << print_poly(result->scaled_form) << "\n";
  return 0;
}

int run_eval(const std::string &poly_text, const std::string &point_text) {
  const std::vector<Rat> point = parse_rational_list(point_text, "--at");
  const Poly p =
      parse_poly(poly_text, static_cast<std::uint32_t>(point.size()));
  std::cout << rat_to_string(p.eval(point)) << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"rational positivity certificates on compact semialgebraic "
               "sets"};
  app.require_subcommand(1);

  // certify
  auto *certify_cmd =
      app.add_subcommand("certify", "search for a quadratic-module "
                                    "certificate of positivity");
  std::string f_text, ball_text, lambda_text, out_path;
  std::vector<std::string> g_texts;
  unsigned nvars = 0;
  unsigned k_inner_max = 6, polya_cap = 50, density = 8;
  std::uint64_t max_cert_terms = SearchBudget{}.max_certificate_terms;
  certify_cmd->add_option("--f", f_text, "objective polynomial")->required();
  certify_cmd->add_option("--g", g_texts, "constraint polynomial (repeat)");
  certify_cmd->add_option("--ball-N", ball_text,
                          "bound N of the designated N - sum x_i^2")
      ->required();
  certify_cmd->add_option("--nvars", nvars, "number of variables")->required();
  certify_cmd->add_option("--lambda-schedule", lambda_text,
                          "comma-separated descending rationals");
  certify_cmd->add_option("--k-inner-max", k_inner_max,
                          "largest inner exponent");
  certify_cmd->add_option("--polya-cap", polya_cap, "exponent search cap");
  certify_cmd->add_option("--density", density, "prescreen grid density");
  certify_cmd->add_option("--max-cert-terms", max_cert_terms,
                          "certificate size guard (coefficient terms)");
  certify_cmd->add_option("-o,--output", out_path, "certificate file to write");

  // verify
  auto *verify_cmd =
      app.add_subcommand("verify", "check a certificate file exactly");
  std::string cert_path;
  verify_cmd->add_option("--cert", cert_path, "certificate file")->required();

  // polya
  auto *polya_cmd = app.add_subcommand(
      "polya", "find the smallest admissible exponent for a form");
  std::string form_text, level_text;
  unsigned nvars2 = 0, cap = 50;
  polya_cmd->add_option("--form", form_text, "homogeneous form in x1..x2n")
      ->required();
  polya_cmd->add_option("--nvars2", nvars2, "doubled variable count (2n)")
      ->required();
  polya_cmd->add_option("--level", level_text, "simplex level 2n(N + 1/4)")
      ->required();
  polya_cmd->add_option("--cap", cap, "exponent search cap");

  // eval
  auto *eval_cmd = app.add_subcommand("eval", "evaluate a polynomial exactly");
  std::string poly_text, point_text;
  eval_cmd->add_option("--poly", poly_text, "polynomial")->required();
  eval_cmd->add_option("--at", point_text, "comma-separated rational point")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (certify_cmd->parsed())
      return run_certify(f_text, g_texts, ball_text, nvars, lambda_text,
                         k_inner_max, polya_cap, density, max_cert_terms,
                         out_path);
    if (verify_cmd->parsed())
      return run_verify(cert_path);
    if (polya_cmd->parsed())
      return run_polya(form_text, nvars2, level_text, cap);
    if (eval_cmd->parsed())
      return run_eval(poly_text, point_text);
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const SchemaError &e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
