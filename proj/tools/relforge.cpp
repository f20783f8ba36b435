// relforge: reliability polynomials, certified real-root isolation, and
// density-forge certificates from the command line.
//
// Exit codes: 0 success, 1 domain failure (NotFound, guards, undefined
// values), 2 input/format errors. stdout carries exactly one JSON document
// (CSV in `diag --format csv`); diagnostics go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relforge/forge.hpp"
#include "relforge/graph.hpp"
#include "relforge/reliability.hpp"
#include "relforge/root_isolation.hpp"
#include "relforge/serialize.hpp"

namespace {

using namespace relforge;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitFormat = 2;

bool guard_override() {
  const char* v = std::getenv("RELFORGE_GUARD_OVERRIDE");
  return v != nullptr && std::string(v) == "1";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void emit(const json& j) { std::cout << to_file_string(j); }

int fail(int code, const std::string& msg) {
  std::cerr << "relforge: " << msg << "\n";
  return code;
}

Rational arg_rational(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const FormatError& e) {
    throw CLI::ValidationError(std::string("not a rational: ") + s);
  }
}

int cmd_rel(const std::string& path, const std::string& method) {
  Multigraph g = parse_graph_text(read_file(path)).graph;
  Polynomial rel;
  try {
    rel = method == "delcon" ? rel_delcon(g) : rel_bruteforce(g, guard_override());
  } catch (const std::invalid_argument& e) {
    return fail(kExitDomain, e.what());
  }
  emit(poly_to_json(rel));
  return kExitOk;
}

int cmd_split(const std::string& path) {
  ParsedGraph parsed = parse_graph_text(read_file(path));
  if (!parsed.terminals)
    throw FormatError("split needs a gadget file (missing 'terminals u v' line)");
  emit(poly_to_json(split_bruteforce(parsed.gadget(), guard_override())));
  return kExitOk;
}

int cmd_gadget(int n) {
  GadgetPolys gp = gadget_polys(n);
  json out = gadget_polys_to_json(gp);
  out["yhat"] = json{{"num", poly_to_json(gp.R + gp.S)}, {"den", poly_to_json(gp.S)}};
  emit(out);
  return kExitOk;
}

int cmd_roots(const std::string& path, const Rational& lo, const Rational& hi,
              const Rational& eps) {
  std::string text = read_file(path);
  Polynomial p;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    p = poly_from_json(parse_json(text));
  } else {
    Multigraph g = parse_graph_text(text).graph;
    try {
      p = rel_delcon(g);
    } catch (const std::invalid_argument& e) {
      return fail(kExitDomain, e.what());
    }
  }
  std::vector<IsolatingInterval> roots;
  try {
    roots = isolate_roots(p, lo, hi);
  } catch (const std::invalid_argument& e) {
    return fail(kExitFormat, e.what());
  }
  json out = json::array();
  for (const auto& iv : roots) out.push_back(enclosure_to_json(refine(p, iv, eps)));
  emit(out);
  return kExitOk;
}

int cmd_forge(const Rational& lo, const Rational& hi, const Rational& eps, int max_n, int max_b,
              const std::vector<std::string>& window, const std::string& out_path) {
  ForgeRequest req;
  req.lo = lo;
  req.hi = hi;
  req.eps = eps;
  req.max_n = max_n;
  req.max_b = max_b;
  if (!window.empty())
    req.pinned_window = ClosedInterval{arg_rational(window[0]), arg_rational(window[1])};
  try {
    validate_request(req);
  } catch (const std::invalid_argument& e) {
    return fail(kExitFormat, e.what());
  }
  ForgeResult res = forge(req);
  if (std::holds_alternative<ForgeError>(res)) {
    const auto& err = std::get<ForgeError>(res);
    std::cerr << "relforge: forge failed at stage '" << err.stage << "'\n";
    for (const auto& d : err.diagnostics) std::cerr << "  " << d << "\n";
    return kExitDomain;
  }
  const auto& cert = std::get<ForgeCertificate>(res);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return fail(kExitFormat, "cannot write certificate file: " + out_path);
  out << to_file_string(certificate_to_json(cert));
  emit(json{{"N", cert.n},
            {"k", cert.k},
            {"b", cert.b},
            {"enclosure", enclosure_to_json(cert.enclosure)},
            {"graph", json{{"vertices", cert.vertices}, {"edges", cert.edges}}}});
  return kExitOk;
}

int cmd_verify(const std::string& path) {
  ForgeCertificate cert = certificate_from_json(parse_json(read_file(path)));
  VerifyResult res = verify(cert);
  if (res.valid) {
    emit(json{{"valid", true}});
    return kExitOk;
  }
  emit(json{{"valid", false}, {"reasons", res.reasons}});
  return kExitDomain;
}

int cmd_diag(const Rational& q, int n_max, const std::string& format) {
  if (!(Rational(-1) < q && q < Rational(0)))
    return fail(kExitFormat, "diag: q must lie in (-1, 0)");
  auto cell = [](const Rational& v) {
    return json{{"exact", rational_to_json(v)}, {"decimal", decimal_str(v)}};
  };
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,C,R,S_scaled,yhat_scaled\n";
  for (int n = 2; n <= n_max; ++n) {
    Rational c = rel_complete(n).eval(q);
    Rational r = rel_hn(n).eval(q);
    Rational s = split_hn(n).eval(q);
    Rational s_scaled = rational_pow(q, 2 - n) * s;
    json row{{"n", n}, {"C", cell(c)}, {"R", cell(r)}, {"S_scaled", cell(s_scaled)}};
    csv << n << "," << decimal_str(c) << "," << decimal_str(r) << "," << decimal_str(s_scaled);
    if (sgn(s) != 0) {
      Rational y_scaled = Rational(2) * rational_pow(q, n - 2) * ((r + s) / s);
      row["yhat_scaled"] = cell(y_scaled);
      csv << "," << decimal_str(y_scaled) << "\n";
    } else {
      row["yhat_scaled"] = nullptr;  // split polynomial vanishes at q
      csv << ",\n";
    }
    rows.push_back(std::move(row));
  }
  if (format == "csv") {
    std::cout << csv.str();
  } else {
    emit(json{{"q", rational_to_json(q)}, {"rows", std::move(rows)}});
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"all-terminal reliability roots: exact engines, certificates, and the forge"};
  app.require_subcommand(1);

  std::string graph_path, method = "brute", out_path, format = "json";
  std::string poly_or_graph, cert_path;
  std::vector<std::string> interval, window;
  std::string eps_str = "1/1000000", q_str;
  int gadget_n = 0, max_n = 41, max_b = 9, n_max = 41;

  auto* rel = app.add_subcommand("rel", "all-terminal reliability polynomial of a graph file");
  rel->add_option("graph", graph_path, "graph text file")->required();
  rel->add_option("--method", method, "brute|delcon")
      ->check(CLI::IsMember({"brute", "delcon"}));

  auto* split = app.add_subcommand("split", "split reliability of a two-terminal gadget file");
  split->add_option("gadget", graph_path, "gadget text file (with terminals line)")->required();

  auto* gadget = app.add_subcommand("gadget", "recurrence-built gadget polynomials R_n, S_n");
  gadget->add_option("n", gadget_n, "gadget index (2..60)")->required();

  auto* roots = app.add_subcommand("roots", "isolate real roots in an interval");
  roots->add_option("input", poly_or_graph, "polynomial JSON or graph text file")->required();
  roots->add_option("--interval", interval, "LO HI (exact rationals)")
      ->expected(2)
      ->required();
  roots->add_option("--eps", eps_str, "enclosure width target (rational)");

  auto* forge_cmd = app.add_subcommand("forge", "certified reliability root in a target interval");
  forge_cmd->add_option("--interval", interval, "LO HI with -1 < LO < HI < 0")
      ->expected(2)
      ->required();
  forge_cmd->add_option("--eps", eps_str, "enclosure width target (rational)");
  forge_cmd->add_option("--max-n", max_n, "odd cap for the gadget index scan");
  forge_cmd->add_option("--max-b", max_b, "odd cap for the power search");
  forge_cmd->add_option("--window", window, "pin the compact window K to LO HI")->expected(2);
  forge_cmd->add_option("--out", out_path, "certificate output file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate file from scratch");
  verify_cmd->add_option("certificate", cert_path, "certificate JSON file")->required();

  auto* diag = app.add_subcommand("diag", "convergence diagnostics of the gadget family at q");
  diag->add_option("--q", q_str, "evaluation point in (-1,0), exact rational")->required();
  diag->add_option("--n-max", n_max, "largest gadget index (<= 60)");
  diag->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitFormat;
  }

  try {
    if (*rel) return cmd_rel(graph_path, method);
    if (*split) return cmd_split(graph_path);
    if (*gadget) {
      if (gadget_n < 2 || gadget_n > 60)
        return fail(kExitFormat, "gadget: n must be within 2..60");
      return cmd_gadget(gadget_n);
    }
    if (*roots)
      return cmd_roots(poly_or_graph, arg_rational(interval[0]), arg_rational(interval[1]),
                       arg_rational(eps_str));
    if (*forge_cmd)
      return cmd_forge(arg_rational(interval[0]), arg_rational(interval[1]),
                       arg_rational(eps_str), max_n, max_b, window, out_path);
    if (*verify_cmd) return cmd_verify(cert_path);
    if (*diag) {
      if (n_max < 2 || n_max > 60) return fail(kExitFormat, "diag: n-max must be within 2..60");
      return cmd_diag(arg_rational(q_str), n_max, format);
    }
  } catch (const FormatError& e) {
    return fail(kExitFormat, e.what());
  } catch (const CLI::ValidationError& e) {
    return fail(kExitFormat, e.what());
  } catch (const json::exception& e) {
    return fail(kExitFormat, e.what());
  } catch (const GuardError& e) {
    return fail(kExitDomain, e.what());
  } catch (const std::domain_error& e) {
    return fail(kExitDomain, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitDomain, e.what());
  }
  return kExitFormat;
}
