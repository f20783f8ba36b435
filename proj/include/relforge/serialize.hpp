#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "relforge/forge.hpp"
#include "relforge/polynomial.hpp"
#include "relforge/rational.hpp"
#include "relforge/reliability.hpp"
#include "relforge/root_isolation.hpp"

// JSON wire formats. All arbitrary-precision values cross the boundary as
// decimal strings; rationals as ["num","den"] pairs in lowest terms. Object
// keys serialize sorted (nlohmann default), so equal values print
// byte-identically.
namespace relforge {

using json = nlohmann::json;

inline json rational_to_json(const Rational& x) {
  return json::array({x.get_num().get_str(), x.get_den().get_str()});
}

inline Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw FormatError("rational: expected [\"num\",\"den\"]");
  Int num = parse_int(j[0].get<std::string>());
  Int den = parse_int(j[1].get<std::string>());
  if (sgn(den) == 0) throw FormatError("rational: zero denominator");
  return make_rational(std::move(num), std::move(den));
}

inline json poly_to_json(const Polynomial& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(c.get_str());
  return json{{"coeffs", std::move(coeffs)}};
}

inline Polynomial poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw FormatError("polynomial: expected {\"coeffs\": [...]}");
  std::vector<Int> coeffs;
  coeffs.reserve(j["coeffs"].size());
  for (const auto& c : j["coeffs"]) {
    if (!c.is_string()) throw FormatError("polynomial: coefficients must be decimal strings");
    coeffs.push_back(parse_int(c.get<std::string>()));
  }
  return Polynomial(std::move(coeffs));
}

inline json interval_to_json(const ClosedInterval& iv) {
  return json{{"lo", rational_to_json(iv.lo)}, {"hi", rational_to_json(iv.hi)}};
}

inline ClosedInterval interval_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
    throw FormatError("interval: expected {\"lo\", \"hi\"}");
  return ClosedInterval{rational_from_json(j["lo"]), rational_from_json(j["hi"])};
}

inline json enclosure_to_json(const IsolatingInterval& iv) {
  return json{{"lo", rational_to_json(iv.lo)},
              {"hi", rational_to_json(iv.hi)},
              {"sign_lo", iv.sign_lo},
              {"sign_hi", iv.sign_hi}};
}

inline IsolatingInterval enclosure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi") || !j.contains("sign_lo") ||
      !j.contains("sign_hi") || !j["sign_lo"].is_number_integer() ||
      !j["sign_hi"].is_number_integer())
    throw FormatError("enclosure: expected {\"lo\", \"hi\", \"sign_lo\", \"sign_hi\"}");
  return IsolatingInterval{rational_from_json(j["lo"]), rational_from_json(j["hi"]),
                           j["sign_lo"].get<int>(), j["sign_hi"].get<int>()};
}

inline json gadget_polys_to_json(const GadgetPolys& gp) {
  return json{{"n", gp.n}, {"R", poly_to_json(gp.R)}, {"S", poly_to_json(gp.S)}};
}

inline json below_cert_to_json(const BelowCertificate& c) {
  return json{{"n", c.n},
              {"lo", rational_to_json(c.lo)},
              {"hi", rational_to_json(c.hi)},
              {"success", c.success},
              {"s_root_count", c.s_root_count},
              {"b_root_count", c.b_root_count},
              {"s_sign_lo", c.s_sign_lo},
              {"s_sign_hi", c.s_sign_hi},
              {"b_sign_lo", c.b_sign_lo},
              {"b_sign_hi", c.b_sign_hi}};
}

inline BelowCertificate below_cert_from_json(const json& j) {
  for (const char* key : {"n", "lo", "hi", "success", "s_root_count", "b_root_count",
                          "s_sign_lo", "s_sign_hi", "b_sign_lo", "b_sign_hi"})
    if (!j.contains(key)) throw FormatError(std::string("below_cert: missing field ") + key);
  BelowCertificate c;
  c.n = j["n"].get<int>();
  c.lo = rational_from_json(j["lo"]);
  c.hi = rational_from_json(j["hi"]);
  c.success = j["success"].get<bool>();
  c.s_root_count = j["s_root_count"].get<int>();
  c.b_root_count = j["b_root_count"].get<int>();
  c.s_sign_lo = j["s_sign_lo"].get<int>();
  c.s_sign_hi = j["s_sign_hi"].get<int>();
  c.b_sign_lo = j["b_sign_lo"].get<int>();
  c.b_sign_hi = j["b_sign_hi"].get<int>();
  return c;
}

inline json certificate_to_json(const ForgeCertificate& cert) {
  return json{{"version", cert.version},
              {"interval", interval_to_json(cert.interval)},
              {"K", interval_to_json(cert.window)},
              {"N", cert.n},
              {"k", cert.k},
              {"b", cert.b},
              {"W", poly_to_json(cert.witness)},
              {"enclosure", enclosure_to_json(cert.enclosure)},
              {"below_cert", below_cert_to_json(cert.below)},
              {"graph", json{{"vertices", cert.vertices}, {"edges", cert.edges}}}};
}

inline ForgeCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("certificate: expected a JSON object");
  if (!j.contains("version") || !j["version"].is_number_integer())
    throw FormatError("certificate: missing version");
  if (j["version"].get<long long>() != 1)
    throw FormatError("certificate: unsupported version " + j["version"].dump());
  for (const char* key :
       {"interval", "K", "N", "k", "b", "W", "enclosure", "below_cert", "graph"})
    if (!j.contains(key)) throw FormatError(std::string("certificate: missing field ") + key);
  if (!j["graph"].contains("vertices") || !j["graph"].contains("edges"))
    throw FormatError("certificate: graph summary needs vertices and edges");
  ForgeCertificate cert;
  cert.version = 1;
  cert.interval = interval_from_json(j["interval"]);
  cert.window = interval_from_json(j["K"]);
  cert.n = j["N"].get<int>();
  cert.k = j["k"].get<long long>();
  cert.b = j["b"].get<int>();
  cert.witness = poly_from_json(j["W"]);
  cert.enclosure = enclosure_from_json(j["enclosure"]);
  cert.below = below_cert_from_json(j["below_cert"]);
  cert.vertices = j["graph"]["vertices"].get<long long>();
  cert.edges = j["graph"]["edges"].get<long long>();
  return cert;
}

// Canonical file rendering: 2-space indent, sorted keys, trailing newline.
inline std::string to_file_string(const json& j) { return j.dump(2) + "\n"; }

inline json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FormatError("invalid JSON");
  return j;
}

}  // namespace relforge
