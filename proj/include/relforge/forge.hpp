#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relforge/graph.hpp"
#include "relforge/polynomial.hpp"
#include "relforge/rational.hpp"
#include "relforge/reliability.hpp"
#include "relforge/root_isolation.hpp"

namespace relforge {

struct ClosedInterval {
  Rational lo, hi;

  bool operator==(const ClosedInterval&) const = default;
};

struct ForgeRequest {
  Rational lo, hi;  // the open target interval I, inside (-1, 0)
  Rational eps = make_rational(1, 1000000);
  int max_n = 41;
  int max_b = 9;
  // When set, use exactly this compact window K instead of the middle-half
  // rule; it must sit strictly inside I.
  std::optional<ClosedInterval> pinned_window;
};

// Self-contained evidence that the simple graph bundle_cycle(k+1,b)[H_n] has
// a reliability root inside `enclosure` (hence inside I). The chain of
// reasoning: `below` certifies the virtual edge interaction of H_n maps all
// of K into (-inf,-1); the witness W = (R_n+S_n)^b + k*S_n^b vanishes exactly
// where that interaction equals -k^(1/b) (b odd); -k^(-1/b) is a reliability
// root of the bundle-cycle, so every witness root in K transfers to the
// substituted simple graph.
struct ForgeCertificate {
  int version = 1;
  ClosedInterval interval;  // I
  ClosedInterval window;    // K
  int n = 0;                // gadget index (odd)
  long long k = 0;          // target parameter, >= 2
  int b = 1;                // odd bundle multiplicity
  BelowCertificate below;
  Polynomial witness;
  IsolatingInterval enclosure;
  long long vertices = 0, edges = 0;  // of bundle_cycle(k+1,b)[H_n]
};

struct ForgeError {
  std::string stage;
  std::vector<std::string> diagnostics;
};

using ForgeResult = std::variant<ForgeCertificate, ForgeError>;

inline void validate_request(const ForgeRequest& req) {
  if (!(Rational(-1) < req.lo && req.lo < req.hi && req.hi < Rational(0)))
    throw std::invalid_argument("forge: interval must satisfy -1 < lo < hi < 0");
  if (sgn(req.eps) <= 0) throw std::invalid_argument("forge: eps must be positive");
  if (req.max_n < 3) throw std::invalid_argument("forge: max_n >= 3 required");
  if (req.max_b < 1) throw std::invalid_argument("forge: max_b >= 1 required");
  if (req.pinned_window) {
    const auto& K = *req.pinned_window;
    if (!(req.lo < K.lo && K.lo < K.hi && K.hi < req.hi))
      throw std::invalid_argument("forge: pinned window must lie strictly inside the interval");
  }
}

// The compact window: middle half of I, which leaves slack on both sides so
// refinement never collides with I's open endpoints.
inline ClosedInterval choose_window(const ForgeRequest& req) {
  validate_request(req);
  if (req.pinned_window) return *req.pinned_window;
  Rational w = req.hi - req.lo;
  return {req.lo + w / 4, req.hi - w / 4};
}

inline ClosedInterval shrink_window(const ClosedInterval& K) {
  Rational w = K.hi - K.lo;
  return {K.lo + w / 4, K.hi - w / 4};
}

struct GadgetChoice {
  int n;
  BelowCertificate below;
};

// Smallest odd n <= max_n whose interaction is certified below -1 on K.
inline std::variant<GadgetChoice, ForgeError> find_gadget_index(const ClosedInterval& K,
                                                                int max_n) {
  std::vector<std::string> reasons;
  for (int n = 3; n <= max_n; n += 2) {
    BelowCertificate cert = certify_below(n, K.lo, K.hi);
    if (cert.success) return GadgetChoice{n, std::move(cert)};
    reasons.push_back("N=" + std::to_string(n) + ": " + cert.failure_reason);
  }
  reasons.push_back("no odd N <= " + std::to_string(max_n) + " certified on [" +
                    rational_str(K.lo) + ", " + rational_str(K.hi) + "]");
  return ForgeError{"find_n", std::move(reasons)};
}

struct TargetChoice {
  long long k;
  int b;
};

// Practical ceiling so graph summaries stay in 64-bit range; unreachable for
// intervals away from 0.
constexpr long kMaxTargetK = 1'000'000'000'000L;

// Pure arithmetic of the target search: smallest odd b <= max_b such that the
// open interval between |y_lo|^b and |y_hi|^b contains an integer k >= 2,
// ties broken by the smallest such k. Inputs are the exact interaction values
// at the window endpoints (both < -1). Returns the stage error reason on
// failure; "equal" asks the caller to shrink the window.
inline std::variant<TargetChoice, std::string> pick_power_target(const Rational& y_lo,
                                                                 const Rational& y_hi,
                                                                 int max_b) {
  Rational u = abs(y_lo), v = abs(y_hi);
  if (u > v) std::swap(u, v);
  if (u == v) return std::string("equal");
  for (int b = 1; b <= max_b; b += 2) {
    Rational ub = rational_pow(u, b), vb = rational_pow(v, b);
    Int k_floor;
    mpz_fdiv_q(k_floor.get_mpz_t(), ub.get_num().get_mpz_t(), ub.get_den().get_mpz_t());
    Int k = k_floor + 1;
    if (k < 2) k = 2;
    if (Rational(k) < vb) {
      if (k > kMaxTargetK) return std::string("target k exceeds the supported range");
      return TargetChoice{(long long)k.get_si(), b};
    }
  }
  return std::string("no integer target with odd b <= " + std::to_string(max_b));
}

// W = (R_n + S_n)^b + k * S_n^b. For odd b its roots are exactly the points
// where the interaction of H_n equals -k^(1/b), with the irrational target
// cleared away.
inline Polynomial build_witness(int n, long long k, int b) {
  if (b < 1 || b % 2 == 0) throw std::invalid_argument("build_witness: b must be odd");
  const Polynomial& R = rel_hn(n);
  const Polynomial& S = split_hn(n);
  return (R + S).pow(b) + Int((long)k) * S.pow(b);
}

namespace detail {

inline long long substituted_vertices(long long k, int b, int n) {
  return (k + 1) + (k + 1) * b * (n - 2);
}

inline long long substituted_edges(long long k, int b, int n) {
  return (k + 1) * b * ((long long)n * (n - 1) / 2 - 1);
}

}  // namespace detail

inline ForgeResult forge(const ForgeRequest& req) {
  validate_request(req);
  ClosedInterval K = choose_window(req);

  // The only retryable obstruction is a degenerate target search (equal
  // endpoint interactions or a witness-root landing exactly on an endpoint);
  // the deterministic response is to shrink K toward its center and rerun.
  for (int attempt = 0; attempt < 32; ++attempt) {
    auto found = find_gadget_index(K, req.max_n);
    if (std::holds_alternative<ForgeError>(found)) return std::get<ForgeError>(found);
    auto& choice = std::get<GadgetChoice>(found);

    Rational y_lo = yhat_eval(choice.n, K.lo);
    Rational y_hi = yhat_eval(choice.n, K.hi);
    auto target = pick_power_target(y_lo, y_hi, req.max_b);
    if (std::holds_alternative<std::string>(target)) {
      const std::string& why = std::get<std::string>(target);
      if (why == "equal") {
        K = shrink_window(K);
        continue;
      }
      return ForgeError{"choose_target", {why}};
    }
    auto [k, b] = std::get<TargetChoice>(target);

    Polynomial W = build_witness(choice.n, k, b);
    if (sign_at(W, K.lo) == 0 || sign_at(W, K.hi) == 0) {
      K = shrink_window(K);
      continue;
    }

    IsolatingInterval enclosure;
    if (W.degree() <= kSturmDegreeCap) {
      // Leftmost enclosure whose sign bracket matches the target crossing;
      // one exists because (yhat)^b + k changes sign across K.
      auto enclosures = isolate_roots(W, K.lo, K.hi);
      const IsolatingInterval* bracket = nullptr;
      for (const auto& iv : enclosures)
        if (iv.sign_lo != 0 && iv.sign_hi != 0 && iv.sign_lo != iv.sign_hi) {
          bracket = &iv;
          break;
        }
      if (!bracket)
        return ForgeError{"isolate",
                          {"no sign-changing witness enclosure in the window (unexpected)"}};
      enclosure = refine(W, *bracket, req.eps);
    } else {
      // Sturm is out of reach at this degree. The window endpoints bracket a
      // sign change of W by construction, so bisect the bracket down to eps
      // and keep halving until the Descartes image certifies a single root.
      Rational lo = K.lo, hi = K.hi;
      int s_lo = sign_at(W, lo), s_hi = sign_at(W, hi);
      if (s_lo == s_hi)
        return ForgeError{"isolate", {"witness does not change sign across the window"}};
      auto bisect_once = [&]() {
        Rational mid = (lo + hi) / 2;
        int s_mid = sign_at(W, mid);
        if (s_mid == 0) {
          // Exact rational root; tighten a bracket strictly around it.
          Rational d = std::min(Rational(req.eps / 4), Rational((hi - lo) / 4));
          while (sign_at(W, mid - d) == 0 || sign_at(W, mid + d) == 0) d /= 2;
          lo = mid - d;
          hi = mid + d;
          s_lo = sign_at(W, lo);
          s_hi = sign_at(W, hi);
          return;
        }
        if (s_mid != s_lo) {
          hi = mid;
          s_hi = s_mid;
        } else {
          lo = mid;
          s_lo = s_mid;
        }
      };
      while (hi - lo > req.eps) bisect_once();
      int extra = 0;
      while (descartes_bound(W, lo, hi) != 1 && extra++ < 64) bisect_once();
      if (extra > 64)
        return ForgeError{"isolate", {"could not certify a single witness root at this scale"}};
      enclosure = {lo, hi, s_lo, s_hi};
    }

    ForgeCertificate cert;
    cert.interval = {req.lo, req.hi};
    cert.window = K;
    cert.n = choice.n;
    cert.k = k;
    cert.b = b;
    cert.below = std::move(choice.below);
    cert.enclosure = std::move(enclosure);
    cert.witness = std::move(W);
    cert.vertices = detail::substituted_vertices(k, b, cert.n);
    cert.edges = detail::substituted_edges(k, b, cert.n);
    return cert;
  }
  return ForgeError{"shrink", {"window shrank past usefulness without a valid target"}};
}

struct VerifyResult {
  bool valid = false;
  std::vector<std::string> reasons;
};

// Independent re-check of a certificate: rebuilds the gadget polynomials from
// the recurrences and redoes every claim with fresh exact arithmetic. Uses
// only the polynomial and root-isolation layers plus certify_below.
inline VerifyResult verify(const ForgeCertificate& cert) {
  VerifyResult out;
  auto flag = [&](const std::string& why) { out.reasons.push_back(why); };

  if (cert.version != 1) flag("unsupported certificate version");
  if (!(Rational(-1) < cert.interval.lo && cert.interval.lo < cert.interval.hi &&
        cert.interval.hi < Rational(0)))
    flag("interval is not inside (-1, 0)");
  if (!(cert.interval.lo < cert.window.lo && cert.window.lo < cert.window.hi &&
        cert.window.hi < cert.interval.hi))
    flag("window is not strictly inside the interval");
  if (cert.n < 3 || cert.n % 2 == 0) flag("gadget index must be odd and >= 3");
  if (cert.b < 1 || cert.b % 2 == 0) flag("b must be odd and >= 1");
  if (cert.k < 2) flag("k must be >= 2");
  if (!out.reasons.empty()) return out;

  // Window certification, recomputed from scratch and compared.
  BelowCertificate below = certify_below(cert.n, cert.window.lo, cert.window.hi);
  if (!below.success) flag("window certification failed: " + below.failure_reason);
  else if (below.s_sign_lo != cert.below.s_sign_lo || below.s_sign_hi != cert.below.s_sign_hi ||
           below.b_sign_lo != cert.below.b_sign_lo || below.b_sign_hi != cert.below.b_sign_hi ||
           below.s_root_count != cert.below.s_root_count ||
           below.b_root_count != cert.below.b_root_count || !cert.below.success)
    flag("recorded window certification evidence does not match recomputation");

  Polynomial W = build_witness(cert.n, cert.k, cert.b);
  if (!(W == cert.witness)) flag("witness polynomial does not match (n, k, b)");

  const auto& enc = cert.enclosure;
  if (!(cert.window.lo <= enc.lo && enc.lo < enc.hi && enc.hi <= cert.window.hi))
    flag("enclosure is not contained in the window");
  if (!(cert.interval.lo < enc.lo && enc.hi < cert.interval.hi))
    flag("enclosure is not contained in the interval");

  int s_lo = sign_at(W, enc.lo), s_hi = sign_at(W, enc.hi);
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) flag("witness endpoint signs do not bracket a root");
  if (s_lo != enc.sign_lo || s_hi != enc.sign_hi) flag("recorded endpoint signs are wrong");

  if (out.reasons.empty()) {
    if (!certified_single_root(W, enc.lo, enc.hi))
      flag("enclosure does not isolate a single root");
    std::string why;
    if (!certified_root_free(split_hn(cert.n), enc.lo, enc.hi, &why))
      flag("split polynomial not root-free inside the enclosure: " + why);
  }

  if (cert.vertices != detail::substituted_vertices(cert.k, cert.b, cert.n) ||
      cert.edges != detail::substituted_edges(cert.k, cert.b, cert.n))
    flag("graph summary does not match (n, k, b)");

  out.valid = out.reasons.empty();
  return out;
}

}  // namespace relforge
