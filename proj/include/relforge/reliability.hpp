#pragma once

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relforge/graph.hpp"
#include "relforge/polynomial.hpp"
#include "relforge/rational.hpp"
#include "relforge/root_isolation.hpp"

namespace relforge {

// 2^m subset enumeration ceiling for the oracle engines. Callers opt out
// explicitly (CLI: RELFORGE_GUARD_OVERRIDE=1).
constexpr int kOracleEdgeGuard = 25;

namespace detail {

inline void check_oracle_guard(int m, bool allow_large, const char* who) {
  if (m > 62)
    throw GuardError(std::string(who) + ": subset enumeration over " + std::to_string(m) +
                     " edges is not representable");
  if (m > kOracleEdgeGuard && !allow_large)
    throw GuardError(std::string(who) + ": graph has " + std::to_string(m) + " edges (> " +
                     std::to_string(kOracleEdgeGuard) +
                     "); pass the override to enumerate anyway");
}

// counts[k] = number of k-edge subsets A of E(g) whose spanning subgraph
// (V, A) is connected.
inline std::vector<unsigned long long> connected_subset_counts(const Multigraph& g) {
  int m = g.edge_count(), n = g.vertex_count();
  std::vector<unsigned long long> counts(m + 1, 0);
  const auto& edges = g.edges();
  for (unsigned long long mask = 0; mask < (1ull << m); ++mask) {
    int k = std::popcount(mask);
    if (k < n - 1) continue;
    DisjointSets ds(n);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) ds.unite(edges[i].first, edges[i].second);
    if (ds.components() == 1) ++counts[k];
  }
  return counts;
}

// sum_k counts[k] * (1-q)^k * q^(m-k)
inline Polynomial reliability_from_counts(const std::vector<unsigned long long>& counts, int m) {
  Polynomial one_minus_q{1, -1};
  Polynomial acc;
  Polynomial up_pow = Polynomial::constant(1);
  for (int k = 0; k <= m; ++k) {
    if (counts[k] != 0) acc += (Int((unsigned long)counts[k]) * up_pow).shifted(m - k);
    if (k < m) up_pow *= one_minus_q;
  }
  return acc;
}

}  // namespace detail

// Rel(g;q) by direct enumeration of all edge subsets.
inline Polynomial rel_bruteforce(const Multigraph& g, bool allow_large = false) {
  detail::check_oracle_guard(g.edge_count(), allow_large, "rel_bruteforce");
  return detail::reliability_from_counts(detail::connected_subset_counts(g), g.edge_count());
}

// Split reliability of a two-terminal graph: subsets whose spanning subgraph
// has exactly two components, one holding u and one holding v.
inline Polynomial split_bruteforce(const Gadget& h, bool allow_large = false) {
  int m = h.graph.edge_count(), n = h.graph.vertex_count();
  detail::check_oracle_guard(m, allow_large, "split_bruteforce");
  const auto& edges = h.graph.edges();
  std::vector<unsigned long long> counts(m + 1, 0);
  for (unsigned long long mask = 0; mask < (1ull << m); ++mask) {
    detail::DisjointSets ds(n);
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) ds.unite(edges[i].first, edges[i].second);
    if (ds.components() == 2 && ds.find(h.u) != ds.find(h.v)) ++counts[std::popcount(mask)];
  }
  return detail::reliability_from_counts(counts, m);
}

// F(g,z): coefficient i counts the i-edge deletions that leave g connected.
inline Polynomial f_polynomial(const Multigraph& g, bool allow_large = false) {
  detail::check_oracle_guard(g.edge_count(), allow_large, "f_polynomial");
  auto counts = detail::connected_subset_counts(g);
  int m = g.edge_count();
  std::vector<Int> coeffs(m + 1);
  for (int i = 0; i <= m; ++i) coeffs[i] = Int((unsigned long)counts[m - i]);
  return Polynomial(std::move(coeffs));
}

// Closed form of f_polynomial(bundle_cycle(n, b)): per bundle, deletions that
// keep it alive generate B(z) = (1+z)^b - z^b; a connected outcome kills no
// bundle or exactly one, so F = B^n + n z^b B^(n-1).
inline Polynomial f_bundle_cycle(int n, int b) {
  if (n < 2 || b < 1) throw std::invalid_argument("f_bundle_cycle: need n >= 2, b >= 1");
  Polynomial z_pow_b = Polynomial::monomial(1, b);
  Polynomial B = Polynomial{1, 1}.pow(b) - z_pow_b;
  return B.pow(n) + Int(n) * (z_pow_b * B.pow(n - 1));
}

namespace detail {

inline Multigraph contract_bundle(const Multigraph& g, int a, int b) {
  // merge b into a, drop all a-b copies (they become loops), relabel > b down
  std::vector<Multigraph::Edge> edges;
  for (auto [x, y] : g.edges()) {
    if ((x == a && y == b) || (x == b && y == a)) continue;
    if (x == b) x = a;
    if (y == b) y = a;
    if (x > b) --x;
    if (y > b) --y;
    edges.emplace_back(x, y);
  }
  return Multigraph(g.vertex_count() - 1, std::move(edges));
}

inline Multigraph delete_bundle(const Multigraph& g, int a, int b) {
  std::vector<Multigraph::Edge> edges;
  for (const auto& e : g.edges())
    if (!(e.first == a && e.second == b)) edges.push_back(e);
  return Multigraph(g.vertex_count(), std::move(edges));
}

inline Polynomial delcon_rec(const Multigraph& g) {
  if (g.vertex_count() == 1) return Polynomial::constant(1);
  // connected with >= 2 vertices, so edges exist; take the lowest edge and
  // treat its whole parallel class in one step
  auto [a, b] = g.edges().front();
  int mult = 0;
  for (const auto& e : g.edges())
    if (e.first == a && e.second == b) ++mult;
    else break;
  Polynomial alive = Polynomial::constant(1) - Polynomial::monomial(1, mult);  // 1 - q^mult
  Polynomial res = alive * delcon_rec(contract_bundle(g, a, b));
  Multigraph del = delete_bundle(g, a, b);
  if (is_connected(del)) res += Polynomial::monomial(1, mult) * delcon_rec(del);
  return res;
}

}  // namespace detail

// Rel(g;q) by deletion-contraction; parallel classes are processed as one
// step with weights (1 - q^mult) / q^mult. Deterministic recursion order:
// always the lowest edge in canonical order.
inline Polynomial rel_delcon(const Multigraph& g) {
  if (!is_connected(g)) throw std::invalid_argument("rel_delcon: input must be connected");
  return detail::delcon_rec(g);
}

// --- the K_n / H_n recurrence family -----------------------------------

// Reliability and split-reliability pair of the gadget with index n.
struct GadgetPolys {
  int n = 0;
  Polynomial R;  // Rel(H_n;q)
  Polynomial S;  // split reliability of H_n
};

namespace detail {

template <typename Compute>
const Polynomial& memoized(std::map<int, Polynomial>& cache, std::mutex& mu, int n,
                           Compute&& compute) {
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  Polynomial value = compute();  // recursion happens outside the lock
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(value)).first->second;
}

}  // namespace detail

// Rel(K_n;q) via the complete-graph recurrence
//   C_n = 1 - sum_{a=1}^{n-1} C(n-1,a-1) C_a q^(a(n-a)),  C_1 = 1.
inline const Polynomial& rel_complete(int n) {
  if (n < 1) throw std::invalid_argument("rel_complete: n >= 1 required");
  static std::map<int, Polynomial> cache;
  static std::mutex mu;
  return detail::memoized(cache, mu, n, [n]() {
    if (n == 1) return Polynomial::constant(1);
    Polynomial sum;
    for (int a = 1; a <= n - 1; ++a)
      sum += (binomial(n - 1, a - 1) * rel_complete(a)).shifted(a * (n - a));
    return Polynomial::constant(1) - sum;
  });
}

// Split reliability of H_n via
//   S_n = sum_{a=1}^{n-1} C(n-2,a-1) C_a C_{n-a} q^(a(n-a)-1).
inline const Polynomial& split_hn(int n) {
  if (n < 2) throw std::invalid_argument("split_hn: n >= 2 required");
  static std::map<int, Polynomial> cache;
  static std::mutex mu;
  return detail::memoized(cache, mu, n, [n]() {
    Polynomial sum;
    for (int a = 1; a <= n - 1; ++a) {
      Polynomial prod = rel_complete(a) * rel_complete(n - a);
      sum += (binomial(n - 2, a - 1) * prod).shifted(a * (n - a) - 1);
    }
    return sum;
  });
}

// Rel(H_n;q) via
//   R_n = 1 - sum_{a=1}^{n-1} C(n-2,a-1) C_a q^(a(n-a)-1)
//           - sum_{a=3}^{n-1} C(n-2,a-2) R_a q^(a(n-a)).
inline const Polynomial& rel_hn(int n) {
  if (n < 2) throw std::invalid_argument("rel_hn: n >= 2 required");
  static std::map<int, Polynomial> cache;
  static std::mutex mu;
  return detail::memoized(cache, mu, n, [n]() {
    Polynomial sum;
    for (int a = 1; a <= n - 1; ++a)
      sum += (binomial(n - 2, a - 1) * rel_complete(a)).shifted(a * (n - a) - 1);
    for (int a = 3; a <= n - 1; ++a)
      sum += (binomial(n - 2, a - 2) * rel_hn(a)).shifted(a * (n - a));
    return Polynomial::constant(1) - sum;
  });
}

inline GadgetPolys gadget_polys(int n) { return GadgetPolys{n, rel_hn(n), split_hn(n)}; }

// --- substitution and the virtual edge interaction ----------------------

namespace detail {

// Structural test for "complete graph minus the terminal edge" so that
// substitution can use the recurrence polynomials at any size.
inline bool is_hn_shape(const Gadget& h) {
  int n = h.graph.vertex_count();
  if (n < 3) return false;
  if (h.graph.edge_count() != n * (n - 1) / 2 - 1) return false;
  if (!is_simple(h.graph)) return false;
  int lo = std::min(h.u, h.v), hi = std::max(h.u, h.v);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      bool want = !(a == lo && b == hi);
      bool have = std::binary_search(h.graph.edges().begin(), h.graph.edges().end(),
                                     Multigraph::Edge{a, b});
      if (want != have) return false;
    }
  return true;
}

}  // namespace detail

// Rel(g[h];q) through the substitution identity
//   Rel(G[H];q) = Rel(H;q)^m * F(G, S(H)/Rel(H)),
// evaluated with cleared denominators, never by expanding the big graph.
inline Polynomial rel_substitution(const Multigraph& g, const Gadget& h,
                                   bool allow_large = false) {
  if (!is_connected(g)) throw std::invalid_argument("rel_substitution: g must be connected");
  if (!is_connected(h.graph))
    throw std::invalid_argument("rel_substitution: gadget must be connected");
  Polynomial F = f_polynomial(g, allow_large);
  Polynomial relh, splith;
  if (detail::is_hn_shape(h)) {
    int n = h.graph.vertex_count();
    relh = rel_hn(n);
    splith = split_hn(n);
  } else {
    relh = rel_bruteforce(h.graph, allow_large);
    splith = split_bruteforce(h, allow_large);
  }
  return clear_compose(F, splith, relh, g.edge_count());
}

// Virtual edge interaction of H_n at x: (R_n + S_n)/S_n, exact.
inline Rational yhat_eval(int n, const Rational& x) {
  if (n < 3) throw std::invalid_argument("yhat_eval: n >= 3 required");
  Rational s = split_hn(n).eval(x);
  if (sgn(s) == 0)
    throw std::domain_error("yhat_eval: split polynomial vanishes; interaction undefined");
  return (rel_hn(n).eval(x) + s) / s;
}

// --- certified interaction bound ----------------------------------------

// Evidence that the virtual edge interaction of H_n stays below -1 on all of
// [lo, hi]. Reduction lemma: at any point with S_n != 0,
//   yhat_n < -1  <=>  R_n/S_n < -2  <=>  sign(S_n) * (R_n + 2 S_n) < 0,
// since multiplying through by S_n flips the inequality exactly when
// S_n < 0, which the sign factor absorbs. Both S_n and B := R_n + 2 S_n are
// certified root-free on (lo, hi) and nonvanishing at the endpoints, so
// their signs are constant on [lo, hi] and the endpoint check
// sign(S)*sign(B) < 0 extends to the whole interval.
struct BelowCertificate {
  int n = 0;
  Rational lo, hi;
  bool success = false;
  std::string failure_reason;
  int s_root_count = -1, b_root_count = -1;
  int s_sign_lo = 0, s_sign_hi = 0, b_sign_lo = 0, b_sign_hi = 0;
};

inline BelowCertificate certify_below(int n, const Rational& lo, const Rational& hi) {
  if (n < 3) throw std::invalid_argument("certify_below: n >= 3 required");
  if (!(Rational(-1) < lo && lo < hi && hi < Rational(0)))
    throw std::invalid_argument("certify_below: need -1 < lo < hi < 0");
  BelowCertificate cert;
  cert.n = n;
  cert.lo = lo;
  cert.hi = hi;

  const Polynomial& S = split_hn(n);
  Polynomial B = rel_hn(n) + 2 * S;

  auto fail = [&](std::string why) {
    cert.failure_reason = std::move(why);
    return cert;
  };

  cert.s_sign_lo = sign_at(S, lo);
  cert.s_sign_hi = sign_at(S, hi);
  cert.b_sign_lo = sign_at(B, lo);
  cert.b_sign_hi = sign_at(B, hi);
  if (cert.s_sign_lo == 0 || cert.s_sign_hi == 0)
    return fail("split polynomial vanishes at an interval endpoint");
  if (cert.b_sign_lo == 0 || cert.b_sign_hi == 0)
    return fail("R + 2S vanishes at an interval endpoint");

  // Cheap exact screening before any Sturm work: a single sample with
  // sign(S)*sign(B) >= 0 already disproves the bound at that point.
  auto violated = [&](const Rational& x) {
    int ss = sign_at(S, x), bs = sign_at(B, x);
    return ss == 0 || ss * bs >= 0;
  };
  if (cert.s_sign_lo * cert.b_sign_lo >= 0)
    return fail("interaction not below -1 at lo (exact sign)");
  if (cert.s_sign_hi * cert.b_sign_hi >= 0)
    return fail("interaction not below -1 at hi (exact sign)");
  for (int i = 1; i <= 7; ++i) {
    Rational x = lo + (hi - lo) * i / 8;
    if (violated(x)) return fail("interaction not below -1 at sample point " + rational_str(x));
  }

  std::string why;
  if (!certified_root_free(S, lo, hi, &why))
    return fail("split polynomial not certified root-free on the interval: " + why);
  cert.s_root_count = 0;
  if (!certified_root_free(B, lo, hi, &why))
    return fail("R + 2S not certified root-free on the interval: " + why);
  cert.b_root_count = 0;

  cert.success = true;
  return cert;
}

}  // namespace relforge
