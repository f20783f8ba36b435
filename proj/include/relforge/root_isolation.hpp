#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relforge/polynomial.hpp"
#include "relforge/rational.hpp"

namespace relforge {

// Rational interval certified to contain exactly one distinct real root of
// the polynomial it was produced for. Endpoint signs are exact; when both are
// nonzero and differ the enclosed root has odd multiplicity.
struct IsolatingInterval {
  Rational lo, hi;
  int sign_lo = 0, sign_hi = 0;

  bool operator==(const IsolatingInterval&) const = default;
};

inline int sign_at(const Polynomial& p, const Rational& x) {
  if (p.is_zero()) return 0;
  return sgn(p.eval_parts(x).first);
}

namespace detail {

// Pseudo-remainder: R with lc(B)^(deg A - deg B + 1) * A = Q*B + R.
inline Polynomial pseudo_rem(const Polynomial& A, const Polynomial& B) {
  const Int& l = B.leading();
  int e = A.degree() - B.degree() + 1;
  Polynomial R = A;
  while (!R.is_zero() && R.degree() >= B.degree()) {
    Polynomial t = Polynomial::monomial(R.leading(), R.degree() - B.degree()) * B;
    R = l * R - t;
    --e;
  }
  if (e > 0) {
    Int lp;
    mpz_pow_ui(lp.get_mpz_t(), l.get_mpz_t(), e);
    R = lp * R;
  }
  return R;
}

// Exact quotient A / B in Z[x]; throws if the division is not exact.
inline Polynomial exact_div(const Polynomial& A, const Polynomial& B) {
  if (B.is_zero()) throw std::invalid_argument("exact_div: zero divisor");
  if (A.is_zero()) return Polynomial();
  if (A.degree() < B.degree()) throw std::invalid_argument("exact_div: nonzero remainder");
  std::vector<Int> q(A.degree() - B.degree() + 1);
  Polynomial R = A;
  while (!R.is_zero() && R.degree() >= B.degree()) {
    Int quo, rem;
    mpz_tdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), R.leading().get_mpz_t(),
                B.leading().get_mpz_t());
    if (sgn(rem) != 0) throw std::invalid_argument("exact_div: inexact leading coefficient");
    int k = R.degree() - B.degree();
    q[k] = quo;
    R = R - Polynomial::monomial(std::move(quo), k) * B;
  }
  if (!R.is_zero()) throw std::invalid_argument("exact_div: nonzero remainder");
  return Polynomial(std::move(q));
}

inline Polynomial primitive_part(const Polynomial& p) {
  if (p.is_zero()) return p;
  Int c = p.content();
  return c == 1 ? p : p.divided_by(c);
}

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace detail

// Sturm chain of a nonzero integer polynomial, with exact rational queries.
//
// The factor q^k is stripped first (count() re-adds that root when the query
// interval straddles zero) and the rest is reduced to its square-free part.
// The chain itself is computed as a subresultant PRS (Brown's algorithm, the
// variant used by SymPy) so coefficient growth stays polynomial; a tracked
// sign per element fixes the stored polynomial to be pointwise positively
// proportional to the textbook Sturm sequence element. The sign-variation
// theorem then applies unchanged: V(lo) - V(hi) equals the number of distinct
// real roots in (lo, hi] whenever neither endpoint is a root.
class SturmChain {
 public:
  explicit SturmChain(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("SturmChain: zero polynomial");
    int k = 0;
    while (sgn(p.coeff(k)) == 0) ++k;
    zero_mult_ = k;
    std::vector<Int> rest(p.coeffs().begin() + k, p.coeffs().end());
    Polynomial g = detail::primitive_part(Polynomial(std::move(rest)));
    build(g);
    // Distinct-root counting: if the PRS tail has positive degree, g was not
    // square-free; divide the gcd out and rebuild.
    if (seq_.back().degree() > 0) {
      Polynomial sf = detail::exact_div(g, detail::primitive_part(seq_.back()));
      build(detail::primitive_part(sf));
    }
  }

  // Number of distinct real roots of the original polynomial in (lo, hi),
  // assuming neither endpoint is a root (callers check).
  int count(const Rational& lo, const Rational& hi) const {
    int n = variations(lo) - variations(hi);
    if (zero_mult_ > 0 && sgn(lo) < 0 && sgn(hi) > 0) ++n;
    return n;
  }

  int variations(const Rational& x) const {
    int v = 0, prev = 0;
    for (const auto& f : seq_) {
      int s = sign_at(f, x);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  }

  const std::vector<Polynomial>& sequence() const { return seq_; }
  int root_multiplicity_at_zero() const { return zero_mult_; }

 private:
  void build(const Polynomial& g) {
    seq_.clear();
    seq_.push_back(g);
    if (g.degree() == 0) return;

    Polynomial f_prev = g;
    Polynomial f_cur = detail::primitive_part(g.derivative());
    int s_prev = 1, s_cur = 1;
    seq_.push_back(f_cur);
    if (f_cur.is_zero()) {
      seq_.pop_back();
      return;
    }

    int d = f_prev.degree() - f_cur.degree();
    // First step divides by (-1)^(d+1); afterwards by Brown's -lc * c^d.
    Polynomial h = detail::pseudo_rem(f_prev, f_cur);
    int mult_sign = sgn(f_cur.leading()) < 0 && d % 2 == 0 ? -1 : 1;  // sign of lc^(d+1)
    int div_sign = d % 2 == 0 ? -1 : 1;                               // sign of (-1)^(d+1)
    if (div_sign < 0) h = -h;
    int s_h = -s_prev * mult_sign * div_sign;

    Int lc = f_cur.leading();
    Int c = -detail::int_pow(lc, d);

    while (!h.is_zero()) {
      seq_.push_back(s_h > 0 ? h : -h);
      if (h.degree() == 0) break;

      int m_deg = f_cur.degree();
      f_prev = std::move(f_cur);
      s_prev = s_cur;
      f_cur = std::move(h);
      s_cur = s_h;
      d = m_deg - f_cur.degree();

      Int b = -lc * detail::int_pow(c, d);
      Polynomial r = detail::pseudo_rem(f_prev, f_cur);
      h = r.is_zero() ? Polynomial() : r.divided_by(b);
      mult_sign = sgn(f_cur.leading()) < 0 && d % 2 == 0 ? -1 : 1;
      s_h = -s_prev * mult_sign * sgn(b);

      lc = f_cur.leading();
      if (d > 1) {
        Int num = detail::int_pow(-lc, d);
        Int den = detail::int_pow(c, d - 1);
        mpz_divexact(c.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      } else {
        c = -lc;
      }
    }
  }

  std::vector<Polynomial> seq_;
  int zero_mult_ = 0;
};

// Process-wide chain cache: chains for the gadget polynomials are expensive
// and get queried against many intervals.
inline std::shared_ptr<const SturmChain> sturm_chain_for(const Polynomial& p) {
  static std::map<std::vector<Int>, std::shared_ptr<const SturmChain>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(p.coeffs()); it != cache.end()) return it->second;
  }
  auto chain = std::make_shared<const SturmChain>(p);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(p.coeffs(), std::move(chain)).first->second;
}

namespace detail {

inline void check_window(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw std::invalid_argument("root counting: zero polynomial");
  if (!(lo < hi)) throw std::invalid_argument("root counting: requires lo < hi");
  if (sign_at(p, lo) == 0 || sign_at(p, hi) == 0)
    throw std::invalid_argument(
        "root counting: root at an interval endpoint; perturb the endpoint");
}

inline void isolate_rec(const Polynomial& p, const SturmChain& chain, const Rational& lo,
                        const Rational& hi, std::vector<IsolatingInterval>& out) {
  int n = chain.count(lo, hi);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({lo, hi, sign_at(p, lo), sign_at(p, hi)});
    return;
  }
  Rational mid = (lo + hi) / 2;
  if (sign_at(p, mid) != 0) {
    isolate_rec(p, chain, lo, mid, out);
    isolate_rec(p, chain, mid, hi, out);
    return;
  }
  // Exact root at the midpoint: carve out a bracket that isolates it.
  Rational delta = (hi - lo) / 4;
  while (sign_at(p, mid - delta) == 0 || sign_at(p, mid + delta) == 0 ||
         chain.count(mid - delta, mid + delta) != 1)
    delta /= 2;
  isolate_rec(p, chain, lo, mid - delta, out);
  out.push_back({mid - delta, mid + delta, sign_at(p, mid - delta), sign_at(p, mid + delta)});
  isolate_rec(p, chain, mid + delta, hi, out);
}

}  // namespace detail

// Exact number of distinct real roots of p in the open interval (lo, hi).
// Rejects a root at either endpoint (perturb and retry at the call site).
inline int count_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  detail::check_window(p, lo, hi);
  return sturm_chain_for(p)->count(lo, hi);
}

// Pairwise-disjoint isolating intervals, one per distinct real root in
// (lo, hi), in increasing order.
inline std::vector<IsolatingInterval> isolate_roots(const Polynomial& p, const Rational& lo,
                                                    const Rational& hi) {
  detail::check_window(p, lo, hi);
  auto chain = sturm_chain_for(p);
  std::vector<IsolatingInterval> out;
  detail::isolate_rec(p, *chain, lo, hi, out);
  return out;
}

// --- Descartes-bound certificates ---------------------------------------
//
// Sturm chains answer every counting question but their subresultant
// coefficients grow like deg^2 * input bits; past degree ~500 a single chain
// runs to minutes and gigabytes (measured), while the forge needs counts on
// gadget polynomials of degree two thousand and beyond. For those sizes the
// classical Moebius + Descartes certificate does the two jobs the forge
// actually needs at O(deg^2) small-big-int cost: a 0-variation image proves
// root-freeness, a 1-variation image proves exactly one (simple) root.

// Sign variations of the coefficients of (c+ct)^d * p((a+bt)/(c+ct)) where
// lo = a/c, hi = b/c. Bounds the root count of p in (lo, hi) from above and
// matches its parity.
inline int descartes_bound(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw std::invalid_argument("descartes_bound: zero polynomial");
  if (!(lo < hi)) throw std::invalid_argument("descartes_bound: requires lo < hi");
  Int c;
  mpz_lcm(c.get_mpz_t(), lo.get_den().get_mpz_t(), hi.get_den().get_mpz_t());
  Int a = lo.get_num() * (c / lo.get_den());
  Int b = hi.get_num() * (c / hi.get_den());
  Polynomial A(std::vector<Int>{a, b});
  Polynomial B(std::vector<Int>{c, c});
  int d = p.degree();
  Polynomial acc = Polynomial::constant(p.coeff(d));
  Polynomial bpow = Polynomial::constant(1);
  for (int i = d - 1; i >= 0; --i) {
    bpow *= B;
    acc = acc * A + p.coeff(i) * bpow;
  }
  int v = 0, prev = 0;
  for (const auto& x : acc.coeffs()) {
    int s = sgn(x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

// Degree at or below which the Sturm engine is the tool of choice; above it
// the certificate functions below switch to Descartes bounds.
constexpr int kSturmDegreeCap = 320;

namespace detail {

inline bool root_free_rec(const Polynomial& p, const Rational& lo, const Rational& hi,
                          int depth, std::string* why) {
  if (descartes_bound(p, lo, hi) == 0) return true;
  Rational mid = (lo + hi) / 2;
  if (sign_at(p, mid) == 0) {
    if (why) *why = "root at " + rational_str(mid);
    return false;
  }
  if (depth == 0) {
    if (why) *why = "root-freeness not certified within bisection depth";
    return false;
  }
  return root_free_rec(p, lo, mid, depth - 1, why) && root_free_rec(p, mid, hi, depth - 1, why);
}

}  // namespace detail

// Certified "p has no roots in (lo, hi)". Exact in both directions for
// degrees within the Sturm cap; above it a false return either found a root
// or exhausted the bisection depth (the reason says which).
inline bool certified_root_free(const Polynomial& p, const Rational& lo, const Rational& hi,
                                std::string* why = nullptr) {
  if (p.is_zero()) {
    if (why) *why = "zero polynomial";
    return false;
  }
  if (sign_at(p, lo) == 0 || sign_at(p, hi) == 0) {
    if (why) *why = "root at an interval endpoint";
    return false;
  }
  if (p.degree() <= kSturmDegreeCap) {
    int n = count_roots(p, lo, hi);
    if (n != 0 && why) *why = std::to_string(n) + " roots counted";
    return n == 0;
  }
  int s_lo = sign_at(p, lo), s_hi = sign_at(p, hi);
  if (s_lo != s_hi) {
    if (why) *why = "sign change across the interval";
    return false;
  }
  return detail::root_free_rec(p, lo, hi, 10, why);
}

// Certified "p has exactly one distinct root in (lo, hi)". The large-degree
// branch demands a 1-variation Descartes image, which certifies one simple
// root; producers of such intervals shrink until that holds.
inline bool certified_single_root(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero() || sign_at(p, lo) == 0 || sign_at(p, hi) == 0) return false;
  if (p.degree() <= kSturmDegreeCap) return count_roots(p, lo, hi) == 1;
  return descartes_bound(p, lo, hi) == 1;
}

// Bisect iv down to width <= eps. The result is nested inside iv and keeps
// exact endpoint signs (the sign-change bracket is preserved when present).
inline IsolatingInterval refine(const Polynomial& p, const IsolatingInterval& iv,
                                const Rational& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("refine: eps must be positive");
  Rational lo = iv.lo, hi = iv.hi;
  int s_lo = sign_at(p, lo), s_hi = sign_at(p, hi);
  std::shared_ptr<const SturmChain> chain;  // built lazily for the no-sign-change mode
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / 2;
    int s_mid = sign_at(p, mid);
    if (s_mid == 0) {
      // Landed exactly on the root; return a tight bracket around it.
      Rational d = std::min(Rational(eps / 4), Rational((hi - lo) / 4));
      while (sign_at(p, mid - d) == 0 || sign_at(p, mid + d) == 0) d /= 2;
      return {mid - d, mid + d, sign_at(p, mid - d), sign_at(p, mid + d)};
    }
    if (s_lo != 0 && s_hi != 0 && s_lo != s_hi) {
      if (s_mid != s_lo) {
        hi = mid;
        s_hi = s_mid;
      } else {
        lo = mid;
        s_lo = s_mid;
      }
    } else {
      if (!chain) chain = sturm_chain_for(p);
      if (chain->count(lo, mid) == 1) {
        hi = mid;
        s_hi = s_mid;
      } else {
        lo = mid;
        s_lo = s_mid;
      }
    }
  }
  return {lo, hi, s_lo, s_hi};
}

}  // namespace relforge
