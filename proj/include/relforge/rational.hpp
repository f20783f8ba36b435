#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace relforge {

// Exact arbitrary-precision arithmetic, backed by GMP.
//
// Rational values are kept canonical (lowest terms, positive denominator).
// gmpxx preserves canonical form under arithmetic, so the invariant holds as
// long as construction goes through make_rational / parse_rational.
using Int = mpz_class;
using Rational = mpq_class;

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

inline Rational make_rational(Int num, Int den) {
  if (sgn(den) == 0) throw std::invalid_argument("rational: zero denominator");
  Rational r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

inline Int parse_int(const std::string& s) {
  if (s.empty()) throw FormatError("integer: empty string");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw FormatError("integer: no digits in '" + s + "'");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw FormatError("integer: bad character in '" + s + "'");
  return Int(s, 10);
}

// Accepts "p/q", plain integers, and exact decimals like "-0.35".
inline Rational parse_rational(const std::string& s) {
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (sgn(den) == 0) throw FormatError("rational: zero denominator in '" + s + "'");
    return make_rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.empty()) throw FormatError("rational: trailing '.' in '" + s + "'");
    for (char c : tail)
      if (c < '0' || c > '9') throw FormatError("rational: bad fraction digits in '" + s + "'");
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head == "+") head += "0";
    if (head.empty()) head = "0";
    Int ipart = parse_int(head);
    Int scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, tail.size());
    Int frac(tail, 10);
    Int num = abs(ipart) * scale + frac;
    if (neg) num = -num;
    return make_rational(num, scale);
  }
  return Rational(parse_int(s));
}

inline std::string rational_str(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Fixed-point decimal rendering, round half away from zero. Display aid only;
// the exact value is always the num/den pair.
inline std::string decimal_str(const Rational& x, int places = 12) {
  Int scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  Int num = x.get_num() * scale;
  const Int& den = x.get_den();
  Int scaled, rem;
  mpz_tdiv_qr(scaled.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * abs(rem) >= den) scaled += sgn(num) >= 0 ? 1 : -1;
  bool neg = sgn(scaled) < 0;
  std::string digits = Int(abs(scaled)).get_str();
  if ((int)digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, ".");
  return (neg ? "-" : "") + digits;
}

// x^e for integer e (negative allowed when x != 0).
inline Rational rational_pow(const Rational& x, long e) {
  if (e == 0) return Rational(1);
  if (sgn(x) == 0) {
    if (e < 0) throw std::domain_error("rational_pow: 0 to a negative power");
    return Rational(0);
  }
  unsigned long a = e > 0 ? (unsigned long)e : (unsigned long)(-e);
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), a);
  mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), a);
  return e > 0 ? make_rational(num, den) : make_rational(den, num);
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int r;
  if (k > n) return Int(0);
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace relforge
