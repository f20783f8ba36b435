#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relforge/rational.hpp"

namespace relforge {

// Dense univariate polynomial over arbitrary-precision integers.
//
// coeffs[i] is the coefficient of q^i, trailing zeros trimmed. The zero
// polynomial is the empty coefficient vector; its degree() is kZeroDegree,
// which compares below every true degree (negative-infinity semantics).
class Polynomial {
 public:
  static constexpr int kZeroDegree = -1;

  Polynomial() = default;
  explicit Polynomial(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<long> coeffs) {
    coeffs_.assign(coeffs.begin(), coeffs.end());
    trim();
  }

  static Polynomial constant(Int c) {
    std::vector<Int> v;
    if (sgn(c) != 0) v.push_back(std::move(c));
    return Polynomial(std::move(v));
  }

  static Polynomial monomial(Int c, int degree) {
    if (degree < 0) throw std::invalid_argument("monomial: negative degree");
    std::vector<Int> v(degree + 1);
    v[degree] = std::move(c);
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return (int)coeffs_.size() - 1; }
  const std::vector<Int>& coeffs() const { return coeffs_; }

  const Int& coeff(int i) const {
    static const Int zero(0);
    if (i < 0 || i >= (int)coeffs_.size()) return zero;
    return coeffs_[i];
  }

  const Int& leading() const {
    if (is_zero()) throw std::invalid_argument("leading: zero polynomial");
    return coeffs_.back();
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Int> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i < a.coeffs_.size()) c[i] += a.coeffs_[i];
      if (i < b.coeffs_.size()) c[i] += b.coeffs_[i];
    }
    return Polynomial(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Int> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i < a.coeffs_.size()) c[i] += a.coeffs_[i];
      if (i < b.coeffs_.size()) c[i] -= b.coeffs_[i];
    }
    return Polynomial(std::move(c));
  }

  Polynomial operator-() const {
    std::vector<Int> c(coeffs_);
    for (auto& x : c) x = -x;
    return Polynomial(std::move(c));
  }

  // Schoolbook convolution. Degrees stay in the low thousands and the
  // big-integer coefficient cost dominates, so nothing fancier is warranted.
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Int> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (sgn(a.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Int& s, const Polynomial& p) {
    if (sgn(s) == 0) return Polynomial();
    std::vector<Int> c(p.coeffs_);
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  bool operator==(const Polynomial& o) const = default;

  // p * q^k
  Polynomial shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    if (k < 0) throw std::invalid_argument("shifted: negative shift");
    std::vector<Int> c(coeffs_.size() + k);
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + k);
    return Polynomial(std::move(c));
  }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(1);
    Polynomial base = *this;
    for (; e != 0; e >>= 1) {
      if (e & 1) r *= base;
      if (e > 1) base *= base;
    }
    return r;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Int> c(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = Int(i) * coeffs_[i];
    return Polynomial(std::move(c));
  }

  // Exact p(num/den) as the integer pair (sum_i c_i num^i den^(deg-i), den^deg).
  // Keeping the uncanonicalized pair lets sign_at skip the gcd.
  std::pair<Int, Int> eval_parts(const Rational& x) const {
    if (is_zero()) return {Int(0), Int(1)};
    const Int num = x.get_num(), den = x.get_den();
    Int acc = coeffs_.back(), dpow = 1;
    for (int i = (int)coeffs_.size() - 2; i >= 0; --i) {
      dpow *= den;
      acc *= num;
      acc += coeffs_[i] * dpow;
    }
    return {std::move(acc), std::move(dpow)};
  }

  Rational eval(const Rational& x) const {
    auto [n, d] = eval_parts(x);
    return make_rational(std::move(n), std::move(d));
  }

  Int eval_int(const Int& x) const {
    Int acc = 0;
    for (int i = (int)coeffs_.size() - 1; i >= 0; --i) {
      acc *= x;
      acc += coeffs_[i];
    }
    return acc;
  }

  // gcd of coefficients (non-negative; 0 for the zero polynomial).
  Int content() const {
    Int g = 0;
    for (const auto& c : coeffs_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  // Divides every coefficient by d; d must divide exactly.
  Polynomial divided_by(const Int& d) const {
    if (sgn(d) == 0) throw std::invalid_argument("divided_by: zero divisor");
    std::vector<Int> c(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      mpz_divexact(c[i].get_mpz_t(), coeffs_[i].get_mpz_t(), d.get_mpz_t());
    return Polynomial(std::move(c));
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Int& c = coeffs_[i];
      if (sgn(c) == 0) continue;
      if (!out.empty()) out += sgn(c) > 0 ? " + " : " - ";
      else if (sgn(c) < 0) out += "-";
      Int a = abs(c);
      if (a != 1 || i == 0) out += a.get_str();
      if (i >= 1) out += "q";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  }

  std::vector<Int> coeffs_;
};

// R^m * F(S/R) with denominators cleared: sum_i F_i S^i R^(m-i).
// Requires deg F <= m so the result is a polynomial.
inline Polynomial clear_compose(const Polynomial& F, const Polynomial& S, const Polynomial& R,
                                int m) {
  if (m <= 0) throw std::invalid_argument("clear_compose: m must be positive");
  if (F.degree() > m) throw std::invalid_argument("clear_compose: deg F exceeds m");
  if (F.is_zero()) return Polynomial();
  int d = F.degree();
  Polynomial acc = Polynomial::constant(F.coeff(d));
  Polynomial rpow = Polynomial::constant(1);
  for (int i = d - 1; i >= 0; --i) {
    rpow *= R;
    acc = acc * S + F.coeff(i) * rpow;
  }
  return acc * R.pow(m - d);
}

}  // namespace relforge
