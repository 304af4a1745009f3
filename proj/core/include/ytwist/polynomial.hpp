#ifndef YTWIST_POLYNOMIAL_HPP
#define YTWIST_POLYNOMIAL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ytwist/rational.hpp"

namespace ytwist {

/// Exponent pair of a monomial u^eu * v^ev.
struct Monomial {
  int eu = 0;
  int ev = 0;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Lexicographic order with u > v; map comparator puts the leading term first.
struct MonomialLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.eu != b.eu) return a.eu > b.eu;
    return a.ev > b.ev;
  }
};

/// Polynomial in the formal variables u, v with Rational coefficients.
/// No zero coefficients are stored; exponents are nonnegative.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialLexGreater>;

  Polynomial() = default;
  Polynomial(Rational c) {
    if (!c.is_zero()) terms_.emplace(Monomial{0, 0}, std::move(c));
  }
  Polynomial(long c) : Polynomial(Rational(c)) {}

  static Polynomial variable_u() { return monomial(1, 0, Rational(1)); }
  static Polynomial variable_v() { return monomial(0, 1, Rational(1)); }
  static Polynomial monomial(int eu, int ev, Rational c);
  /// a*u + b*v + c
  static Polynomial linear(const Rational& a, const Rational& b, const Rational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{0, 0});
  }
  /// True when every monomial has ev == 0 (u only or constant).
  bool univariate_in_u() const;
  bool depends_on_v() const;
  bool depends_on_u() const;

  int degree_u() const;
  int degree_v() const;
  int total_degree() const;

  /// Leading term under the fixed lex order.
  const Rational& leading_coeff() const;
  Monomial leading_monomial() const;
  Rational constant_term() const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Substitute u -> pu, v -> pv.
  Polynomial substitute(const Polynomial& pu, const Polynomial& pv) const;
  Rational evaluate(const Rational& u, const Rational& v) const;

  /// Coefficient of u^k, as a polynomial in v.
  Polynomial coeff_of_u(int k) const;

  std::string str() const;

 private:
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// Exact division; throws std::domain_error if b does not divide a.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

/// GCD over Q[u,v], normalized monic under the lex order. Uses a subresultant
/// polynomial remainder sequence to bound coefficient growth.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

}  // namespace ytwist

#endif
