#ifndef YTWIST_RATIONAL_FUNCTION_HPP
#define YTWIST_RATIONAL_FUNCTION_HPP

#include <string>

#include "ytwist/polynomial.hpp"

namespace ytwist {

class PowerSeries;

/// Reduced fraction of polynomials in u, v. Invariants: the denominator is
/// nonzero and monic under the lex order, and gcd(num, den) = 1.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Rational(1)) {}
  RationalFunction(Rational c) : num_(std::move(c)), den_(Rational(1)) {}
  RationalFunction(long c) : num_(Rational(c)), den_(Rational(1)) {}
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(Rational(1)) {}
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction variable_u() { return RationalFunction(Polynomial::variable_u()); }
  static RationalFunction variable_v() { return RationalFunction(Polynomial::variable_v()); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool univariate_in_u() const { return num_.univariate_in_u() && den_.univariate_in_u(); }

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator-(const RationalFunction& a);

  RationalFunction inverse() const;

  /// Canonical forms make equality a coefficient comparison.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  /// Substitute u -> pu, v -> pv (polynomial expressions).
  RationalFunction substitute(const Polynomial& pu, const Polynomial& pv) const;
  Rational evaluate(const Rational& u, const Rational& v) const;

  std::string str() const;

 private:
  Polynomial num_, den_;
  void normalize();
};

std::ostream& operator<<(std::ostream& os, const RationalFunction& f);

/// Laurent expansion at u = infinity of a proper univariate fraction,
/// truncated at u^{-order}. Requires deg(num) <= deg(den) in u and no v
/// dependence; violations raise "not expandable at infinity" and
/// "univariate required" respectively.
PowerSeries expand_at_infinity(const RationalFunction& f, int order);

}  // namespace ytwist

#endif
