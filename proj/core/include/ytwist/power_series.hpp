#ifndef YTWIST_POWER_SERIES_HPP
#define YTWIST_POWER_SERIES_HPP

#include <string>
#include <vector>

#include "ytwist/rational.hpp"

namespace ytwist {

/// Truncated formal power series in u^{-1}: coefficients c_0..c_D representing
/// sum c_r u^{-r}. All arithmetic truncates consistently at order D.
class PowerSeries {
 public:
  /// Zero series of the given truncation order.
  explicit PowerSeries(int order) : c_(static_cast<size_t>(order + 1)) {}
  PowerSeries(int order, Rational constant) : PowerSeries(order) { c_[0] = std::move(constant); }
  explicit PowerSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}

  static PowerSeries one(int order) { return PowerSeries(order, Rational(1)); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int r) const { return c_[static_cast<size_t>(r)]; }
  Rational& operator[](int r) { return c_[static_cast<size_t>(r)]; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;

  /// Truncate or zero-extend to a new order.
  PowerSeries resized(int order) const;

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator-(const PowerSeries& a);
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  PowerSeries& operator*=(const PowerSeries& o) { return *this = *this * o; }
  PowerSeries& operator*=(const Rational& c);

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }
  friend bool operator!=(const PowerSeries& a, const PowerSeries& b) { return !(a == b); }

  std::string str() const;

 private:
  std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const PowerSeries& s);

/// Multiplicative inverse; requires a nonzero constant term
/// ("non-invertible series" otherwise).
PowerSeries series_invert(const PowerSeries& a);

enum class SeriesTransform {
  NegateArgument,   // u -> -u
  ShiftArgument,    // u -> u + kappa
  ReflectArgument,  // u -> kappa - u
};

/// Exact coefficientwise recomposition under the argument transform; shifts
/// use the binomial re-expansion of (u + kappa)^{-r} truncated at order D.
PowerSeries series_substitute(const PowerSeries& a, SeriesTransform t, const Rational& kappa);

/// The unique q with constant term 1 and q(u) q(u + kappa) = w(u) up to the
/// truncation order; coefficients follow the triangular recursion
/// q_m = (w_m - lower-order terms)/2. Requires w to have constant term 1
/// ("unit series required").
PowerSeries solve_half_factorization(const PowerSeries& w, const Rational& kappa);

/// The unique square root with constant term 1 of a unit series
/// ("unit series required" when the constant term is not 1).
PowerSeries series_sqrt(const PowerSeries& c);

}  // namespace ytwist

#endif
