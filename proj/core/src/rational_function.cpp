#include "ytwist/rational_function.hpp"

#include <ostream>

#include "ytwist/power_series.hpp"

namespace ytwist {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(Rational(1));
    return;
  }
  if (!den_.is_constant()) {
    Polynomial g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_divide(num_, g);
      den_ = exact_divide(den_, g);
    }
  }
  Rational lc = den_.leading_coeff();
  if (!lc.is_one()) {
    Rational inv = lc.inverse();
    num_ *= inv;
    den_ *= inv;
  }
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

RationalFunction operator-(const RationalFunction& a) {
  RationalFunction r;
  r.num_ = -a.num_;
  r.den_ = a.den_;
  return r;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::substitute(const Polynomial& pu, const Polynomial& pv) const {
  return RationalFunction(num_.substitute(pu, pv), den_.substitute(pu, pv));
}

Rational RationalFunction::evaluate(const Rational& u, const Rational& v) const {
  Rational d = den_.evaluate(u, v);
  if (d.is_zero()) throw std::domain_error("pole at evaluation point");
  return num_.evaluate(u, v) / d;
}

std::string RationalFunction::str() const {
  if (den_.is_constant()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.str(); }

PowerSeries expand_at_infinity(const RationalFunction& f, int order) {
  if (!f.univariate_in_u()) throw std::invalid_argument("univariate required");
  int dn = f.num().degree_u();
  int dd = f.den().degree_u();
  if (dn > dd) throw std::domain_error("not expandable at infinity");
  // In w = 1/u: f = w^{dd-dn} * nrev(w)/drev(w) with drev(0) = lc(den) != 0.
  std::vector<Rational> nrev(static_cast<size_t>(order + 1)), drev(static_cast<size_t>(order + 1));
  for (const auto& [m, c] : f.num().terms()) {
    int k = dn - m.eu;
    if (k <= order) nrev[static_cast<size_t>(k)] = c;
  }
  for (const auto& [m, c] : f.den().terms()) {
    int k = dd - m.eu;
    if (k <= order) drev[static_cast<size_t>(k)] = c;
  }
  int shift = dd - dn;
  PowerSeries out(order);
  if (f.is_zero()) return out;
  // Power series division nrev/drev in w, then shift by w^{dd-dn}.
  Rational lc = drev[0].inverse();
  std::vector<Rational> q(static_cast<size_t>(order + 1));
  for (int m = 0; m + shift <= order; ++m) {
    Rational s = nrev[static_cast<size_t>(m)];
    for (int i = 1; i <= m; ++i) s -= drev[static_cast<size_t>(i)] * q[static_cast<size_t>(m - i)];
    q[static_cast<size_t>(m)] = s * lc;
    out[m + shift] = q[static_cast<size_t>(m)];
  }
  return out;
}

}  // namespace ytwist
