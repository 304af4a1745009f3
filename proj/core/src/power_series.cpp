#include "ytwist/power_series.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ytwist {

bool PowerSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.is_zero(); });
}

bool PowerSeries::is_one() const {
  if (!c_[0].is_one()) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& x) { return x.is_zero(); });
}

PowerSeries PowerSeries::resized(int order) const {
  PowerSeries r(order);
  int n = std::min(order, this->order());
  for (int i = 0; i <= n; ++i) r[i] = c_[static_cast<size_t>(i)];
  return r;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  if (o.order() != order()) throw std::invalid_argument("series order mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  if (o.order() != order()) throw std::invalid_argument("series order mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PowerSeries operator-(const PowerSeries& a) {
  PowerSeries r(a.order());
  for (int i = 0; i <= a.order(); ++i) r[i] = -a[i];
  return r;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  if (a.order() != b.order()) throw std::invalid_argument("series order mismatch");
  PowerSeries r(a.order());
  for (int i = 0; i <= a.order(); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= a.order(); ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

PowerSeries& PowerSeries::operator*=(const Rational& c) {
  for (auto& x : c_) x *= c;
  return *this;
}

std::string PowerSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (int r = 0; r <= order(); ++r) {
    if (c_[static_cast<size_t>(r)].is_zero()) continue;
    Rational a = c_[static_cast<size_t>(r)];
    if (first) {
      if (a.sign() < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a.sign() < 0 ? " - " : " + ");
      if (a.sign() < 0) a = -a;
    }
    if (r == 0) {
      os << a.str();
    } else {
      if (!a.is_one()) os << a.str() << "*";
      os << "u^-" << r;
    }
    first = false;
  }
  if (first) os << "0";
  os << " + O(u^-" << order() + 1 << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const PowerSeries& s) { return os << s.str(); }

PowerSeries series_invert(const PowerSeries& a) {
  if (a[0].is_zero()) throw std::domain_error("non-invertible series");
  int D = a.order();
  PowerSeries r(D);
  Rational c0 = a[0].inverse();
  r[0] = c0;
  for (int m = 1; m <= D; ++m) {
    Rational s(0);
    for (int i = 1; i <= m; ++i) s += a[i] * r[m - i];
    r[m] = -s * c0;
  }
  return r;
}

PowerSeries series_substitute(const PowerSeries& a, SeriesTransform t, const Rational& kappa) {
  int D = a.order();
  switch (t) {
    case SeriesTransform::NegateArgument: {
      PowerSeries r(D);
      for (int i = 0; i <= D; ++i) r[i] = (i % 2 == 0) ? a[i] : -a[i];
      return r;
    }
    case SeriesTransform::ShiftArgument: {
      // (u + k)^{-r} = sum_s (-1)^s C(r+s-1, s) k^s u^{-r-s}
      PowerSeries r(D);
      r[0] = a[0];
      for (int j = 1; j <= D; ++j) {
        if (a[j].is_zero()) continue;
        Rational kp(1);
        for (int s = 0; j + s <= D; ++s) {
          Rational coef = binomial(j + s - 1, s) * kp;
          if (s % 2 == 1) coef = -coef;
          r[j + s] += a[j] * coef;
          kp *= kappa;
        }
      }
      return r;
    }
    case SeriesTransform::ReflectArgument: {
      // a(kappa - u) = b(u - kappa) with b(u) = a(-u)
      PowerSeries b = series_substitute(a, SeriesTransform::NegateArgument, kappa);
      return series_substitute(b, SeriesTransform::ShiftArgument, -kappa);
    }
  }
  throw std::logic_error("unreachable");
}

PowerSeries solve_half_factorization(const PowerSeries& w, const Rational& kappa) {
  if (!w[0].is_one()) throw std::domain_error("unit series required");
  int D = w.order();
  // shift[r][s] = coefficient of u^{-r-s} in (u + kappa)^{-r}
  std::vector<std::vector<Rational>> shift(static_cast<size_t>(D + 1));
  for (int r = 1; r <= D; ++r) {
    Rational kp(1);
    for (int s = 0; r + s <= D; ++s) {
      Rational coef = binomial(r + s - 1, s) * kp;
      if (s % 2 == 1) coef = -coef;
      shift[static_cast<size_t>(r)].push_back(coef);
      kp *= kappa;
    }
  }
  PowerSeries q(D);
  q[0] = Rational(1);
  Rational half(1, 2);
  for (int m = 1; m <= D; ++m) {
    // [u^-m] q(u) q(u+kappa) = 2 q_m + (terms with indices < m)
    Rational known(0);
    for (int i = 0; i <= m; ++i) {
      // contribution q_i * [u^-(m-i)] q(u+kappa)
      int j = m - i;
      for (int r = (j == 0 ? 0 : 1); r <= j; ++r) {
        if (i == m || (i == 0 && r == m)) continue;  // the two q_m terms
        Rational sc = (r == 0) ? Rational(1) : shift[static_cast<size_t>(r)][static_cast<size_t>(j - r)];
        known += q[i] * q[r] * sc;
      }
    }
    q[m] = (w[m] - known) * half;
  }
  return q;
}

PowerSeries series_sqrt(const PowerSeries& c) {
  if (!c[0].is_one()) throw std::domain_error("unit series required");
  int D = c.order();
  PowerSeries v(D);
  v[0] = Rational(1);
  Rational half(1, 2);
  for (int m = 1; m <= D; ++m) {
    Rational s(0);
    for (int i = 1; i < m; ++i) s += v[i] * v[m - i];
    v[m] = (c[m] - s) * half;
  }
  return v;
}

}  // namespace ytwist
