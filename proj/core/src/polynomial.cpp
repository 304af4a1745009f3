#include "ytwist/polynomial.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace ytwist {

Polynomial Polynomial::monomial(int eu, int ev, Rational c) {
  Polynomial p;
  if (!c.is_zero()) p.terms_.emplace(Monomial{eu, ev}, std::move(c));
  return p;
}

Polynomial Polynomial::linear(const Rational& a, const Rational& b, const Rational& c) {
  Polynomial p;
  p.add_term({1, 0}, a);
  p.add_term({0, 1}, b);
  p.add_term({0, 0}, c);
  return p;
}

bool Polynomial::univariate_in_u() const {
  for (const auto& [m, c] : terms_)
    if (m.ev != 0) return false;
  return true;
}

bool Polynomial::depends_on_v() const { return !univariate_in_u(); }

bool Polynomial::depends_on_u() const {
  for (const auto& [m, c] : terms_)
    if (m.eu != 0) return true;
  return false;
}

int Polynomial::degree_u() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.eu);
  return d;
}

int Polynomial::degree_v() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.ev);
  return d;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.eu + m.ev);
  return d;
}

const Rational& Polynomial::leading_coeff() const {
  static const Rational zero(0);
  if (terms_.empty()) return zero;
  return terms_.begin()->second;
}

Monomial Polynomial::leading_monomial() const {
  if (terms_.empty()) return {0, 0};
  return terms_.begin()->first;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{0, 0});
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial r;
  for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      r.add_term({ma.eu + mb.eu, ma.ev + mb.ev}, ca * cb);
  return r;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial Polynomial::substitute(const Polynomial& pu, const Polynomial& pv) const {
  std::vector<Polynomial> pow_u{Polynomial(Rational(1))};
  std::vector<Polynomial> pow_v{Polynomial(Rational(1))};
  auto power = [](std::vector<Polynomial>& cache, const Polynomial& base, int e) -> const Polynomial& {
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[e];
  };
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    Polynomial t = power(pow_u, pu, m.eu) * power(pow_v, pv, m.ev);
    t *= c;
    r += t;
  }
  return r;
}

Rational Polynomial::evaluate(const Rational& u, const Rational& v) const {
  Rational r(0);
  for (const auto& [m, c] : terms_) r += c * u.pow(m.eu) * v.pow(m.ev);
  return r;
}

Polynomial Polynomial::coeff_of_u(int k) const {
  Polynomial r;
  for (const auto& [m, c] : terms_)
    if (m.eu == k) r.add_term({0, m.ev}, c);
  return r;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a.sign() < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a.sign() < 0 ? " - " : " + ");
      if (a.sign() < 0) a = -a;
    }
    bool has_var = m.eu > 0 || m.ev > 0;
    if (!a.is_one() || !has_var) os << a.str();
    if (!a.is_one() && has_var) os << "*";
    if (m.eu > 0) {
      os << "u";
      if (m.eu > 1) os << "^" << m.eu;
      if (m.ev > 0) os << "*";
    }
    if (m.ev > 0) {
      os << "v";
      if (m.ev > 1) os << "^" << m.ev;
    }
    first = false;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  Polynomial q;
  Polynomial r = a;
  const Monomial lb = b.leading_monomial();
  const Rational& cb = b.leading_coeff();
  while (!r.is_zero()) {
    Monomial lr = r.leading_monomial();
    if (lr.eu < lb.eu || lr.ev < lb.ev)
      throw std::domain_error("inexact polynomial division");
    Monomial qm{lr.eu - lb.eu, lr.ev - lb.ev};
    Rational qc = r.leading_coeff() / cb;
    Polynomial t = Polynomial::monomial(qm.eu, qm.ev, qc);
    q += t;
    r -= t * b;
  }
  return q;
}

namespace {

// Univariate machinery over exact integers; used for both variables by
// mapping the active variable to the vector index.

std::vector<mpz_class> to_primitive_int(const std::vector<Rational>& c) {
  mpz_class l(1);
  for (const auto& x : c)
    if (!x.is_zero()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
  std::vector<mpz_class> r(c.size());
  mpz_class g(0);
  for (size_t i = 0; i < c.size(); ++i) {
    r[i] = c[i].num() * (l / c[i].den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : r) x /= g;
  return r;
}

int int_deg(const std::vector<mpz_class>& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

void int_trim(std::vector<mpz_class>& p) { p.resize(static_cast<size_t>(int_deg(p) + 1)); }

// Pseudo-remainder lc(b)^(da-db+1) * a mod b.
std::vector<mpz_class> int_prem(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
  int da = int_deg(a), db = int_deg(b);
  const mpz_class& lb = b[static_cast<size_t>(db)];
  int steps = da - db + 1;
  while (true) {
    int dr = int_deg(a);
    if (dr < db) break;
    mpz_class lr = a[static_cast<size_t>(dr)];
    for (auto& x : a) x *= lb;
    for (int i = 0; i <= db; ++i) a[static_cast<size_t>(dr - db + i)] -= lr * b[static_cast<size_t>(i)];
    --steps;
  }
  if (steps > 0) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(steps));
    for (auto& x : a) x *= f;
  }
  int_trim(a);
  return a;
}

std::vector<mpz_class> int_primitive(std::vector<mpz_class> p) {
  mpz_class g(0);
  for (const auto& x : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : p) x /= g;
  return p;
}

// Subresultant PRS for primitive integer polynomials.
std::vector<mpz_class> int_gcd_poly(std::vector<mpz_class> a, std::vector<mpz_class> b) {
  int_trim(a);
  int_trim(b);
  if (int_deg(a) < 0) return b;
  if (int_deg(b) < 0) return a;
  if (int_deg(a) < int_deg(b)) std::swap(a, b);
  mpz_class g(1), h(1);
  while (true) {
    int da = int_deg(a), db = int_deg(b);
    int delta = da - db;
    std::vector<mpz_class> r = int_prem(a, b);
    if (int_deg(r) < 0) break;
    a = std::move(b);
    mpz_class divisor = g;
    mpz_class hp;
    mpz_pow_ui(hp.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
    divisor *= hp;
    for (auto& x : r) x /= divisor;
    b = std::move(r);
    g = a[static_cast<size_t>(int_deg(a))];
    if (delta > 0) {
      mpz_class gp;
      mpz_pow_ui(gp.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
      mpz_class hq;
      mpz_pow_ui(hq.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
      h = gp / hq;
    }
  }
  return int_primitive(std::move(b));
}

// Univariate gcd over Q for the variable selected by in_u; result monic.
Polynomial univariate_gcd(const Polynomial& a, const Polynomial& b, bool in_u) {
  auto coeffs = [&](const Polynomial& p) {
    int d = in_u ? p.degree_u() : p.degree_v();
    std::vector<Rational> c(static_cast<size_t>(d + 1));
    for (const auto& [m, coef] : p.terms()) c[static_cast<size_t>(in_u ? m.eu : m.ev)] = coef;
    return c;
  };
  std::vector<mpz_class> g = int_gcd_poly(to_primitive_int(coeffs(a)), to_primitive_int(coeffs(b)));
  int d = int_deg(g);
  Polynomial r;
  Rational lc(mpq_class(g[static_cast<size_t>(d)]));
  for (int i = 0; i <= d; ++i) {
    Rational c = Rational(mpq_class(g[static_cast<size_t>(i)])) / lc;
    r.add_term(in_u ? Monomial{i, 0} : Monomial{0, i}, c);
  }
  return r;
}

// --- Bivariate: treat u as the main variable over Q[v]. ---

std::vector<Polynomial> u_coeffs(const Polynomial& p) {
  std::vector<Polynomial> c(static_cast<size_t>(p.degree_u() + 1));
  for (const auto& [m, coef] : p.terms()) c[static_cast<size_t>(m.eu)].add_term({0, m.ev}, coef);
  return c;
}

Polynomial from_u_coeffs(const std::vector<Polynomial>& c) {
  Polynomial p;
  for (size_t i = 0; i < c.size(); ++i)
    for (const auto& [m, coef] : c[i].terms()) p.add_term({static_cast<int>(i), m.ev}, coef);
  return p;
}

int pdeg(const std::vector<Polynomial>& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (!p[i].is_zero()) return i;
  return -1;
}

// Content in Q[v] of a polynomial written as u-coefficient list.
Polynomial v_content(const std::vector<Polynomial>& c) {
  Polynomial g;
  for (const auto& p : c) {
    if (p.is_zero()) continue;
    g = g.is_zero() ? p : univariate_gcd(g, p, /*in_u=*/false);
    if (g.is_constant()) return Polynomial(Rational(1));
  }
  return g.is_zero() ? Polynomial(Rational(1)) : g;
}

std::vector<Polynomial> divide_coeffs(std::vector<Polynomial> c, const Polynomial& d) {
  for (auto& p : c)
    if (!p.is_zero()) p = exact_divide(p, d);
  return c;
}

std::vector<Polynomial> poly_prem(std::vector<Polynomial> a, const std::vector<Polynomial>& b) {
  int da = pdeg(a), db = pdeg(b);
  const Polynomial& lb = b[static_cast<size_t>(db)];
  int steps = da - db + 1;
  while (true) {
    int dr = pdeg(a);
    if (dr < db) break;
    Polynomial lr = a[static_cast<size_t>(dr)];
    for (auto& x : a) x = x * lb;
    for (int i = 0; i <= db; ++i)
      a[static_cast<size_t>(dr - db + i)] -= lr * b[static_cast<size_t>(i)];
    --steps;
  }
  for (; steps > 0; --steps)
    for (auto& x : a) x = x * lb;
  a.resize(static_cast<size_t>(pdeg(a) + 1));
  return a;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  auto monic = [](Polynomial p) {
    if (p.is_zero()) return p;
    Rational lc = p.leading_coeff();
    p *= lc.inverse();
    return p;
  };
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(Rational(1));

  bool au = a.depends_on_u(), av = a.depends_on_v();
  bool bu = b.depends_on_u(), bv = b.depends_on_v();
  if (!av && !bv) return univariate_gcd(a, b, /*in_u=*/true);
  if (!au && !bu) return univariate_gcd(a, b, /*in_u=*/false);
  if ((au && !bu) || (!au && bu)) {
    // One side is v-only: gcd with the u-content of the other.
    const Polynomial& vonly = au ? b : a;
    const Polynomial& mixed = au ? a : b;
    Polynomial cont = v_content(u_coeffs(mixed));
    return cont.is_constant() ? Polynomial(Rational(1))
                              : univariate_gcd(vonly, cont, /*in_u=*/false);
  }

  std::vector<Polynomial> ca = u_coeffs(a), cb = u_coeffs(b);
  Polynomial cont_a = v_content(ca), cont_b = v_content(cb);
  std::vector<Polynomial> pa = divide_coeffs(std::move(ca), cont_a);
  std::vector<Polynomial> pb = divide_coeffs(std::move(cb), cont_b);
  Polynomial cont_g = univariate_gcd(cont_a, cont_b, /*in_u=*/false);

  if (pdeg(pa) < pdeg(pb)) std::swap(pa, pb);
  Polynomial g(Rational(1)), h(Rational(1));
  while (true) {
    int da = pdeg(pa), db = pdeg(pb);
    int delta = da - db;
    std::vector<Polynomial> r = poly_prem(pa, pb);
    if (pdeg(r) < 0) break;
    pa = std::move(pb);
    Polynomial divisor = g;
    for (int i = 0; i < delta; ++i) divisor = divisor * h;
    for (auto& x : r)
      if (!x.is_zero()) x = exact_divide(x, divisor);
    pb = std::move(r);
    g = pa[static_cast<size_t>(pdeg(pa))];
    if (delta > 0) {
      Polynomial num(Rational(1));
      for (int i = 0; i < delta; ++i) num = num * g;
      Polynomial den(Rational(1));
      for (int i = 0; i < delta - 1; ++i) den = den * h;
      h = exact_divide(num, den);
    }
  }
  Polynomial pp = from_u_coeffs(divide_coeffs(std::move(pb), v_content(pb)));
  return monic(cont_g * pp);
}

}  // namespace ytwist
