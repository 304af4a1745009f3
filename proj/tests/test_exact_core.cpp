#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ytwist/power_series.hpp"
#include "ytwist/rational_function.hpp"

using namespace ytwist;

namespace {

// Deterministic small-value generator for property tests.
struct Rng {
  unsigned long long state = 0x9e3779b97f4a7c15ull;
  unsigned long long next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  long small(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<unsigned long long>(hi - lo + 1)); }
  Rational rational() {
    long num = small(-6, 6);
    long den = small(1, 5);
    return Rational(num, den);
  }
  Rational nonzero_rational() {
    Rational r = rational();
    while (r.is_zero()) r = rational();
    return r;
  }
  PowerSeries unit_series(int order) {
    PowerSeries s(order, Rational(1));
    for (int i = 1; i <= order; ++i) s[i] = rational();
    return s;
  }
  Polynomial poly_u(int deg) {
    Polynomial p;
    for (int i = 0; i < deg; ++i) p.add_term({i, 0}, rational());
    p.add_term({deg, 0}, nonzero_rational());
    return p;
  }
};

PowerSeries ps(std::vector<Rational> c) { return PowerSeries(std::move(c)); }

RationalFunction rf(Polynomial num, Polynomial den) { return RationalFunction(std::move(num), std::move(den)); }

Polynomial U() { return Polynomial::variable_u(); }

}  // namespace

TEST_CASE("expand_at_infinity on worked examples") {
  // 1/(u - 1/2): geometric series
  PowerSeries a = expand_at_infinity(rf(Polynomial(Rational(1)), U() - Polynomial(Rational(1, 2))), 3);
  CHECK(a == ps({Rational(0), Rational(1), Rational(1, 2), Rational(1, 4)}));

  // 1/(1 - 4u)
  PowerSeries b = expand_at_infinity(
      rf(Polynomial(Rational(1)), Polynomial(Rational(1)) - Polynomial(Rational(4)) * Rational(1) * U()), 3);
  CHECK(b == ps({Rational(0), Rational(-1, 4), Rational(-1, 16), Rational(-1, 64)}));

  // u/(u + 1): long division
  PowerSeries c = expand_at_infinity(rf(U(), U() + Polynomial(Rational(1))), 2);
  CHECK(c == ps({Rational(1), Rational(-1), Rational(1)}));
}

TEST_CASE("expand_at_infinity rejects improper and bivariate input") {
  CHECK_THROWS_WITH_AS(expand_at_infinity(rf(U() * U(), U()), 4), "not expandable at infinity",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(
      expand_at_infinity(rf(Polynomial(Rational(1)), U() - Polynomial::variable_v()), 4),
      "univariate required", std::invalid_argument);
}

TEST_CASE("expand_at_infinity is multiplicative on proper fractions") {
  Rng rng;
  for (int trial = 0; trial < 40; ++trial) {
    int order = 12;
    RationalFunction f = rf(rng.poly_u(rng.small(0, 2)), rng.poly_u(rng.small(2, 4)));
    RationalFunction g = rf(rng.poly_u(rng.small(0, 1)), rng.poly_u(rng.small(1, 3)));
    PowerSeries lhs = expand_at_infinity(f * g, order);
    PowerSeries rhs = expand_at_infinity(f, order) * expand_at_infinity(g, order);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("series_invert") {
  CHECK(series_invert(PowerSeries::one(4)).is_one());
  PowerSeries a = ps({Rational(1), Rational(1), Rational(0), Rational(0)});
  CHECK(series_invert(a) == ps({Rational(1), Rational(-1), Rational(1), Rational(-1)}));
  PowerSeries b(6, Rational(2));
  b[1] = Rational(1);
  PowerSeries binv = series_invert(b);
  CHECK(binv[0] == Rational(1, 2));
  CHECK(binv[1] == Rational(-1, 4));
  CHECK(binv[2] == Rational(1, 8));
  CHECK((b * binv).is_one());
  PowerSeries z(3);
  CHECK_THROWS_WITH_AS(series_invert(z), "non-invertible series", std::domain_error);
}

TEST_CASE("series_substitute transforms") {
  // even series is fixed by u -> -u
  PowerSeries even = ps({Rational(1), Rational(0), Rational(1)});
  CHECK(series_substitute(even, SeriesTransform::NegateArgument, Rational(0)) == even);

  // u^-1 under u -> u+1
  PowerSeries x(3);
  x[1] = Rational(1);
  PowerSeries shifted = series_substitute(x, SeriesTransform::ShiftArgument, Rational(1));
  CHECK(shifted == ps({Rational(0), Rational(1), Rational(-1), Rational(1)}));

  // reflection is an involution
  Rng rng;
  for (int trial = 0; trial < 25; ++trial) {
    PowerSeries s = rng.unit_series(10);
    Rational kappa = rng.rational();
    PowerSeries twice = series_substitute(series_substitute(s, SeriesTransform::ReflectArgument, kappa),
                                          SeriesTransform::ReflectArgument, kappa);
    CHECK(twice == s);
  }
}

TEST_CASE("solve_half_factorization") {
  CHECK(solve_half_factorization(PowerSeries::one(8), Rational(1)).is_one());

  // roundtrip: q0 = 1 + u^-2, kappa = 1
  PowerSeries q0 = ps({Rational(1), Rational(0), Rational(1), Rational(0), Rational(0),
                       Rational(0), Rational(0), Rational(0), Rational(0)});
  PowerSeries w = q0 * series_substitute(q0, SeriesTransform::ShiftArgument, Rational(1));
  CHECK(solve_half_factorization(w, Rational(1)) == q0);

  PowerSeries bad(4, Rational(2));
  CHECK_THROWS_WITH_AS(solve_half_factorization(bad, Rational(1)), "unit series required",
                       std::domain_error);
}

TEST_CASE("solve_half_factorization inverts q -> q(u) q(u+kappa) on random unit series") {
  Rng rng;
  for (int trial = 0; trial < 60; ++trial) {
    int order = 12;
    PowerSeries q = rng.unit_series(order);
    Rational kappa = rng.rational();
    PowerSeries w = q * series_substitute(q, SeriesTransform::ShiftArgument, kappa);
    CHECK(solve_half_factorization(w, kappa) == q);
  }
}

TEST_CASE("series_sqrt") {
  PowerSeries v = ps({Rational(1), Rational(1), Rational(0)});
  CHECK(series_sqrt(v * v) == v);
  CHECK(series_sqrt(PowerSeries::one(5)).is_one());
  Rng rng;
  for (int trial = 0; trial < 60; ++trial) {
    PowerSeries s = rng.unit_series(12);
    CHECK(series_sqrt(s * s) == s);
  }
  PowerSeries bad(4, Rational(4));
  CHECK_THROWS_WITH_AS(series_sqrt(bad), "unit series required", std::domain_error);
}

TEST_CASE("rational function field identities") {
  Rng rng;
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial f = rng.poly_u(rng.small(0, 3));
    Polynomial g = rng.poly_u(rng.small(0, 3));
    RationalFunction q = rf(f, g);
    RationalFunction p = rf(g, f);
    CHECK((q * p) == RationalFunction(Rational(1)));
  }
}

TEST_CASE("rational function canonical form") {
  // (u^2 - 1)/(u - 1) reduces to u + 1
  RationalFunction f = rf(U() * U() - Polynomial(Rational(1)), U() - Polynomial(Rational(1)));
  CHECK(f.num() == U() + Polynomial(Rational(1)));
  CHECK(f.den() == Polynomial(Rational(1)));

  // denominator normalized monic: 1/(2u - 1) has denominator u - 1/2
  RationalFunction g = rf(Polynomial(Rational(1)),
                          Polynomial(Rational(2)) * Rational(1) * U() - Polynomial(Rational(1)));
  CHECK(g.den() == U() - Polynomial(Rational(1, 2)));
  CHECK(g.num() == Polynomial(Rational(1, 2)));
}

TEST_CASE("bivariate gcd and exact division") {
  Polynomial u = U(), v = Polynomial::variable_v();
  Polynomial a = (u + v) * (u - v);
  Polynomial b = (u + v) * u;
  CHECK(poly_gcd(a, b) == u + v);
  CHECK(exact_divide(a, u + v) == u - v);
  CHECK_THROWS_AS(exact_divide(u * u + Polynomial(Rational(1)), u + v), std::domain_error);

  // mixed-variable reductions in rational functions
  RationalFunction q = rf((u - v) * (u + v), (u - v) * u);
  CHECK(q.num() == u + v);
  CHECK(q.den() == u);
}
