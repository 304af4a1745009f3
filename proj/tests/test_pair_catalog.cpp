#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ytwist/current_algebra.hpp"
#include "ytwist/linalg.hpp"
#include "ytwist/pair_catalog.hpp"

using namespace ytwist;

TEST_CASE("catalog parameters for worked examples") {
  PairSpec bdi = build_pair(Family::BDI, 5, 3, 2);
  CHECK(bdi.kappa == Rational(3, 2));
  CHECK(bdi.kind == GKind::Second);
  CHECK(bdi.c == Rational(4));
  CHECK(bdi.G.trace() == Rational(1));

  PairSpec ci = build_pair(Family::CI, 4);
  CHECK(ci.kappa == Rational(3));
  CHECK(ci.kind == GKind::First);
  const Space& s = ci.space;
  for (int i : s.indices())
    CHECK(ci.G(s.pos(i), s.pos(i)) == Rational(i > 0 ? 1 : -1));

  CHECK(build_pair(Family::CII, 4, 2, 2).kind == GKind::First);
  CHECK(build_pair(Family::BDI, 4, 2, 2).kind == GKind::First);
}

TEST_CASE("pair keys round-trip") {
  for (const std::string& key : default_catalog()) {
    PairSpec spec = pair_from_key(key);
    CHECK(spec.key == key);
  }
  CHECK(pair_from_key("BD0:3").key == "B0:3");
  CHECK(pair_from_key("BD0:4").key == "D0:4");
  CHECK_THROWS_AS(pair_from_key("XX:4"), std::invalid_argument);
  CHECK_THROWS_AS(pair_from_key("CI"), std::invalid_argument);
  CHECK_THROWS_AS(pair_from_key("BDI:5:3"), std::invalid_argument);
}

TEST_CASE("parity constraints are enforced") {
  CHECK_THROWS_WITH_AS(build_pair(Family::CI, 5), "invalid symmetric pair parameters",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_pair(Family::CII, 6, 3, 3), "invalid symmetric pair parameters",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_pair(Family::CII, 4, 4, 0), "invalid symmetric pair parameters",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_pair(Family::BDI, 6, 5, 1), "invalid symmetric pair parameters",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_pair(Family::BDI, 5, 4, 1), "invalid symmetric pair parameters",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_pair(Family::B0, 4), "invalid symmetric pair parameters",
                       std::invalid_argument);
}

TEST_CASE("validate_pair accepts the catalog and rejects tampering") {
  for (const std::string& key : default_catalog()) {
    PairSpec spec = pair_from_key(key);
    CheckReport r = validate_pair(spec);
    CAPTURE(key, r.witness);
    CHECK(r.passed());
  }
  CHECK(pair_from_key("DIII:6").G.trace() == Rational(0));
  CHECK(pair_from_key("BDI:5:3:2").G.trace() == Rational(1));

  PairSpec bad = pair_from_key("BDI:5:3:2");
  bad.G(0, 0) = -bad.G(0, 0) + Rational(0);  // flip one diagonal sign
  CheckReport r = validate_pair(bad);
  CHECK(r.status == CheckStatus::Fail);
  CHECK(!r.witness.empty());
}

TEST_CASE("G(u) of both kinds") {
  PairSpec ci = pair_from_key("CI:4");
  MatrixRF gu = gu_exact(ci);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(gu(i, j) == RationalFunction(ci.G(i, j)));

  PairSpec bdi = pair_from_key("BDI:5:3:2");
  Matrix<PowerSeries> ser = gu_series(bdi, 2);
  Rational cinv = bdi.c.inverse();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      Rational gmi = bdi.G(i, j) - (i == j ? Rational(1) : Rational(0));
      CHECK(ser(i, j)[0] == bdi.G(i, j));
      CHECK(ser(i, j)[1] == gmi * cinv);
      CHECK(ser(i, j)[2] == gmi * cinv * cinv);
    }

  // unitarity G(u) G(-u) = I for both kinds
  for (const std::string& key : {"CI:4", "BDI:5:3:2", "CII:8:6:2"}) {
    PairSpec spec = pair_from_key(key);
    MatrixRF g = gu_exact(spec);
    Polynomial u = Polynomial::variable_u(), v = Polynomial::variable_v();
    MatrixRF gneg(spec.N);
    for (int i = 0; i < spec.N; ++i)
      for (int j = 0; j < spec.N; ++j) gneg(i, j) = g(i, j).substitute(-u, v);
    MatrixRF prod = g * gneg;
    CHECK(prod == MatrixRF::identity(spec.N, RationalFunction(Rational(1))));
  }
}

TEST_CASE("series mode matches the expansion of the exact matrix") {
  for (const std::string& key : {"BDI:5:3:2", "CII:8:6:2", "CI:4"}) {
    PairSpec spec = pair_from_key(key);
    MatrixRF g = gu_exact(spec);
    Matrix<PowerSeries> ser = gu_series(spec, 8);
    for (int i = 0; i < spec.N; ++i)
      for (int j = 0; j < spec.N; ++j) CHECK(ser(i, j) == expand_at_infinity(g(i, j), 8));
  }
}

TEST_CASE("trace of G(u)") {
  PairSpec bdi = pair_from_key("BDI:5:3:2");
  // (N - 4u)/(1 - cu)
  RationalFunction t = gu_trace(bdi);
  CHECK(t.evaluate(Rational(0), Rational(0)) == Rational(5));
  CHECK(t.evaluate(Rational(1, 8), Rational(0)) == Rational(9));  // (5 - 1/2)/(1/2)
  CHECK(gu_trace(pair_from_key("CI:4")) == RationalFunction(Rational(0)));
  CHECK(gu_trace(pair_from_key("D0:4")) == RationalFunction(Rational(4)));
}

TEST_CASE("fixed subalgebra dimensions and bracket closure") {
  for (const std::string& key : default_catalog()) {
    PairSpec spec = pair_from_key(key);
    SubalgebraBasis basis = fixed_subalgebra(spec);
    int dplus = static_cast<int>(basis.plus_basis.size());
    int dminus = static_cast<int>(basis.minus_basis.size());
    CAPTURE(key);
    CHECK(dplus == dim_g_rho(spec));
    CHECK(dplus + dminus == dim_g(spec.space));

    RowSpan plus_span(spec.N * spec.N), minus_span(spec.N * spec.N);
    for (const auto& b : basis.plus_basis) plus_span.insert(flatten(b));
    for (const auto& b : basis.minus_basis) minus_span.insert(flatten(b));
    auto bracket = [](const MatrixQ& a, const MatrixQ& b) { return a * b - b * a; };
    for (const auto& a : basis.plus_basis)
      for (const auto& b : basis.plus_basis) CHECK(plus_span.contains(flatten(bracket(a, b))));
    for (const auto& a : basis.plus_basis)
      for (const auto& b : basis.minus_basis) CHECK(minus_span.contains(flatten(bracket(a, b))));
    for (const auto& a : basis.minus_basis)
      for (const auto& b : basis.minus_basis) CHECK(plus_span.contains(flatten(bracket(a, b))));
  }
  CHECK(fixed_subalgebra(pair_from_key("DIII:6")).plus_basis.size() == 9);
  CHECK(fixed_subalgebra(pair_from_key("CII:4:2:2")).plus_basis.size() == 6);
  PairSpec d0 = pair_from_key("D0:4");
  CHECK(fixed_subalgebra(d0).plus_basis.size() == static_cast<size_t>(dim_g(d0.space)));
  CHECK(fixed_subalgebra(d0).minus_basis.empty());
}

TEST_CASE("alternate involution matrices") {
  PairSpec alt_even = build_pair(Family::BDI, 6, 4, 2, GVariant::Alternate);
  CHECK(validate_pair(alt_even).passed());
  CHECK(alt_even.G.trace() == Rational(2));
  CHECK(fixed_subalgebra(alt_even).plus_basis.size() ==
        fixed_subalgebra(build_pair(Family::BDI, 6, 4, 2)).plus_basis.size());

  PairSpec alt_odd = build_pair(Family::BDI, 5, 3, 2, GVariant::Alternate);
  CHECK(validate_pair(alt_odd).passed());
  CHECK(alt_odd.G.trace() == Rational(-1));
  CHECK(alt_odd.c == Rational(-4));
  CHECK(fixed_subalgebra(alt_odd).plus_basis.size() == 4);
}
