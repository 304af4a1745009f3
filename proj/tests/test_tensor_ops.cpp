#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ytwist/tensor.hpp"

using namespace ytwist;

namespace {

std::vector<Space> small_spaces() {
  std::vector<Space> r;
  for (int N : {2, 3, 4, 5, 6}) r.emplace_back(ThetaFamily::Orthogonal, N);
  for (int N : {2, 4, 6}) r.emplace_back(ThetaFamily::Symplectic, N);
  return r;
}

MatrixQ scaled_identity(int n, Rational c) {
  MatrixQ m(n);
  for (int i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

MatrixRF to_rf(const MatrixQ& m) {
  MatrixRF r(m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r(i, j) = RationalFunction(m(i, j));
  return r;
}

struct Rng {
  unsigned long long state = 0x2545f4914f6cdd1dull;
  long small(long lo, long hi) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return lo + static_cast<long>(state % static_cast<unsigned long long>(hi - lo + 1));
  }
};

}  // namespace

TEST_CASE("P and Q satisfy the projector relations") {
  for (const Space& s : small_spaces()) {
    int N = s.N();
    MatrixQ P = build_P(s), Q = build_Q(s);
    CHECK(P * P == scaled_identity(N * N, Rational(1)));
    CHECK(Q * Q == Q * Rational(N));
    Rational sign(s.symplectic() ? -1 : 1);
    CHECK(P * Q == Q * sign);
    CHECK(Q * P == Q * sign);
    // Q/N is idempotent
    MatrixQ qn = Q * Rational(1, N);
    CHECK(qn * qn == qn);
  }
}

TEST_CASE("P acts as the permutation operator") {
  Space s(ThetaFamily::Orthogonal, 2);
  MatrixQ P = build_P(s);
  // P(e_1 (x) e_-1) = e_-1 (x) e_1: column at (1,-1) has a single 1 at (-1,1)
  int col = s.pair_pos(1, -1);
  for (int row = 0; row < 4; ++row)
    CHECK(P(row, col) == (row == s.pair_pos(-1, 1) ? Rational(1) : Rational(0)));
}

TEST_CASE("Q maps e_i (x) e_j to delta_{-i,j} theta_{j1} xi") {
  for (const Space& s : small_spaces()) {
    if (s.N() > 5) continue;
    MatrixQ Q = build_Q(s);
    auto xi = build_xi(s);
    for (int i : s.indices())
      for (int j : s.indices()) {
        int col = s.pair_pos(i, j);
        for (int row = 0; row < s.N() * s.N(); ++row) {
          Rational expect = (j == -i) ? Rational(s.theta(j, 1)) * xi[static_cast<size_t>(row)]
                                      : Rational(0);
          CHECK(Q(row, col) == expect);
        }
      }
  }
}

TEST_CASE("theta transpose is involutive and swaps P into Q") {
  Rng rng;
  for (const Space& s : small_spaces()) {
    int N = s.N();
    MatrixQ m(N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = Rational(rng.small(-5, 5));
    CHECK(theta_transpose(theta_transpose(m, s, 0), s, 0) == m);

    MatrixQ P = build_P(s), Q = build_Q(s);
    CHECK(theta_transpose(P, s, 1) == Q);
    CHECK(theta_transpose(P, s, 2) == Q);
    CHECK(theta_transpose(theta_transpose(Q, s, 1), s, 1) == Q);

    MatrixQ m2(N * N);
    for (int i = 0; i < N * N; ++i)
      for (int j = 0; j < N * N; ++j) m2(i, j) = Rational(rng.small(-3, 3));
    CHECK(theta_transpose(theta_transpose(m2, s, 1), s, 2) ==
          theta_transpose(theta_transpose(m2, s, 2), s, 1));
  }
}

TEST_CASE("theta transpose of an elementary matrix carries the symplectic sign") {
  Space s(ThetaFamily::Symplectic, 2);
  MatrixQ e(2);  // E_{1,-1}
  e(s.pos(1), s.pos(-1)) = Rational(1);
  MatrixQ t = theta_transpose(e, s, 0);
  // (E_{1,-1})^t = theta_{1,-1} E_{1,-1} = -E_{1,-1}
  CHECK(t == e * Rational(-1));
}

TEST_CASE("embed places operators on chosen tensor legs") {
  Space s(ThetaFamily::Orthogonal, 3);
  int N = s.N();
  MatrixQ P = build_P(s);
  MatrixQ p01 = embed(P, s, 0, 1), p12 = embed(P, s, 1, 2), p02 = embed(P, s, 0, 2);
  CHECK(p01 * p12 * p01 == p02);

  MatrixQ id2 = scaled_identity(N * N, Rational(1));
  CHECK(embed(id2, s, 0, 1) == scaled_identity(N * N * N, Rational(1)));

  Rng rng;
  MatrixQ m(N * N);
  for (int i = 0; i < N * N; ++i)
    for (int j = 0; j < N * N; ++j) m(i, j) = Rational(rng.small(-4, 4));
  CHECK(embed(m, s, 0, 1).trace() == m.trace() * Rational(N));

  CHECK_THROWS_WITH_AS(embed(m, s, 1, 1), "bad embedding", std::invalid_argument);
  CHECK_THROWS_WITH_AS(embed(m, s, 0, 3), "bad embedding", std::invalid_argument);
}

TEST_CASE("R-matrix algebraic identities") {
  for (const Space& s : small_spaces()) {
    if (s.N() > 4) continue;
    int N = s.N();
    Polynomial u = Polynomial::variable_u();
    MatrixRF R = build_R(s, u);
    MatrixRF Rneg = build_R(s, -u);
    RationalFunction scalar =
        RationalFunction(Rational(1)) -
        RationalFunction(Polynomial(Rational(1)), u * u);  // 1 - u^-2
    CHECK(R * Rneg == to_rf(scaled_identity(N * N, Rational(1))) * scalar);

    // stable under the composition of both transpositions
    CHECK(theta_transpose(theta_transpose(R, s, 1), s, 2) == R);

    // single-leg transpose equals the kappa - u reflection
    Polynomial refl = -u + Polynomial(s.kappa());
    MatrixRF Rrefl = build_R(s, refl);
    CHECK(theta_transpose(R, s, 1) == Rrefl);
    CHECK(theta_transpose(R, s, 2) == Rrefl);
  }
}

TEST_CASE("QYBE holds for small spaces and fails for a shifted kappa") {
  for (const Space& s : {Space(ThetaFamily::Orthogonal, 2), Space(ThetaFamily::Orthogonal, 3),
                         Space(ThetaFamily::Symplectic, 2)}) {
    CheckReport ok = check_qybe(s);
    CAPTURE(ok.witness);
    CHECK(ok.passed());
  }
  CheckReport bad = check_qybe(Space(ThetaFamily::Orthogonal, 3), Rational(1));
  CHECK(bad.status == CheckStatus::Fail);
  CHECK(!bad.witness.empty());
}

TEST_CASE("space rejects invalid dimensions and families") {
  CHECK_THROWS_WITH_AS(Space(ThetaFamily::Orthogonal, 1), "invalid dimension",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(Space(ThetaFamily::Symplectic, 3), "invalid pair", std::invalid_argument);
}
