#include "ytwist/tensor.hpp"

#include <chrono>

#include "ytwist/detail/zkernel.hpp"

namespace ytwist {

MatrixQ build_P(const Space& s) {
  int N = s.N();
  MatrixQ p(N * N);
  for (int i : s.indices())
    for (int j : s.indices()) p(s.pair_pos(i, j), s.pair_pos(j, i)) = Rational(1);
  return p;
}

MatrixQ build_Q(const Space& s) {
  int N = s.N();
  MatrixQ q(N * N);
  for (int i : s.indices())
    for (int j : s.indices()) q(s.pair_pos(i, -i), s.pair_pos(j, -j)) = Rational(s.theta(i, j));
  return q;
}

std::vector<Rational> build_xi(const Space& s) {
  std::vector<Rational> xi(static_cast<size_t>(s.N()) * s.N());
  for (int k : s.indices()) xi[static_cast<size_t>(s.pair_pos(-k, k))] = Rational(s.theta(k, 1));
  return xi;
}

MatrixRF build_R(const Space& s, const Polynomial& arg) {
  int N = s.N();
  RationalFunction inv_arg = RationalFunction(Polynomial(Rational(1)), arg);
  RationalFunction inv_argk =
      RationalFunction(Polynomial(Rational(1)), arg - Polynomial(s.kappa()));
  MatrixRF r(N * N);
  for (int p = 0; p < N * N; ++p) r(p, p) = RationalFunction(Rational(1));
  MatrixQ pm = build_P(s), qm = build_Q(s);
  for (int p = 0; p < N * N; ++p)
    for (int q = 0; q < N * N; ++q) {
      if (!pm(p, q).is_zero()) r(p, q) -= inv_arg * RationalFunction(pm(p, q));
      if (!qm(p, q).is_zero()) r(p, q) += inv_argk * RationalFunction(qm(p, q));
    }
  return r;
}

CheckReport check_qybe(const Space& s, const Rational& kappa_shift) {
  auto t0 = std::chrono::steady_clock::now();
  auto mism = detail::qybe_mismatch(s, kappa_shift);
  CheckReport r = mism ? CheckReport::fail("qybe", *mism) : CheckReport::pass("qybe");
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

}  // namespace ytwist
