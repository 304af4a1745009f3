#ifndef YTWIST_TENSOR_HPP
#define YTWIST_TENSOR_HPP

#include <stdexcept>
#include <vector>

#include "ytwist/rational.hpp"
#include "ytwist/rational_function.hpp"
#include "ytwist/report.hpp"

namespace ytwist {

enum class ThetaFamily { Orthogonal, Symplectic };

/// Signed-index structure on C^N. Rows and columns are labelled by
/// {-n..-1, 1..n} when N = 2n and {-n..n} when N = 2n+1; storage position
/// pos(i) enumerates them ascending. Composite indices on C^N (x) C^N follow
/// (i, k) -> pos(i)*N + pos(k).
class Space {
 public:
  Space(ThetaFamily family, int N) : family_(family), N_(N) {
    if (N < 2) throw std::invalid_argument("invalid dimension");
    if (family == ThetaFamily::Symplectic && N % 2 != 0)
      throw std::invalid_argument("invalid pair");
  }

  ThetaFamily family() const { return family_; }
  bool symplectic() const { return family_ == ThetaFamily::Symplectic; }
  int N() const { return N_; }
  int n() const { return N_ / 2; }
  bool has_zero_index() const { return N_ % 2 != 0; }

  /// kappa = N/2 - 1 (orthogonal) or N/2 + 1 (symplectic).
  Rational kappa() const { return Rational(N_, 2) + Rational(symplectic() ? 1 : -1); }

  std::vector<int> indices() const {
    std::vector<int> r;
    for (int i = -n(); i <= n(); ++i)
      if (i != 0 || has_zero_index()) r.push_back(i);
    return r;
  }

  int pos(int i) const {
    if (!valid_index(i)) throw std::out_of_range("index out of range");
    if (has_zero_index()) return i + n();
    return i < 0 ? i + n() : i + n() - 1;
  }

  int index_at(int p) const {
    if (p < 0 || p >= N_) throw std::out_of_range("index out of range");
    if (has_zero_index()) return p - n();
    return p < n() ? p - n() : p - n() + 1;
  }

  bool valid_index(int i) const {
    if (i < -n() || i > n()) return false;
    return i != 0 || has_zero_index();
  }

  /// theta_{ij}: 1 in the orthogonal case, sign(i) sign(j) in the symplectic case.
  int theta(int i, int j) const {
    if (!symplectic()) return 1;
    return (i < 0) == (j < 0) ? 1 : -1;
  }

  int pair_pos(int i, int k) const { return pos(i) * N_ + pos(k); }

 private:
  ThetaFamily family_;
  int N_;
};

/// Dense square matrix over an exact scalar ring.
template <class S>
class Matrix {
 public:
  Matrix() : n_(0) {}
  explicit Matrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {}
  Matrix(int n, const S& zero) : n_(n), e_(static_cast<size_t>(n) * n, zero) {}

  static Matrix identity(int n, const S& one) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }
  static Matrix identity(int n, const S& one, const S& zero) {
    Matrix m(n, zero);
    for (int i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  int size() const { return n_; }
  S& operator()(int r, int c) { return e_[static_cast<size_t>(r) * n_ + c]; }
  const S& operator()(int r, int c) const { return e_[static_cast<size_t>(r) * n_ + c]; }

  Matrix& operator+=(const Matrix& o) {
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("size mismatch");
    Matrix r = a;  // copy to inherit prototype zeros, then overwrite
    for (auto& x : r.e_) x -= x;
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const S& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < a.n_; ++j) {
          if (b(k, j).is_zero()) continue;
          r(i, j) += aik * b(k, j);
        }
      }
    return r;
  }

  Matrix& operator*=(const S& c) {
    for (auto& x : e_) x *= c;
    return *this;
  }
  friend Matrix operator*(Matrix a, const S& c) { return a *= c; }
  friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  S trace() const {
    if (e_.empty()) throw std::invalid_argument("empty matrix");
    S t = e_[0];
    t -= t;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  int n_;
  std::vector<S> e_;
};

using MatrixQ = Matrix<Rational>;
using MatrixRF = Matrix<RationalFunction>;

/// P = sum E_ij (x) E_ji, the permutation operator. P^2 = I.
MatrixQ build_P(const Space& s);

/// Q = sum theta_ij E_ij (x) E_{-i,-j}, the transposed projector.
/// Q = P^{t_1} = P^{t_2} and Q^2 = N Q.
MatrixQ build_Q(const Space& s);

/// xi = sum_k theta{k1} (e_{-k} (x) e_k); spans the image of Q.
std::vector<Rational> build_xi(const Space& s);

/// R(arg) = I - P/arg + Q/(arg - kappa) with a linear polynomial argument
/// in u, v. Satisfies the quantum Yang-Baxter equation, and
/// R(u) R(-u) = (1 - u^{-2}) I.
MatrixRF build_R(const Space& s, const Polynomial& arg);

/// Transpose with respect to the bilinear form: (E_ij)^t = theta_ij E_{-j,-i}.
/// leg 0 acts on an N x N matrix; legs 1 and 2 pick a tensor factor of an
/// N^2 x N^2 matrix. Involutive on every leg.
template <class S>
Matrix<S> theta_transpose(const Matrix<S>& m, const Space& s, int leg) {
  int N = s.N();
  if (leg == 0) {
    if (m.size() != N) throw std::invalid_argument("leg out of range");
    Matrix<S> r = m;
    for (int a : s.indices())
      for (int b : s.indices()) {
        S x = m(s.pos(-b), s.pos(-a));
        if (s.theta(a, b) < 0) x = -x;
        r(s.pos(a), s.pos(b)) = x;
      }
    return r;
  }
  if (leg != 1 && leg != 2) throw std::invalid_argument("leg out of range");
  if (m.size() != N * N) throw std::invalid_argument("leg out of range");
  Matrix<S> r = m;
  for (int a : s.indices())
    for (int k : s.indices())
      for (int c : s.indices())
        for (int l : s.indices()) {
          S x = leg == 1 ? m(s.pair_pos(-c, k), s.pair_pos(-a, l))
                         : m(s.pair_pos(a, -l), s.pair_pos(c, -k));
          int sign = leg == 1 ? s.theta(c, a) : s.theta(l, k);
          if (sign < 0) x = -x;
          r(s.pair_pos(a, k), s.pair_pos(c, l)) = x;
        }
  return r;
}

/// Embed an N^2 x N^2 operator into the triple tensor space so it acts on
/// factors (a, b) with 0 <= a < b <= 2 and as the identity elsewhere.
template <class S>
Matrix<S> embed(const Matrix<S>& m, const Space& s, int lega, int legb) {
  int N = s.N();
  if (m.size() != N * N) throw std::invalid_argument("bad embedding");
  if (lega < 0 || legb > 2 || lega >= legb) throw std::invalid_argument("bad embedding");
  int other = 3 - lega - legb;
  S zero = m(0, 0);
  zero -= zero;
  Matrix<S> r(N * N * N, zero);
  auto pack = [N](int f0, int f1, int f2) { return (f0 * N + f1) * N + f2; };
  for (int pa = 0; pa < N; ++pa)
    for (int pb = 0; pb < N; ++pb)
      for (int qa = 0; qa < N; ++qa)
        for (int qb = 0; qb < N; ++qb) {
          const S& x = m(pa * N + pb, qa * N + qb);
          if (x.is_zero()) continue;
          for (int e = 0; e < N; ++e) {
            int f[3], g[3];
            f[lega] = pa, f[legb] = pb, f[other] = e;
            g[lega] = qa, g[legb] = qb, g[other] = e;
            r(pack(f[0], f[1], f[2]), pack(g[0], g[1], g[2])) = x;
          }
        }
  return r;
}

/// Verifies R_12(u) R_13(u+v) R_23(v) = R_23(v) R_13(u+v) R_12(u) as an exact
/// N^3 x N^3 identity of bivariate rational matrices. kappa_shift perturbs
/// kappa and is used only to demonstrate failure witnesses.
CheckReport check_qybe(const Space& s, const Rational& kappa_shift = Rational(0));

}  // namespace ytwist

#endif
