#ifndef YTWIST_DETAIL_ZKERNEL_HPP
#define YTWIST_DETAIL_ZKERNEL_HPP

// Dense exact kernels for the tensor-space identity checks. Matrices are kept
// in common-denominator form (integer polynomial entries plus one scalar
// denominator polynomial) so products never reduce fractions entrywise; the
// per-entry GCD happens once, when an entry is exported as a RationalFunction.

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ytwist/polynomial.hpp"
#include "ytwist/power_series.hpp"
#include "ytwist/rational_function.hpp"
#include "ytwist/tensor.hpp"

namespace ytwist::detail {

/// Dense polynomial in u, v over arbitrary-precision integers.
/// An empty coefficient vector is the zero polynomial.
struct ZPoly {
  int nu = 0, nv = 0;         // grid extents: exponents 0..nu-1, 0..nv-1
  std::vector<mpz_class> c;   // u-major: c[i*nv + j] is the u^i v^j coefficient

  bool is_zero() const { return c.empty(); }
  const mpz_class& at(int i, int j) const { return c[static_cast<size_t>(i) * nv + j]; }
  mpz_class& at(int i, int j) { return c[static_cast<size_t>(i) * nv + j]; }

  static ZPoly zero() { return {}; }
  static ZPoly constant(long k);
  /// a*u + b (integer coefficients)
  static ZPoly linear_u(long a, long b);

  void trim();
};

ZPoly zp_add(const ZPoly& a, const ZPoly& b);
ZPoly zp_sub(const ZPoly& a, const ZPoly& b);
ZPoly zp_mul(const ZPoly& a, const ZPoly& b);
ZPoly zp_neg(const ZPoly& a);
ZPoly zp_scale(const ZPoly& a, const mpz_class& k);
void zp_acc(ZPoly& acc, const ZPoly& a);                  // acc += a
void zp_acc_mul(ZPoly& acc, const ZPoly& a, const ZPoly& b);  // acc += a*b
bool zp_equal(const ZPoly& a, const ZPoly& b);

/// Clears denominators: p = result / den with integer coefficients.
ZPoly zp_from_polynomial(const Polynomial& p, mpz_class& den);
Polynomial zp_to_polynomial(const ZPoly& a, const mpz_class& den);
RationalFunction zp_to_rf(const ZPoly& num, const ZPoly& den, const mpz_class& num_scale,
                          const mpz_class& den_scale);

/// Substitute u -> alpha*u + beta, v untouched. The result is scaled by
/// den_mult so coefficients stay integral: out/den_mult = a(alpha u + beta).
ZPoly zp_affine_u(const ZPoly& a, const Rational& alpha, const Rational& beta, mpz_class& den_mult);
/// Swap the roles of u and v.
ZPoly zp_swap_vars(const ZPoly& a);

ZPoly zp_pow(const ZPoly& a, int e);

/// Square matrix of ZPoly entries over a single scalar denominator
/// denom_poly / denom_int.
struct CdMat {
  int n = 0;
  std::vector<ZPoly> e;
  ZPoly den = ZPoly::constant(1);
  mpz_class den_int = 1;

  const ZPoly& at(int r, int c) const { return e[static_cast<size_t>(r) * n + c]; }
  ZPoly& at(int r, int c) { return e[static_cast<size_t>(r) * n + c]; }
  static CdMat zeros(int n);
  static CdMat identity(int n);
};

CdMat cd_mul(const CdMat& a, const CdMat& b);
CdMat cd_add(const CdMat& a, const CdMat& b);
CdMat cd_sub(const CdMat& a, const CdMat& b);
CdMat cd_scale_rf(const CdMat& a, const Polynomial& num, const Polynomial& den);
bool cd_equal(const CdMat& a, const CdMat& b, std::string* witness);
bool cd_is_scalar(const CdMat& a, ZPoly* scalar_num, std::string* witness);
/// Entry as a reduced rational function.
RationalFunction cd_entry(const CdMat& a, int r, int c);
CdMat cd_from_rf(const Matrix<RationalFunction>& m);
/// u -> alpha*u + beta entrywise (denominator transformed consistently).
CdMat cd_affine_u(const CdMat& a, const Rational& alpha, const Rational& beta);
/// Auxiliary-space transpose of an (N*d) x (N*d) block matrix: block (i,j)
/// becomes theta_ij block(-j,-i).
CdMat cd_block_transpose(const CdMat& a, const Space& s, int d);
/// Trace over the auxiliary space: sum of diagonal blocks (a d x d CdMat).
CdMat cd_block_trace(const CdMat& a, const Space& s, int d);
/// Tensor with an identity site factor: N x N scalar matrix -> (N*d) x (N*d).
CdMat cd_expand_site(const CdMat& a, int d);

/// R-matrix numerator in structured form I*A + P*B + Q*C over denominator
/// A = arg(arg-kappa), B = -(arg-kappa), C = arg; denominator arg(arg-kappa).
struct RFactor {
  ZPoly a, b, c;     // scalar numerator polynomials for the I, P, Q parts
  ZPoly den;         // arg*(arg - kappa)
  mpz_class den_int = 1;
  static RFactor identity();
  bool is_identity() const;
};

/// R(arg) for a linear argument arg = cu*u + cv*v + c0 over the given space.
RFactor make_r_factor(const Space& s, const Rational& cu, const Rational& cv, const Rational& c0);

/// Exact check of RX . B1_[leg1] . RY . B2_[leg2] == B2 . RY . B1 . RX on
/// aux (x) aux (x) site, where B1/B2 act on (aux_i, site) and RX/RY on the
/// auxiliary pair. B1 entries are read in the variable u, B2 entries in v.
/// Returns std::nullopt on success, otherwise a witness description.
std::optional<std::string> sandwich_mismatch(const Space& s, int d, const RFactor& rx,
                                             const CdMat& b1, const RFactor& ry, const CdMat& b2);

/// Exact QYBE check R12(u) R13(u+v) R23(v) = R23(v) R13(u+v) R12(u); kappa may
/// be shifted to produce failure witnesses.
std::optional<std::string> qybe_mismatch(const Space& s, const Rational& kappa_shift);

/// Exact checks of the two Q-residue identities on the triple tensor space:
/// Q12 R01(w) R02(w-kappa) = R02(w-kappa) R01(w) Q12 = (1-(w-kappa)^{-2}) Q12
/// Q12 R02(x+kappa) R01(x) = R01(x) R02(x+kappa) Q12 = (1-x^{-2}) Q12.
std::optional<std::string> q_residue_mismatch(const Space& s);

/// Truncated series vector: coefficients of u^0 .. u^-D. Empty means zero.
struct SerVec {
  std::vector<mpz_class> c;
  bool is_zero() const { return c.empty(); }
};

/// Matrix of truncated series over a common integer denominator.
struct SerMat {
  int n = 0;
  int order = 0;
  std::vector<SerVec> e;
  mpz_class den = 1;

  const SerVec& at(int r, int c) const { return e[static_cast<size_t>(r) * n + c]; }
  SerVec& at(int r, int c) { return e[static_cast<size_t>(r) * n + c]; }
  static SerMat zeros(int n, int order);
  static SerMat identity(int n, int order);
};

SerMat ser_mul(const SerMat& a, const SerMat& b);
SerMat ser_sub(const SerMat& a, const SerMat& b);
SerMat ser_scale(const SerMat& a, const PowerSeries& s);
bool ser_equal(const SerMat& a, const SerMat& b, std::string* witness);
bool ser_is_identity(const SerMat& a, std::string* witness);
void ser_normalize(SerMat& a);
PowerSeries ser_entry(const SerMat& a, int r, int c);
SerMat ser_from_powerseries(const Matrix<PowerSeries>& m);

/// Inverse of a matrix series whose constant-coefficient matrix g0 satisfies
/// g0^2 = I (entries 0, +-1). Neumann series in the valuation filtration.
SerMat ser_inverse(const SerMat& a, const std::vector<int>& g0);

enum class SerTransform { Negate, Shift, Reflect };
SerMat ser_substitute(const SerMat& a, SerTransform t, const Rational& kappa);

/// Expand every entry of an exact matrix at u = infinity.
SerMat ser_expand(const CdMat& a, int order);

struct ContractionResult {
  bool proportional = false;
  PowerSeries lambda{0};
  std::string witness;
};

/// Computes M = (Q (x) I_d) . SL_[1] . R(2u-kappa) . SR_[2] on
/// aux (x) aux (x) site in truncated-series mode and decides whether
/// M = lambda(u) (Q (x) I_d), returning lambda.
ContractionResult q_contraction(const Space& s, int d, const SerMat& sl, const SerMat& sr,
                                const Rational& kappa, int order);

/// Run fn(i) for i in [0, n) on the available hardware threads.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace ytwist::detail

#endif
