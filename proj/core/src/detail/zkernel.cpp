#include "ytwist/detail/zkernel.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace ytwist::detail {

// ---------------------------------------------------------------------------
// ZPoly
// ---------------------------------------------------------------------------

ZPoly ZPoly::constant(long k) {
  if (k == 0) return {};
  ZPoly p;
  p.nu = p.nv = 1;
  p.c.emplace_back(k);
  return p;
}

ZPoly ZPoly::linear_u(long a, long b) {
  ZPoly p;
  p.nu = 2;
  p.nv = 1;
  p.c.resize(2);
  p.c[0] = b;
  p.c[1] = a;
  p.trim();
  return p;
}

void ZPoly::trim() {
  int mu = -1, mv = -1;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j)
      if (at(i, j) != 0) {
        if (i > mu) mu = i;
        if (j > mv) mv = j;
      }
  if (mu < 0) {
    nu = nv = 0;
    c.clear();
    return;
  }
  if (mu + 1 == nu && mv + 1 == nv) return;
  ZPoly t;
  t.nu = mu + 1;
  t.nv = mv + 1;
  t.c.resize(static_cast<size_t>(t.nu) * t.nv);
  for (int i = 0; i <= mu; ++i)
    for (int j = 0; j <= mv; ++j) t.at(i, j) = at(i, j);
  *this = std::move(t);
}

ZPoly zp_add(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  ZPoly r;
  r.nu = std::max(a.nu, b.nu);
  r.nv = std::max(a.nv, b.nv);
  r.c.resize(static_cast<size_t>(r.nu) * r.nv);
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.nu; ++i)
    for (int j = 0; j < b.nv; ++j) r.at(i, j) += b.at(i, j);
  r.trim();
  return r;
}

ZPoly zp_sub(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) return a;
  ZPoly r;
  r.nu = std::max(a.nu, b.nu);
  r.nv = std::max(a.nv, b.nv);
  r.c.resize(static_cast<size_t>(r.nu) * r.nv);
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.nu; ++i)
    for (int j = 0; j < b.nv; ++j) r.at(i, j) -= b.at(i, j);
  r.trim();
  return r;
}

ZPoly zp_neg(const ZPoly& a) {
  ZPoly r = a;
  for (auto& x : r.c) mpz_neg(x.get_mpz_t(), x.get_mpz_t());
  return r;
}

ZPoly zp_scale(const ZPoly& a, const mpz_class& k) {
  if (k == 0 || a.is_zero()) return {};
  ZPoly r = a;
  for (auto& x : r.c) x *= k;
  return r;
}

void zp_acc(ZPoly& acc, const ZPoly& a) {
  if (a.is_zero()) return;
  if (acc.is_zero() || acc.nu < a.nu || acc.nv < a.nv) {
    acc = zp_add(acc, a);
    return;
  }
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) acc.at(i, j) += a.at(i, j);
}

void zp_acc_mul(ZPoly& acc, const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return;
  int nu = a.nu + b.nu - 1, nv = a.nv + b.nv - 1;
  if (acc.is_zero() || acc.nu < nu || acc.nv < nv) {
    ZPoly grown;
    grown.nu = std::max(nu, acc.nu);
    grown.nv = std::max(nv, acc.nv);
    grown.c.resize(static_cast<size_t>(grown.nu) * grown.nv);
    for (int i = 0; i < acc.nu; ++i)
      for (int j = 0; j < acc.nv; ++j) grown.at(i, j) = acc.at(i, j);
    acc = std::move(grown);
  }
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) {
      const mpz_class& x = a.at(i, j);
      if (x == 0) continue;
      for (int k = 0; k < b.nu; ++k)
        for (int l = 0; l < b.nv; ++l) {
          const mpz_class& y = b.at(k, l);
          if (y == 0) continue;
          mpz_addmul(acc.at(i + k, j + l).get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
    }
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  zp_acc_mul(r, a, b);
  r.trim();
  return r;
}

bool zp_equal(const ZPoly& a, const ZPoly& b) {
  int nu = std::max(a.nu, b.nu), nv = std::max(a.nv, b.nv);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      bool ina = i < a.nu && j < a.nv, inb = i < b.nu && j < b.nv;
      if (ina && inb) {
        if (a.at(i, j) != b.at(i, j)) return false;
      } else if (ina) {
        if (a.at(i, j) != 0) return false;
      } else if (inb) {
        if (b.at(i, j) != 0) return false;
      }
    }
  return true;
}

ZPoly zp_from_polynomial(const Polynomial& p, mpz_class& den) {
  den = 1;
  if (p.is_zero()) return {};
  for (const auto& [m, c] : p.terms())
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.den().get_mpz_t());
  ZPoly r;
  r.nu = p.degree_u() + 1;
  r.nv = p.degree_v() + 1;
  r.c.resize(static_cast<size_t>(r.nu) * r.nv);
  for (const auto& [m, c] : p.terms()) r.at(m.eu, m.ev) = c.num() * (den / c.den());
  return r;
}

Polynomial zp_to_polynomial(const ZPoly& a, const mpz_class& den) {
  Polynomial p;
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) {
      const mpz_class& x = a.at(i, j);
      if (x != 0) p.add_term({i, j}, Rational(mpq_class(x, den)));
    }
  return p;
}

RationalFunction zp_to_rf(const ZPoly& num, const ZPoly& den, const mpz_class& num_scale,
                          const mpz_class& den_scale) {
  return RationalFunction(zp_to_polynomial(num, num_scale), zp_to_polynomial(den, den_scale));
}

namespace {

// sum_i m^{target_pow - i} row_i(v) (A u + B)^i; integral when
// target_pow >= nu - 1. This equals m^{target_pow} * a(alpha u + beta)
// for alpha = A/m, beta = B/m.
ZPoly zp_affine_scaled(const ZPoly& a, const mpz_class& A, const mpz_class& B, const mpz_class& m,
                       int target_pow) {
  if (a.is_zero()) return {};
  ZPoly r;
  r.nu = a.nu;
  r.nv = a.nv;
  r.c.resize(static_cast<size_t>(r.nu) * r.nv);
  std::vector<std::vector<mpz_class>> binom(static_cast<size_t>(a.nu));
  binom[0] = {mpz_class(1)};
  for (int i = 1; i < a.nu; ++i) {
    auto& cur = binom[static_cast<size_t>(i)];
    auto& prev = binom[static_cast<size_t>(i - 1)];
    cur.resize(static_cast<size_t>(i + 1));
    for (int k = 0; k <= i; ++k) {
      if (k < i) cur[static_cast<size_t>(k)] += prev[static_cast<size_t>(k)] * B;
      if (k > 0) cur[static_cast<size_t>(k)] += prev[static_cast<size_t>(k - 1)] * A;
    }
  }
  mpz_class mpow;
  for (int i = 0; i < a.nu; ++i) {
    mpz_pow_ui(mpow.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(target_pow - i));
    for (int j = 0; j < a.nv; ++j) {
      const mpz_class& x = a.at(i, j);
      if (x == 0) continue;
      mpz_class scaled = x * mpow;
      for (int k = 0; k <= i; ++k) {
        const mpz_class& bk = binom[static_cast<size_t>(i)][static_cast<size_t>(k)];
        if (bk != 0) mpz_addmul(r.at(k, j).get_mpz_t(), scaled.get_mpz_t(), bk.get_mpz_t());
      }
    }
  }
  r.trim();
  return r;
}

}  // namespace

ZPoly zp_affine_u(const ZPoly& a, const Rational& alpha, const Rational& beta, mpz_class& den_mult) {
  mpz_class m;
  mpz_lcm(m.get_mpz_t(), alpha.den().get_mpz_t(), beta.den().get_mpz_t());
  mpz_class A = alpha.num() * (m / alpha.den());
  mpz_class B = beta.num() * (m / beta.den());
  int tp = std::max(0, a.nu - 1);
  mpz_pow_ui(den_mult.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(tp));
  return zp_affine_scaled(a, A, B, m, tp);
}

ZPoly zp_swap_vars(const ZPoly& a) {
  if (a.is_zero()) return {};
  ZPoly r;
  r.nu = a.nv;
  r.nv = a.nu;
  r.c.resize(a.c.size());
  for (int i = 0; i < a.nu; ++i)
    for (int j = 0; j < a.nv; ++j) r.at(j, i) = a.at(i, j);
  return r;
}

ZPoly zp_pow(const ZPoly& a, int e) {
  ZPoly r = ZPoly::constant(1);
  for (int i = 0; i < e; ++i) r = zp_mul(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// Threads
// ---------------------------------------------------------------------------

void parallel_for(int n, const std::function<void(int)>& fn) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int nt = std::min(n, std::max(1, hw));
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// CdMat
// ---------------------------------------------------------------------------

CdMat CdMat::zeros(int n) {
  CdMat m;
  m.n = n;
  m.e.resize(static_cast<size_t>(n) * n);
  return m;
}

CdMat CdMat::identity(int n) {
  CdMat m = zeros(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = ZPoly::constant(1);
  return m;
}

CdMat cd_mul(const CdMat& a, const CdMat& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  CdMat r = CdMat::zeros(a.n);
  r.den = zp_mul(a.den, b.den);
  r.den_int = a.den_int * b.den_int;
  parallel_for(a.n, [&](int i) {
    for (int k = 0; k < a.n; ++k) {
      const ZPoly& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < a.n; ++j) {
        const ZPoly& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        zp_acc_mul(r.at(i, j), aik, bkj);
      }
    }
    for (int j = 0; j < a.n; ++j) r.at(i, j).trim();
  });
  return r;
}

namespace {
bool cd_same_den(const CdMat& a, const CdMat& b) {
  return a.den_int == b.den_int && zp_equal(a.den, b.den);
}
}  // namespace

CdMat cd_add(const CdMat& a, const CdMat& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  CdMat r = CdMat::zeros(a.n);
  if (cd_same_den(a, b)) {
    r.den = a.den;
    r.den_int = a.den_int;
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = zp_add(a.e[i], b.e[i]);
    return r;
  }
  ZPoly bd = zp_scale(b.den, b.den_int);
  ZPoly ad = zp_scale(a.den, a.den_int);
  r.den = zp_mul(a.den, b.den);
  r.den_int = a.den_int * b.den_int;
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = zp_add(zp_mul(a.e[i], bd), zp_mul(b.e[i], ad));
  return r;
}

CdMat cd_sub(const CdMat& a, const CdMat& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  CdMat r = CdMat::zeros(a.n);
  if (cd_same_den(a, b)) {
    r.den = a.den;
    r.den_int = a.den_int;
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = zp_sub(a.e[i], b.e[i]);
    return r;
  }
  ZPoly bd = zp_scale(b.den, b.den_int);
  ZPoly ad = zp_scale(a.den, a.den_int);
  r.den = zp_mul(a.den, b.den);
  r.den_int = a.den_int * b.den_int;
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = zp_sub(zp_mul(a.e[i], bd), zp_mul(b.e[i], ad));
  return r;
}

CdMat cd_scale_rf(const CdMat& a, const Polynomial& num, const Polynomial& den) {
  mpz_class ni, di;
  ZPoly zn = zp_from_polynomial(num, ni);
  ZPoly zd = zp_from_polynomial(den, di);
  if (zd.is_zero()) throw std::domain_error("division by zero");
  CdMat r = CdMat::zeros(a.n);
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = zp_scale(zp_mul(a.e[i], zn), di);
  r.den = zp_mul(a.den, zd);
  r.den_int = a.den_int * ni;
  return r;
}

bool cd_equal(const CdMat& a, const CdMat& b, std::string* witness) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  bool same = cd_same_den(a, b);
  ZPoly ad, bd;
  if (!same) {
    ad = zp_scale(a.den, a.den_int);
    bd = zp_scale(b.den, b.den_int);
  }
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      bool eq = same ? zp_equal(a.at(i, j), b.at(i, j))
                     : zp_equal(zp_mul(a.at(i, j), bd), zp_mul(b.at(i, j), ad));
      if (!eq) {
        if (witness) {
          std::ostringstream os;
          RationalFunction diff = cd_entry(a, i, j) - cd_entry(b, i, j);
          os << "entry (" << i << "," << j << "): difference " << diff.str();
          *witness = os.str();
        }
        return false;
      }
    }
  return true;
}

bool cd_is_scalar(const CdMat& a, ZPoly* scalar_num, std::string* witness) {
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      bool ok = (i == j) ? zp_equal(a.at(i, j), a.at(0, 0)) : a.at(i, j).is_zero();
      if (!ok) {
        if (witness) {
          std::ostringstream os;
          os << "entry (" << i << "," << j << "): " << cd_entry(a, i, j).str();
          *witness = os.str();
        }
        return false;
      }
    }
  if (scalar_num) *scalar_num = a.at(0, 0);
  return true;
}

RationalFunction cd_entry(const CdMat& a, int r, int c) {
  return zp_to_rf(a.at(r, c), a.den, mpz_class(1), a.den_int);
}

CdMat cd_from_rf(const Matrix<RationalFunction>& m) {
  int n = m.size();
  Polynomial den(Rational(1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Polynomial& d = m(i, j).den();
      Polynomial g = poly_gcd(den, d);
      den = den * exact_divide(d, g);
    }
  std::vector<Polynomial> scaled(static_cast<size_t>(n) * n);
  mpz_class lcm = 1, tmp;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Polynomial q = m(i, j).num() * exact_divide(den, m(i, j).den());
      for (const auto& [mono, c] : q.terms())
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.den().get_mpz_t());
      scaled[static_cast<size_t>(i) * n + j] = std::move(q);
    }
  for (const auto& [mono, c] : den.terms())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.den().get_mpz_t());
  CdMat r = CdMat::zeros(n);
  Rational scale{mpq_class(lcm)};
  for (size_t i = 0; i < scaled.size(); ++i) {
    Polynomial p = scaled[i] * scale;
    r.e[i] = zp_from_polynomial(p, tmp);
    if (tmp != 1) throw std::logic_error("denominator clearing failed");
  }
  Polynomial pd = den * scale;
  r.den = zp_from_polynomial(pd, tmp);
  if (tmp != 1) throw std::logic_error("denominator clearing failed");
  return r;
}

CdMat cd_affine_u(const CdMat& a, const Rational& alpha, const Rational& beta) {
  mpz_class m;
  mpz_lcm(m.get_mpz_t(), alpha.den().get_mpz_t(), beta.den().get_mpz_t());
  mpz_class A = alpha.num() * (m / alpha.den());
  mpz_class B = beta.num() * (m / beta.den());
  int numax = a.den.nu;
  for (const auto& p : a.e) numax = std::max(numax, p.nu);
  int tp = std::max(0, numax - 1);
  CdMat r = CdMat::zeros(a.n);
  parallel_for(a.n, [&](int i) {
    for (int j = 0; j < a.n; ++j) r.at(i, j) = zp_affine_scaled(a.at(i, j), A, B, m, tp);
  });
  r.den = zp_affine_scaled(a.den, A, B, m, tp);
  r.den_int = a.den_int;
  return r;
}

CdMat cd_block_transpose(const CdMat& a, const Space& s, int d) {
  int N = s.N();
  if (a.n != N * d) throw std::invalid_argument("size mismatch");
  CdMat r = CdMat::zeros(a.n);
  r.den = a.den;
  r.den_int = a.den_int;
  for (int ia : s.indices())
    for (int jb : s.indices()) {
      int sign = s.theta(ia, jb);
      int src_r = s.pos(-jb) * d, src_c = s.pos(-ia) * d;
      int dst_r = s.pos(ia) * d, dst_c = s.pos(jb) * d;
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
          const ZPoly& p = a.at(src_r + x, src_c + y);
          r.at(dst_r + x, dst_c + y) = sign < 0 ? zp_neg(p) : p;
        }
    }
  return r;
}

CdMat cd_block_trace(const CdMat& a, const Space& s, int d) {
  int N = s.N();
  if (a.n != N * d) throw std::invalid_argument("size mismatch");
  CdMat r = CdMat::zeros(d);
  r.den = a.den;
  r.den_int = a.den_int;
  for (int b = 0; b < N; ++b)
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) zp_acc(r.at(x, y), a.at(b * d + x, b * d + y));
  for (auto& p : r.e) p.trim();
  return r;
}

CdMat cd_expand_site(const CdMat& a, int d) {
  CdMat r = CdMat::zeros(a.n * d);
  r.den = a.den;
  r.den_int = a.den_int;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      const ZPoly& p = a.at(i, j);
      if (p.is_zero()) continue;
      for (int x = 0; x < d; ++x) r.at(i * d + x, j * d + x) = p;
    }
  return r;
}

// ---------------------------------------------------------------------------
// R factors
// ---------------------------------------------------------------------------

RFactor RFactor::identity() {
  RFactor f;
  f.a = ZPoly::constant(1);
  f.den = ZPoly::constant(1);
  return f;
}

bool RFactor::is_identity() const {
  return b.is_zero() && c.is_zero() && zp_equal(a, den) && den_int == 1;
}

RFactor make_r_factor(const Space& s, const Rational& cu, const Rational& cv, const Rational& c0) {
  const Rational kappa = s.kappa();
  mpz_class m = 1;
  for (const Rational* x : {&cu, &cv, &c0, &kappa})
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), x->den().get_mpz_t());
  auto scaled = [&](const Rational& x) -> mpz_class { return x.num() * (m / x.den()); };
  ZPoly arg, argk;
  arg.nu = 2;
  arg.nv = 2;
  arg.c.resize(4);
  arg.at(0, 0) = scaled(c0);
  arg.at(1, 0) = scaled(cu);
  arg.at(0, 1) = scaled(cv);
  argk = arg;
  argk.at(0, 0) -= scaled(kappa);
  arg.trim();
  argk.trim();
  RFactor f;
  f.a = zp_mul(arg, argk);
  f.b = zp_neg(zp_scale(argk, m));
  f.c = zp_scale(arg, m);
  f.den = f.a;
  f.den_int = 1;
  return f;
}

// ---------------------------------------------------------------------------
// Site-block products
//
// Blocks of B1 are polynomials in u; blocks of B2 are stored in u but read in
// the variable v. The coefficient grid of a product has the u-exponent as the
// row and the v-exponent as the column.
// ---------------------------------------------------------------------------

namespace {

struct BlockRef {
  const CdMat* m;
  int d;
  int r0, c0;
  const ZPoly& at(int x, int y) const { return m->at(r0 + x, c0 + y); }
};

BlockRef block_of(const CdMat& m, int d, int pi, int pj) { return {&m, d, pi * d, pj * d}; }

using SiteMat = std::vector<ZPoly>;

void outer_acc(ZPoly& acc, const ZPoly& au, const ZPoly& bv) {
  // acc += au(u) * bv(v) where bv is stored as a u-polynomial.
  if (acc.is_zero() || acc.nu < au.nu || acc.nv < bv.nu) {
    ZPoly grown;
    grown.nu = std::max(acc.nu, au.nu);
    grown.nv = std::max(acc.nv, bv.nu);
    grown.c.resize(static_cast<size_t>(grown.nu) * grown.nv);
    for (int x = 0; x < acc.nu; ++x)
      for (int y = 0; y < acc.nv; ++y) grown.at(x, y) = acc.at(x, y);
    acc = std::move(grown);
  }
  for (int x = 0; x < au.nu; ++x) {
    const mpz_class& ax = au.at(x, 0);
    if (ax == 0) continue;
    for (int y = 0; y < bv.nu; ++y) {
      const mpz_class& by = bv.at(y, 0);
      if (by == 0) continue;
      mpz_addmul(acc.at(x, y).get_mpz_t(), ax.get_mpz_t(), by.get_mpz_t());
    }
  }
}

// out = A(u) . B(v), matrix product of d x d site blocks.
void site_mul_uv(const BlockRef& A, const BlockRef& B, SiteMat& out, int d) {
  out.assign(static_cast<size_t>(d) * d, ZPoly{});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const ZPoly& a = A.at(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < d; ++j) {
        const ZPoly& b = B.at(k, j);
        if (b.is_zero()) continue;
        outer_acc(out[static_cast<size_t>(i) * d + j], a, b);
      }
    }
}

// out = B(v) . A(u), matrix product with the v-valued factor on the left.
void site_mul_vu(const BlockRef& B, const BlockRef& A, SiteMat& out, int d) {
  out.assign(static_cast<size_t>(d) * d, ZPoly{});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const ZPoly& b = B.at(i, k);
      if (b.is_zero()) continue;
      for (int j = 0; j < d; ++j) {
        const ZPoly& a = A.at(k, j);
        if (a.is_zero()) continue;
        outer_acc(out[static_cast<size_t>(i) * d + j], a, b);
      }
    }
}

void site_acc_scaled(SiteMat& acc, const SiteMat& m, const ZPoly& w, int sign) {
  if (w.is_zero()) return;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].is_zero()) continue;
    if (sign > 0) {
      zp_acc_mul(acc[i], m[i], w);
    } else {
      ZPoly neg = zp_neg(m[i]);
      zp_acc_mul(acc[i], neg, w);
    }
  }
}

void site_acc(SiteMat& acc, const SiteMat& m, int sign) {
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].is_zero()) continue;
    if (sign > 0)
      zp_acc(acc[i], m[i]);
    else
      zp_acc(acc[i], zp_neg(m[i]));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Sandwich engine.
//
// Conventions, with row/column pairs written as (first aux, second aux):
//   P[(r1,r2),(c1,c2)] = [c1=r2][c2=r1]
//   Q[(r1,r2),(c1,c2)] = [r2=-r1][c2=-c1] theta(r1,c1)
// B1 acts on (aux1, site) in the variable u; B2 on (aux2, site) in v.
// LHS = RX.B1.RY.B2 has site products b1(u).b2(v); the reversed side
// RHS = B2.RY.B1.RX has b2(v).b1(u).
// ---------------------------------------------------------------------------

std::optional<std::string> sandwich_mismatch(const Space& s, int d, const RFactor& rx,
                                             const CdMat& b1, const RFactor& ry, const CdMat& b2) {
  const int N = s.N();
  auto idx = s.indices();
  auto P = [&](int i) { return s.pos(i); };
  const bool need_cy = !ry.c.is_zero();
  const bool need_cx = !rx.c.is_zero();

  // Column-independent pre-sums.
  //   psum[x][y]  = sum_f b1(x,f) b2(f,y)                (LHS, RY P-pattern)
  //   wab[x][y]   = sum_e b2(x,e).b1(e,y)                (RHS, RY P-pattern)
  //   wca[x][y]   = sum_g theta(g,1) b2(x,-g).b1(y,g)    (RHS, RX-Q RY-I)
  //   wcb[x][y]   = sum_e b2(x,e).b1(e,-y)               (RHS, RX-Q RY-P)
  //   d1sum       = sum_g b1(g,g)                        (RHS, RX-Q RY-Q)
  const bool need_wca = need_cx && !ry.a.is_zero();
  const bool need_wcb = need_cx && !ry.b.is_zero();
  const bool need_d1 = need_cx && need_cy;
  std::vector<SiteMat> psum, wab, wca, wcb;
  if (!ry.b.is_zero()) psum.resize(static_cast<size_t>(N) * N);
  if (!ry.b.is_zero() && (!rx.a.is_zero() || !rx.b.is_zero()))
    wab.resize(static_cast<size_t>(N) * N);
  if (need_wca) wca.resize(static_cast<size_t>(N) * N);
  if (need_wcb) wcb.resize(static_cast<size_t>(N) * N);
  parallel_for(N * N, [&](int t) {
    int x = t / N, y = t % N;
    SiteMat tmp;
    if (!psum.empty()) {
      SiteMat& acc = psum[static_cast<size_t>(t)];
      acc.assign(static_cast<size_t>(d) * d, ZPoly{});
      for (int f = 0; f < N; ++f) {
        site_mul_uv(block_of(b1, d, x, f), block_of(b2, d, f, y), tmp, d);
        site_acc(acc, tmp, +1);
      }
    }
    if (!wab.empty()) {
      SiteMat& acc = wab[static_cast<size_t>(t)];
      acc.assign(static_cast<size_t>(d) * d, ZPoly{});
      for (int e = 0; e < N; ++e) {
        site_mul_vu(block_of(b2, d, x, e), block_of(b1, d, e, y), tmp, d);
        site_acc(acc, tmp, +1);
      }
    }
    if (need_wca) {
      int xi = idx[static_cast<size_t>(x)], yi = idx[static_cast<size_t>(y)];
      SiteMat& acc = wca[static_cast<size_t>(t)];
      acc.assign(static_cast<size_t>(d) * d, ZPoly{});
      for (int g : idx) {
        site_mul_vu(block_of(b2, d, P(xi), P(-g)), block_of(b1, d, P(yi), P(g)), tmp, d);
        site_acc(acc, tmp, s.theta(g, 1));
      }
    }
    if (need_wcb) {
      int yi = idx[static_cast<size_t>(y)];
      SiteMat& acc = wcb[static_cast<size_t>(t)];
      acc.assign(static_cast<size_t>(d) * d, ZPoly{});
      for (int e = 0; e < N; ++e) {
        site_mul_vu(block_of(b2, d, x, e), block_of(b1, d, e, P(-yi)), tmp, d);
        site_acc(acc, tmp, +1);
      }
    }
  });
  SiteMat d1sum(static_cast<size_t>(d) * d);
  if (need_d1)
    for (int g : idx)
      for (int xx = 0; xx < d; ++xx)
        for (int yy = 0; yy < d; ++yy) {
          const ZPoly& p = block_of(b1, d, P(g), P(g)).at(xx, yy);
          if (!p.is_zero()) zp_acc(d1sum[static_cast<size_t>(xx) * d + yy], p);
        }

  // Pattern-pair weights for the reversed side.
  ZPoly wAA = zp_mul(ry.a, rx.a), wBA = zp_mul(ry.b, rx.a), wCA = zp_mul(ry.c, rx.a);
  ZPoly wAB = zp_mul(ry.a, rx.b), wBB = zp_mul(ry.b, rx.b), wCB = zp_mul(ry.c, rx.b);
  ZPoly wAC = zp_mul(ry.a, rx.c), wBC = zp_mul(ry.b, rx.c), wCC = zp_mul(ry.c, rx.c);

  std::vector<std::string> witnesses(static_cast<size_t>(N) * N);
  std::atomic<bool> failed{false};

  parallel_for(N * N, [&](int col) {
    if (failed.load()) return;
    int pz1 = col / N, pz2 = col % N;
    int z1 = idx[static_cast<size_t>(pz1)], z2 = idx[static_cast<size_t>(pz2)];

    // ---- M[(c1,c2)] = (B1.RY.B2)[(c1,c2),(z1,z2)] ----
    //   = Ay b1(c1,z1) b2(c2,z2) + [c2=z1] By psum[c1][z2]
    //     + theta(-c2,z1) Cy b1(c1,-c2) b2(-z1,z2)
    std::vector<SiteMat> M(static_cast<size_t>(N) * N);
    SiteMat prod;
    for (int pc1 = 0; pc1 < N; ++pc1)
      for (int pc2 = 0; pc2 < N; ++pc2) {
        int c2 = idx[static_cast<size_t>(pc2)];
        SiteMat& acc = M[static_cast<size_t>(pc1) * N + pc2];
        acc.assign(static_cast<size_t>(d) * d, ZPoly{});
        if (!ry.a.is_zero()) {
          site_mul_uv(block_of(b1, d, pc1, pz1), block_of(b2, d, pc2, pz2), prod, d);
          site_acc_scaled(acc, prod, ry.a, +1);
        }
        if (!ry.b.is_zero() && c2 == z1)
          site_acc_scaled(acc, psum[static_cast<size_t>(pc1) * N + pz2], ry.b, +1);
        if (need_cy) {
          site_mul_uv(block_of(b1, d, pc1, P(-c2)), block_of(b2, d, P(-z1), pz2), prod, d);
          site_acc_scaled(acc, prod, ry.c, s.theta(-c2, z1));
        }
      }
    SiteMat qsum(static_cast<size_t>(d) * d);
    if (need_cx)
      for (int c : idx) site_acc(qsum, M[static_cast<size_t>(P(c)) * N + P(-c)], s.theta(1, c));

    // ---- RHS[(a1,a2)] = (B2.RY.B1.RX)[(a1,a2),(z1,z2)] ----
    std::vector<SiteMat> R(static_cast<size_t>(N) * N);
    for (auto& sm : R) sm.assign(static_cast<size_t>(d) * d, ZPoly{});
    for (int pa1 = 0; pa1 < N; ++pa1)
      for (int pa2 = 0; pa2 < N; ++pa2) {
        int a1 = idx[static_cast<size_t>(pa1)];
        SiteMat& acc = R[static_cast<size_t>(pa1) * N + pa2];
        // RX I-pattern: ends at (g1,g2) = (z1,z2)
        if (!wAA.is_zero()) {
          site_mul_vu(block_of(b2, d, pa2, pz2), block_of(b1, d, pa1, pz1), prod, d);
          site_acc_scaled(acc, prod, wAA, +1);
        }
        if (!wBA.is_zero() && a1 == z2)
          site_acc_scaled(acc, wab[static_cast<size_t>(pa2) * N + pz1], wBA, +1);
        if (!wCA.is_zero()) {
          site_mul_vu(block_of(b2, d, pa2, P(-a1)), block_of(b1, d, P(-z2), pz1), prod, d);
          site_acc_scaled(acc, prod, wCA, s.theta(a1, -z2));
        }
        // RX P-pattern: ends at (g1,g2) = (z2,z1)
        if (!wAB.is_zero()) {
          site_mul_vu(block_of(b2, d, pa2, pz1), block_of(b1, d, pa1, pz2), prod, d);
          site_acc_scaled(acc, prod, wAB, +1);
        }
        if (!wBB.is_zero() && a1 == z1)
          site_acc_scaled(acc, wab[static_cast<size_t>(pa2) * N + pz2], wBB, +1);
        if (!wCB.is_zero()) {
          site_mul_vu(block_of(b2, d, pa2, P(-a1)), block_of(b1, d, P(-z1), pz2), prod, d);
          site_acc_scaled(acc, prod, wCB, s.theta(a1, -z1));
        }
        // RX Q-pattern: requires z2 = -z1, sums over (g, -g)
        if (z2 == -z1) {
          if (!wAC.is_zero())
            site_acc_scaled(acc, wca[static_cast<size_t>(pa2) * N + pa1], wAC, s.theta(1, z1));
          if (!wBC.is_zero())
            site_acc_scaled(acc, wcb[static_cast<size_t>(pa2) * N + pa1], wBC, s.theta(-a1, z1));
        }
      }
    // RX-Q with RY-Q: theta(a1,z1) wCC b2(a2,-a1).d1sum, on antidiagonal columns.
    if (z2 == -z1 && !wCC.is_zero())
      for (int pa1 = 0; pa1 < N; ++pa1)
        for (int pa2 = 0; pa2 < N; ++pa2) {
          int a1 = idx[static_cast<size_t>(pa1)];
          SiteMat rhs(static_cast<size_t>(d) * d);
          BlockRef b2blk = block_of(b2, d, pa2, P(-a1));
          for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
              const ZPoly& bv = b2blk.at(i, k);
              if (bv.is_zero()) continue;
              for (int j = 0; j < d; ++j) {
                const ZPoly& au = d1sum[static_cast<size_t>(k) * d + j];
                if (!au.is_zero()) outer_acc(rhs[static_cast<size_t>(i) * d + j], au, bv);
              }
            }
          site_acc_scaled(R[static_cast<size_t>(pa1) * N + pa2], rhs, wCC, s.theta(a1, z1));
        }

    // ---- LHS[(a1,a2)] = Ax M[(a1,a2)] + Bx M[(a2,a1)]
    //                    + [a2=-a1] theta(a1,1) Cx qsum; compare with RHS ----
    for (int pa1 = 0; pa1 < N && !failed.load(); ++pa1)
      for (int pa2 = 0; pa2 < N; ++pa2) {
        int a1 = idx[static_cast<size_t>(pa1)], a2 = idx[static_cast<size_t>(pa2)];
        SiteMat lhs(static_cast<size_t>(d) * d);
        if (!rx.a.is_zero())
          site_acc_scaled(lhs, M[static_cast<size_t>(pa1) * N + pa2], rx.a, +1);
        if (!rx.b.is_zero())
          site_acc_scaled(lhs, M[static_cast<size_t>(pa2) * N + pa1], rx.b, +1);
        if (need_cx && a2 == -a1) site_acc_scaled(lhs, qsum, rx.c, s.theta(a1, 1));
        const SiteMat& rhs = R[static_cast<size_t>(pa1) * N + pa2];
        for (int x = 0; x < d; ++x)
          for (int y = 0; y < d; ++y)
            if (!zp_equal(lhs[static_cast<size_t>(x) * d + y],
                          rhs[static_cast<size_t>(x) * d + y])) {
              std::ostringstream os;
              os << "blocks (" << a1 << "," << a2 << ")->(" << z1 << "," << z2
                 << ") site entry (" << x << "," << y << ")";
              witnesses[static_cast<size_t>(col)] = os.str();
              failed.store(true);
              return;
            }
      }
  });

  if (failed.load()) {
    for (const auto& w : witnesses)
      if (!w.empty()) return w;
    return std::string("mismatch");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// QYBE and the Q-residue identities on the triple tensor space
// ---------------------------------------------------------------------------

namespace {

CdMat r_embedded3(const Space& s, const Rational& cu, const Rational& cv, const Rational& c0,
                  int lega, int legb, const Rational& kappa_shift) {
  int N = s.N();
  const Rational kappa = s.kappa() + kappa_shift;
  mpz_class m = 1;
  for (const Rational* x : {&cu, &cv, &c0, &kappa})
    mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), x->den().get_mpz_t());
  auto scaled = [&](const Rational& x) -> mpz_class { return x.num() * (m / x.den()); };
  ZPoly arg, argk;
  arg.nu = 2;
  arg.nv = 2;
  arg.c.resize(4);
  arg.at(0, 0) = scaled(c0);
  arg.at(1, 0) = scaled(cu);
  arg.at(0, 1) = scaled(cv);
  argk = arg;
  argk.at(0, 0) -= scaled(kappa);
  arg.trim();
  argk.trim();
  ZPoly pa = zp_mul(arg, argk);
  ZPoly pb = zp_neg(zp_scale(argk, m));
  ZPoly pc = zp_scale(arg, m);

  CdMat r = CdMat::zeros(N * N * N);
  r.den = pa;
  int other = 3 - lega - legb;
  auto pack = [N](const int f[3]) { return (f[0] * N + f[1]) * N + f[2]; };
  auto put = [&](int pi, int pk, int pj, int pl, const ZPoly& w) {
    for (int e = 0; e < N; ++e) {
      int f[3], g[3];
      f[lega] = pi, f[legb] = pk, f[other] = e;
      g[lega] = pj, g[legb] = pl, g[other] = e;
      ZPoly& cell = r.at(pack(f), pack(g));
      cell = zp_add(cell, w);
    }
  };
  ZPoly npc = zp_neg(pc);
  for (int i : s.indices())
    for (int k : s.indices()) {
      put(s.pos(i), s.pos(k), s.pos(i), s.pos(k), pa);
      put(s.pos(i), s.pos(k), s.pos(k), s.pos(i), pb);
      if (k == -i)
        for (int j : s.indices())
          put(s.pos(i), s.pos(-i), s.pos(j), s.pos(-j), s.theta(i, j) > 0 ? pc : npc);
    }
  return r;
}

}  // namespace

std::optional<std::string> qybe_mismatch(const Space& s, const Rational& kappa_shift) {
  Rational one(1), zero(0);
  CdMat r12u = r_embedded3(s, one, zero, zero, 0, 1, kappa_shift);
  CdMat r13uv = r_embedded3(s, one, one, zero, 0, 2, kappa_shift);
  CdMat r23v = r_embedded3(s, zero, one, zero, 1, 2, kappa_shift);
  CdMat lhs = cd_mul(cd_mul(r12u, r13uv), r23v);
  CdMat rhs = cd_mul(cd_mul(r23v, r13uv), r12u);
  std::string w;
  if (!cd_equal(lhs, rhs, &w)) return w;
  return std::nullopt;
}

std::optional<std::string> q_residue_mismatch(const Space& s) {
  int N = s.N();
  const Rational kappa = s.kappa();
  CdMat q12 = CdMat::zeros(N * N * N);
  q12.den = ZPoly::constant(1);
  for (int i : s.indices())
    for (int j : s.indices())
      for (int e = 0; e < N; ++e) {
        ZPoly& cell =
            q12.at((e * N + s.pos(i)) * N + s.pos(-i), (e * N + s.pos(j)) * N + s.pos(-j));
        cell = zp_add(cell, ZPoly::constant(s.theta(i, j)));
      }
  Rational one(1), zero(0);
  for (int which = 0; which < 2; ++which) {
    CdMat first = which == 0 ? r_embedded3(s, one, zero, zero, 0, 1, zero)
                             : r_embedded3(s, one, zero, kappa, 0, 2, zero);
    CdMat second = which == 0 ? r_embedded3(s, one, zero, -kappa, 0, 2, zero)
                              : r_embedded3(s, one, zero, zero, 0, 1, zero);
    CdMat lhs = cd_mul(q12, cd_mul(first, second));
    CdMat mid = cd_mul(cd_mul(second, first), q12);
    Polynomial pole = which == 0 ? Polynomial::linear(Rational(1), Rational(0), -kappa)
                                 : Polynomial::linear(Rational(1), Rational(0), Rational(0));
    Polynomial num = pole * pole - Polynomial(Rational(1));
    CdMat rhs = cd_scale_rf(q12, num, pole * pole);
    std::string w;
    const char* tag = which == 0 ? "shifted-pole form" : "direct-pole form";
    if (!cd_equal(lhs, mid, &w))
      return std::string(tag) + ": sides differ, " + w;
    if (!cd_equal(lhs, rhs, &w))
      return std::string(tag) + ": not the expected multiple of Q, " + w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Series matrices
// ---------------------------------------------------------------------------

SerMat SerMat::zeros(int n, int order) {
  SerMat m;
  m.n = n;
  m.order = order;
  m.e.resize(static_cast<size_t>(n) * n);
  return m;
}

SerMat SerMat::identity(int n, int order) {
  SerMat m = zeros(n, order);
  for (int i = 0; i < n; ++i) {
    m.at(i, i).c.assign(static_cast<size_t>(order + 1), mpz_class(0));
    m.at(i, i).c[0] = 1;
  }
  return m;
}

namespace {

void sv_acc_mul(SerVec& acc, const SerVec& a, const SerVec& b, int order) {
  if (a.is_zero() || b.is_zero()) return;
  if (acc.is_zero()) acc.c.assign(static_cast<size_t>(order + 1), mpz_class(0));
  int na = static_cast<int>(a.c.size()), nb = static_cast<int>(b.c.size());
  for (int i = 0; i < na && i <= order; ++i) {
    const mpz_class& x = a.c[static_cast<size_t>(i)];
    if (x == 0) continue;
    int jmax = std::min(nb - 1, order - i);
    for (int j = 0; j <= jmax; ++j) {
      const mpz_class& y = b.c[static_cast<size_t>(j)];
      if (y == 0) continue;
      mpz_addmul(acc.c[static_cast<size_t>(i + j)].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
  }
}

void sv_trim(SerVec& v) {
  for (const auto& x : v.c)
    if (x != 0) return;
  v.c.clear();
}

}  // namespace

SerMat ser_mul(const SerMat& a, const SerMat& b) {
  if (a.n != b.n || a.order != b.order) throw std::invalid_argument("size mismatch");
  SerMat r = SerMat::zeros(a.n, a.order);
  r.den = a.den * b.den;
  parallel_for(a.n, [&](int i) {
    for (int k = 0; k < a.n; ++k) {
      const SerVec& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < a.n; ++j) {
        const SerVec& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        sv_acc_mul(r.at(i, j), aik, bkj, a.order);
      }
    }
    for (int j = 0; j < a.n; ++j) sv_trim(r.at(i, j));
  });
  return r;
}

SerMat ser_sub(const SerMat& a, const SerMat& b) {
  if (a.n != b.n || a.order != b.order) throw std::invalid_argument("size mismatch");
  SerMat r = SerMat::zeros(a.n, a.order);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
  mpz_class fa = b.den / g, fb = a.den / g;
  r.den = a.den * fa;
  for (size_t i = 0; i < a.e.size(); ++i) {
    SerVec out;
    if (!a.e[i].is_zero() || !b.e[i].is_zero()) {
      out.c.assign(static_cast<size_t>(a.order + 1), mpz_class(0));
      for (size_t k = 0; k < a.e[i].c.size(); ++k) out.c[k] = a.e[i].c[k] * fa;
      for (size_t k = 0; k < b.e[i].c.size(); ++k) out.c[k] -= b.e[i].c[k] * fb;
      sv_trim(out);
    }
    r.e[i] = std::move(out);
  }
  return r;
}

SerMat ser_scale(const SerMat& a, const PowerSeries& s) {
  if (s.order() != a.order) throw std::invalid_argument("size mismatch");
  mpz_class den = 1;
  for (int i = 0; i <= s.order(); ++i)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), s[i].den().get_mpz_t());
  SerVec sv;
  sv.c.resize(static_cast<size_t>(s.order() + 1));
  for (int i = 0; i <= s.order(); ++i)
    sv.c[static_cast<size_t>(i)] = s[i].num() * (den / s[i].den());
  SerMat r = SerMat::zeros(a.n, a.order);
  r.den = a.den * den;
  for (size_t i = 0; i < a.e.size(); ++i) {
    sv_acc_mul(r.e[i], a.e[i], sv, a.order);
    sv_trim(r.e[i]);
  }
  return r;
}

bool ser_equal(const SerMat& a, const SerMat& b, std::string* witness) {
  SerMat d = ser_sub(a, b);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (!d.at(i, j).is_zero()) {
        if (witness) {
          std::ostringstream os;
          os << "entry (" << i << "," << j << "): " << ser_entry(d, i, j).str();
          *witness = os.str();
        }
        return false;
      }
  return true;
}

bool ser_is_identity(const SerMat& a, std::string* witness) {
  return ser_equal(a, SerMat::identity(a.n, a.order), witness);
}

void ser_normalize(SerMat& a) {
  mpz_class g = a.den;
  for (const auto& v : a.e)
    for (const auto& x : v.c) {
      if (x == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) return;
    }
  if (g <= 1) return;
  a.den /= g;
  for (auto& v : a.e)
    for (auto& x : v.c) x /= g;
}

PowerSeries ser_entry(const SerMat& a, int r, int c) {
  PowerSeries s(a.order);
  const SerVec& v = a.at(r, c);
  for (size_t i = 0; i < v.c.size(); ++i) s[static_cast<int>(i)] = Rational(mpq_class(v.c[i], a.den));
  return s;
}

SerMat ser_from_powerseries(const Matrix<PowerSeries>& m) {
  int n = m.size();
  int order = m(0, 0).order();
  mpz_class den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r <= order; ++r)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j)[r].den().get_mpz_t());
  SerMat out = SerMat::zeros(n, order);
  out.den = den;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SerVec v;
      v.c.resize(static_cast<size_t>(order + 1));
      for (int r = 0; r <= order; ++r)
        v.c[static_cast<size_t>(r)] = m(i, j)[r].num() * (den / m(i, j)[r].den());
      sv_trim(v);
      out.at(i, j) = std::move(v);
    }
  return out;
}

SerMat ser_inverse(const SerMat& a, const std::vector<int>& g0) {
  int n = a.n, D = a.order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpz_class c0 = a.at(i, j).is_zero() ? mpz_class(0) : a.at(i, j).c[0];
      if (c0 != a.den * g0[static_cast<size_t>(i) * n + j])
        throw std::domain_error("non-invertible series");
    }
  // A = M/m; with B = g0 (M - M0) of valuation >= 1:
  // A^{-1} = [sum_k (-1)^k B^k m^{D-k}] g0 / m^D.
  const mpz_class& m = a.den;
  SerMat B = SerMat::zeros(n, D);
  B.den = 1;
  parallel_for(n, [&](int i) {
    for (int j = 0; j < n; ++j) {
      SerVec acc;
      for (int k = 0; k < n; ++k) {
        int g = g0[static_cast<size_t>(i) * n + k];
        if (g == 0) continue;
        const SerVec& v = a.at(k, j);
        if (v.is_zero()) continue;
        if (acc.is_zero()) acc.c.assign(static_cast<size_t>(D + 1), mpz_class(0));
        for (size_t r = 1; r < v.c.size(); ++r) {
          if (g > 0)
            acc.c[r] += v.c[r];
          else
            acc.c[r] -= v.c[r];
        }
      }
      sv_trim(acc);
      B.at(i, j) = std::move(acc);
    }
  });
  SerMat acc = SerMat::zeros(n, D);
  mpz_class mp;
  mpz_pow_ui(mp.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(D));
  for (int i = 0; i < n; ++i) {
    acc.at(i, i).c.assign(static_cast<size_t>(D + 1), mpz_class(0));
    acc.at(i, i).c[0] = mp;
  }
  SerMat pk = SerMat::identity(n, D);
  for (int k = 1; k <= D; ++k) {
    pk = ser_mul(pk, B);
    mpz_pow_ui(mp.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(D - k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const SerVec& v = pk.at(i, j);
        if (v.is_zero()) continue;
        SerVec& t = acc.at(i, j);
        if (t.is_zero()) t.c.assign(static_cast<size_t>(D + 1), mpz_class(0));
        for (size_t r = 0; r < v.c.size(); ++r) {
          if (v.c[r] == 0) continue;
          if (k % 2 == 0)
            mpz_addmul(t.c[r].get_mpz_t(), v.c[r].get_mpz_t(), mp.get_mpz_t());
          else
            mpz_submul(t.c[r].get_mpz_t(), v.c[r].get_mpz_t(), mp.get_mpz_t());
        }
      }
  }
  SerMat out = SerMat::zeros(n, D);
  mpz_pow_ui(mp.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(D));
  out.den = mp;
  parallel_for(n, [&](int i) {
    for (int j = 0; j < n; ++j) {
      SerVec t;
      for (int k = 0; k < n; ++k) {
        int g = g0[static_cast<size_t>(k) * n + j];
        if (g == 0) continue;
        const SerVec& v = acc.at(i, k);
        if (v.is_zero()) continue;
        if (t.is_zero()) t.c.assign(static_cast<size_t>(D + 1), mpz_class(0));
        for (size_t r = 0; r < v.c.size(); ++r) {
          if (g > 0)
            t.c[r] += v.c[r];
          else
            t.c[r] -= v.c[r];
        }
      }
      sv_trim(t);
      out.at(i, j) = std::move(t);
    }
  });
  ser_normalize(out);
  return out;
}

SerMat ser_substitute(const SerMat& a, SerTransform t, const Rational& kappa) {
  int D = a.order;
  SerMat r = SerMat::zeros(a.n, D);
  switch (t) {
    case SerTransform::Negate: {
      r.den = a.den;
      for (size_t i = 0; i < a.e.size(); ++i) {
        if (a.e[i].is_zero()) continue;
        SerVec v = a.e[i];
        for (size_t k = 1; k < v.c.size(); k += 2) mpz_neg(v.c[k].get_mpz_t(), v.c[k].get_mpz_t());
        r.e[i] = std::move(v);
      }
      return r;
    }
    case SerTransform::Shift: {
      const mpz_class p = kappa.num();
      const mpz_class q = kappa.den();
      mpz_class qd;
      mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(D));
      r.den = a.den * qd;
      // fac[rr][sft] = q^D-scaled coefficient of u^{-rr-sft} in (u+kappa)^{-rr}:
      // (-1)^sft C(rr+sft-1, sft) p^sft q^{D-sft}
      std::vector<std::vector<mpz_class>> fac(static_cast<size_t>(D + 1));
      for (int rr = 1; rr <= D; ++rr) {
        auto& row = fac[static_cast<size_t>(rr)];
        row.resize(static_cast<size_t>(D - rr + 1));
        mpz_class pp(1);
        for (int sft = 0; rr + sft <= D; ++sft) {
          mpz_class b;
          mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(rr + sft - 1),
                       static_cast<unsigned long>(sft));
          mpz_class qq;
          mpz_pow_ui(qq.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(D - sft));
          row[static_cast<size_t>(sft)] = b * pp * qq;
          if (sft % 2 == 1)
            mpz_neg(row[static_cast<size_t>(sft)].get_mpz_t(),
                    row[static_cast<size_t>(sft)].get_mpz_t());
          pp *= p;
        }
      }
      for (size_t i = 0; i < a.e.size(); ++i) {
        const SerVec& v = a.e[i];
        if (v.is_zero()) continue;
        SerVec out;
        out.c.assign(static_cast<size_t>(D + 1), mpz_class(0));
        if (v.c[0] != 0) out.c[0] = v.c[0] * qd;
        for (int rr = 1; rr < static_cast<int>(v.c.size()); ++rr) {
          const mpz_class& x = v.c[static_cast<size_t>(rr)];
          if (x == 0) continue;
          for (int sft = 0; rr + sft <= D; ++sft)
            mpz_addmul(out.c[static_cast<size_t>(rr + sft)].get_mpz_t(), x.get_mpz_t(),
                       fac[static_cast<size_t>(rr)][static_cast<size_t>(sft)].get_mpz_t());
        }
        sv_trim(out);
        r.e[i] = std::move(out);
      }
      return r;
    }
    case SerTransform::Reflect: {
      SerMat neg = ser_substitute(a, SerTransform::Negate, kappa);
      return ser_substitute(neg, SerTransform::Shift, -kappa);
    }
  }
  throw std::logic_error("unreachable");
}

SerMat ser_expand(const CdMat& a, int order) {
  if (a.den.nv > 1) throw std::invalid_argument("univariate required");
  int dd = a.den.nu - 1;
  std::vector<mpz_class> den(static_cast<size_t>(dd + 1));
  for (int i = 0; i <= dd; ++i) den[static_cast<size_t>(i)] = a.den.at(i, 0);
  mpq_class lc_inv(mpq_class(1) / mpq_class(den[static_cast<size_t>(dd)]));
  std::vector<mpq_class> inv(static_cast<size_t>(order + 1));
  inv[0] = lc_inv;
  for (int m = 1; m <= order; ++m) {
    mpq_class sum(0);
    for (int i = 1; i <= std::min(m, dd); ++i)
      sum += mpq_class(den[static_cast<size_t>(dd - i)]) * inv[static_cast<size_t>(m - i)];
    inv[static_cast<size_t>(m)] = -sum * lc_inv;
    inv[static_cast<size_t>(m)].canonicalize();
  }
  std::vector<std::vector<mpq_class>> ent(a.e.size());
  mpz_class gden = 1;
  for (size_t t = 0; t < a.e.size(); ++t) {
    const ZPoly& p = a.e[t];
    if (p.is_zero()) continue;
    if (p.nv > 1) throw std::invalid_argument("univariate required");
    int dn = p.nu - 1;
    if (dn > dd) throw std::domain_error("not expandable at infinity");
    std::vector<mpq_class> out(static_cast<size_t>(order + 1));
    for (int k = 0; k + (dd - dn) <= order; ++k) {
      mpq_class sum(0);
      for (int i = 0; i <= std::min(k, dn); ++i)
        sum += mpq_class(p.at(dn - i, 0)) * inv[static_cast<size_t>(k - i)];
      sum.canonicalize();
      out[static_cast<size_t>(k + (dd - dn))] = sum;
    }
    for (const auto& x : out)
      mpz_lcm(gden.get_mpz_t(), gden.get_mpz_t(), x.get_den().get_mpz_t());
    ent[t] = std::move(out);
  }
  SerMat r = SerMat::zeros(a.n, order);
  r.den = gden * a.den_int;
  for (size_t t = 0; t < a.e.size(); ++t) {
    if (ent[t].empty()) continue;
    SerVec v;
    v.c.resize(static_cast<size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
      const mpq_class& x = ent[t][static_cast<size_t>(k)];
      v.c[static_cast<size_t>(k)] = x.get_num() * (gden / x.get_den());
    }
    sv_trim(v);
    r.e[t] = std::move(v);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Q-contraction in series mode
//
// M = (Q (x) I) SL_1 R(2u-kappa) SR_2. Row (a,-a) of M equals
// theta(a,1) * Z where Z[(b1,b2)] = sum_c theta(1,c) W[c][(b1,b2)] and
//   W[c][(b1,b2)] = ra SL(c,b1) SR(-c,b2)
//                 + [b1=-c] rb sum_f SL(c,f) SR(f,b2)
//                 + theta(c,b1) rc SL(c,c) SR(-b1,b2).
// M is proportional to Q (x) I iff Z[(b1,b2)] = [b2=-b1] theta(1,b1) lambda I.
// ---------------------------------------------------------------------------

ContractionResult q_contraction(const Space& s, int d, const SerMat& sl, const SerMat& sr,
                                const Rational& kappa, int order) {
  const int N = s.N();
  auto idx = s.indices();
  auto P = [&](int i) { return s.pos(i); };
  ContractionResult res;

  PowerSeries invp = expand_at_infinity(
      RationalFunction(Polynomial(Rational(1)),
                       Polynomial::linear(Rational(2), Rational(0), -kappa)),
      order);
  PowerSeries invq = expand_at_infinity(
      RationalFunction(Polynomial(Rational(1)),
                       Polynomial::linear(Rational(2), Rational(0), -(kappa + kappa))),
      order);
  mpz_class rden = 1;
  for (int i = 0; i <= order; ++i) {
    mpz_lcm(rden.get_mpz_t(), rden.get_mpz_t(), invp[i].den().get_mpz_t());
    mpz_lcm(rden.get_mpz_t(), rden.get_mpz_t(), invq[i].den().get_mpz_t());
  }
  SerVec ra, rb, rc;
  ra.c.assign(static_cast<size_t>(order + 1), mpz_class(0));
  ra.c[0] = rden;
  rb.c.resize(static_cast<size_t>(order + 1));
  rc.c.resize(static_cast<size_t>(order + 1));
  for (int i = 0; i <= order; ++i) {
    rb.c[static_cast<size_t>(i)] = -invp[i].num() * (rden / invp[i].den());
    rc.c[static_cast<size_t>(i)] = invq[i].num() * (rden / invq[i].den());
  }

  auto mulblk = [&](int li, int lj, int ri, int rj, std::vector<SerVec>& out) {
    out.assign(static_cast<size_t>(d) * d, SerVec{});
    int lr0 = li * d, lc0 = lj * d, rr0 = ri * d, rc0 = rj * d;
    for (int x = 0; x < d; ++x)
      for (int k = 0; k < d; ++k) {
        const SerVec& a = sl.at(lr0 + x, lc0 + k);
        if (a.is_zero()) continue;
        for (int y = 0; y < d; ++y) {
          const SerVec& b = sr.at(rr0 + k, rc0 + y);
          if (b.is_zero()) continue;
          sv_acc_mul(out[static_cast<size_t>(x) * d + y], a, b, order);
        }
      }
  };
  mpz_class total_den = sl.den * rden * sr.den;

  std::vector<std::vector<SerVec>> Z(static_cast<size_t>(N) * N);
  parallel_for(N * N, [&](int col) {
    int pb1 = col / N, pb2 = col % N;
    int b1 = idx[static_cast<size_t>(pb1)];
    std::vector<SerVec> acc(static_cast<size_t>(d) * d);
    std::vector<SerVec> prod;
    auto add_scaled = [&](const std::vector<SerVec>& m, const SerVec& w, int sign) {
      for (size_t i = 0; i < m.size(); ++i) {
        if (m[i].is_zero()) continue;
        SerVec tmp;
        sv_acc_mul(tmp, m[i], w, order);
        if (tmp.is_zero()) continue;
        if (acc[i].is_zero()) acc[i].c.assign(static_cast<size_t>(order + 1), mpz_class(0));
        for (size_t r = 0; r < tmp.c.size(); ++r) {
          if (sign > 0)
            acc[i].c[r] += tmp.c[r];
          else
            acc[i].c[r] -= tmp.c[r];
        }
      }
    };
    for (int c : idx) {
      int th1c = s.theta(1, c);
      mulblk(P(c), pb1, P(-c), pb2, prod);
      add_scaled(prod, ra, th1c);
      if (b1 == -c) {
        std::vector<SerVec> ps(static_cast<size_t>(d) * d);
        std::vector<SerVec> t;
        for (int f = 0; f < N; ++f) {
          mulblk(P(c), f, f, pb2, t);
          for (size_t i = 0; i < t.size(); ++i) {
            if (t[i].is_zero()) continue;
            if (ps[i].is_zero()) ps[i].c.assign(static_cast<size_t>(order + 1), mpz_class(0));
            for (size_t r = 0; r < t[i].c.size(); ++r) ps[i].c[r] += t[i].c[r];
          }
        }
        add_scaled(ps, rb, th1c);
      }
      mulblk(P(c), P(c), P(-b1), pb2, prod);
      add_scaled(prod, rc, th1c * s.theta(c, b1));
    }
    for (auto& v : acc) sv_trim(v);
    Z[static_cast<size_t>(col)] = std::move(acc);
  });

  const std::vector<SerVec>& zref = Z[static_cast<size_t>(P(1)) * N + P(-1)];
  SerVec lam = zref[0];
  for (int col = 0; col < N * N; ++col) {
    int pb1 = col / N, pb2 = col % N;
    int b1 = idx[static_cast<size_t>(pb1)], b2 = idx[static_cast<size_t>(pb2)];
    const auto& blk = Z[static_cast<size_t>(col)];
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const SerVec& v = blk[static_cast<size_t>(x) * d + y];
        bool expect_lam = (b2 == -b1) && (x == y);
        bool ok;
        if (expect_lam) {
          SerVec want = lam;
          if (s.theta(1, b1) < 0)
            for (auto& z : want.c) mpz_neg(z.get_mpz_t(), z.get_mpz_t());
          sv_trim(want);
          SerVec got = v;
          sv_trim(got);
          ok = got.c == want.c;
        } else {
          ok = v.is_zero();
        }
        if (!ok) {
          std::ostringstream os;
          os << "block (" << b1 << "," << b2 << ") site (" << x << "," << y << ")";
          res.witness = os.str();
          return res;
        }
      }
  }
  res.proportional = true;
  PowerSeries lambda(order);
  for (size_t i = 0; i < lam.c.size(); ++i)
    lambda[static_cast<int>(i)] = Rational(mpq_class(lam.c[i], total_den));
  res.lambda = lambda;
  return res;
}

}  // namespace ytwist::detail
