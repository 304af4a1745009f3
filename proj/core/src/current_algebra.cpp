#include "ytwist/current_algebra.hpp"

#include <sstream>

#include "ytwist/linalg.hpp"

namespace ytwist {

MatrixQ F_matrix(const Space& s, int i, int j) {
  if (!s.valid_index(i) || !s.valid_index(j)) throw std::out_of_range("index out of range");
  MatrixQ f(s.N());
  f(s.pos(i), s.pos(j)) += Rational(1);
  f(s.pos(-j), s.pos(-i)) -= Rational(s.theta(i, j));
  return f;
}

CheckReport check_F_relations(const Space& s) {
  auto idx = s.indices();
  for (int i : idx)
    for (int j : idx) {
      MatrixQ fij = F_matrix(s, i, j);
      MatrixQ anti = fij + F_matrix(s, -j, -i) * Rational(s.theta(i, j));
      if (!anti.is_zero()) {
        std::ostringstream os;
        os << "antisymmetry fails at (" << i << "," << j << ")";
        return CheckReport::fail("f-relations", os.str());
      }
    }
  for (int i : idx)
    for (int j : idx)
      for (int k : idx)
        for (int l : idx) {
          MatrixQ fij = F_matrix(s, i, j), fkl = F_matrix(s, k, l);
          MatrixQ lhs = fij * fkl - fkl * fij;
          MatrixQ rhs(s.N());
          if (j == k) rhs += F_matrix(s, i, l);
          if (i == l) rhs -= F_matrix(s, k, j);
          if (j == -l) rhs += F_matrix(s, k, -i) * Rational(s.theta(i, j));
          if (i == -k) rhs -= F_matrix(s, -j, l) * Rational(s.theta(i, j));
          if (lhs != rhs) {
            std::ostringstream os;
            os << "bracket fails at (" << i << "," << j << "," << k << "," << l << ")";
            return CheckReport::fail("f-relations", os.str());
          }
        }
  return CheckReport::pass("f-relations");
}

Rational killing_pairing(const MatrixQ& x, const MatrixQ& y) {
  return (x * y).trace() * Rational(1, 2);
}

MatrixQ f_prime_matrix(const PairSpec& spec, int i, int j, int m) {
  if (m < 1) throw std::invalid_argument("invalid degree");
  const Space& s = spec.space;
  MatrixQ out(s.N());
  int sign = (m % 2 == 0) ? -1 : 1;  // -(-1)^m
  for (int a : s.indices()) {
    Rational gaj = spec.G(s.pos(a), s.pos(j));
    if (!gaj.is_zero()) out += F_matrix(s, i, a) * gaj;
    Rational gia = spec.G(s.pos(i), s.pos(a));
    if (!gia.is_zero()) out += F_matrix(s, a, j) * (gia * Rational(sign));
  }
  return out;
}

LiePoly f_prime(const PairSpec& spec, int i, int j, int m) {
  MatrixQ coeff = f_prime_matrix(spec, i, j, m);
  LiePoly p;
  p.components.assign(static_cast<size_t>(m), MatrixQ(spec.space.N()));
  p.components.back() = std::move(coeff);
  return p;
}

int graded_dimension(const PairSpec& spec, int m) {
  if (m < 1) throw std::invalid_argument("invalid degree");
  const Space& s = spec.space;
  RowSpan span(s.N() * s.N());
  for (int i : s.indices())
    for (int j : s.indices()) {
      MatrixQ f = f_prime_matrix(spec, i, j, m);
      if (!f.is_zero()) span.insert(flatten(f));
    }
  return span.rank();
}

namespace {

// BDI index blocks: P-block indices carry g_ii = 1 on the diagonal, the
// Q-blocks carry the antidiagonal swap entries.
struct BdiBlocks {
  std::set<int> P, Ppos, Qplus;
  bool in_P(int i) const { return P.count(i) > 0; }
  bool in_Qpm(int i) const { return Qplus.count(i) > 0 || Qplus.count(-i) > 0; }
};

BdiBlocks bdi_blocks(const PairSpec& spec) {
  BdiBlocks b;
  int N = spec.N, p = spec.p, q = spec.q;
  if (N % 2 == 0) {
    for (int i = 1; i <= (p - q) / 2; ++i) {
      b.P.insert(i);
      b.P.insert(-i);
      b.Ppos.insert(i);
    }
    for (int i = (p - q) / 2 + 1; i <= N / 2; ++i) b.Qplus.insert(i);
  } else {
    for (int i = -(p - q - 1) / 2; i <= (p - q - 1) / 2; ++i) {
      b.P.insert(i);
      if (i > 0) b.Ppos.insert(i);
    }
    for (int i = (p - q + 1) / 2; i <= (N - 1) / 2; ++i) b.Qplus.insert(i);
  }
  return b;
}

}  // namespace

std::set<std::pair<int, int>> pbw_index_set(const PairSpec& spec, DegreeParity parity) {
  const Space& s = spec.space;
  std::set<std::pair<int, int>> out;
  auto idx = s.indices();
  switch (spec.family) {
    case Family::B0:
    case Family::D0:
      if (parity == DegreeParity::Odd)
        for (int i : idx)
          for (int j : idx)
            if (i + j > 0) out.insert({i, j});
      break;
    case Family::C0:
      if (parity == DegreeParity::Odd)
        for (int i : idx)
          for (int j : idx)
            if (i + j >= 0) out.insert({i, j});
      break;
    case Family::CI:
      for (int i : idx)
        for (int j : idx) {
          if (parity == DegreeParity::Odd && i > 0 && j > 0) out.insert({i, j});
          if (parity == DegreeParity::Even && i + j >= 0 && i * j < 0) out.insert({i, j});
        }
      break;
    case Family::DIII:
      for (int i : idx)
        for (int j : idx) {
          if (parity == DegreeParity::Odd && i > 0 && j > 0) out.insert({i, j});
          if (parity == DegreeParity::Even && i + j > 0 && i * j < 0) out.insert({i, j});
        }
      break;
    case Family::CII: {
      int h = spec.q / 2;
      auto inner = [&](int i) { return std::abs(i) <= h; };
      auto outer = [&](int i) { return std::abs(i) >= h + 1; };
      for (int i : idx)
        for (int j : idx) {
          if (parity == DegreeParity::Odd && i + j >= 0 &&
              ((inner(i) && inner(j)) || (outer(i) && outer(j))))
            out.insert({i, j});
          if (parity == DegreeParity::Even &&
              ((i >= h + 1 && inner(j)) || (j >= h + 1 && inner(i))))
            out.insert({i, j});
        }
      break;
    }
    case Family::BDI: {
      BdiBlocks b = bdi_blocks(spec);
      bool odd_n = spec.N % 2 == 1;
      for (int i : idx)
        for (int j : idx) {
          bool cross = (b.Ppos.count(i) && b.Qplus.count(j)) ||
                       (b.Qplus.count(i) && b.Ppos.count(j)) ||
                       (odd_n && i == 0 && b.Qplus.count(j));
          if (parity == DegreeParity::Odd) {
            if (i + j > 0 && ((b.in_P(i) && b.in_P(j)) || cross)) out.insert({i, j});
            if (b.in_Qpm(i) && b.in_Qpm(j) && i > std::abs(j)) out.insert({i, j});
          } else {
            if (i + j > 0 && cross) out.insert({i, j});
            if (b.in_Qpm(i) && b.in_Qpm(j) && i >= std::abs(j) && i != j) out.insert({i, j});
          }
        }
      break;
    }
  }
  return out;
}

// --- Tensor currents -------------------------------------------------------

namespace {

// Reduce (i, j) modulo F_ij = -theta_ij F_{-j,-i}. Returns false for a zero
// element (orthogonal with j = -i).
bool canonical_index(const Space& s, int& i, int& j, int& sign) {
  sign = 1;
  if (i + j == 0 && !s.symplectic()) return false;
  if (i + j < 0) {
    sign = -s.theta(i, j);
    int ni = -j, nj = -i;
    i = ni;
    j = nj;
  }
  return true;
}

}  // namespace

std::vector<std::pair<std::pair<int, int>, Rational>> decompose_in_g(const Space& s,
                                                                     const MatrixQ& m) {
  std::vector<std::pair<std::pair<int, int>, Rational>> out;
  for (int i : s.indices())
    for (int j : s.indices()) {
      if (i + j < 0) continue;
      if (i + j == 0 && !s.symplectic()) continue;
      Rational c = m(s.pos(i), s.pos(j));
      if (i + j == 0) c *= Rational(1, 2);  // F_{i,-i} = 2 E_{i,-i} in the symplectic case
      if (!c.is_zero()) out.push_back({{i, j}, c});
    }
  return out;
}

void TensorLiePoly::add(int i, int j, int r, int k, int l, int s, const Rational& coeff) {
  if (coeff.is_zero()) return;
  int sgn1, sgn2;
  int ci = i, cj = j, ck = k, cl = l;
  if (!canonical_index(space_, ci, cj, sgn1)) return;
  if (!canonical_index(space_, ck, cl, sgn2)) return;
  Key key{ci, cj, r, ck, cl, s};
  Rational val = coeff * Rational(sgn1 * sgn2);
  auto [it, inserted] = c_.emplace(key, val);
  if (!inserted) {
    it->second += val;
    if (it->second.is_zero()) c_.erase(it);
  }
}

TensorLiePoly& TensorLiePoly::operator+=(const TensorLiePoly& o) {
  for (const auto& [k, v] : o.c_) {
    auto [it, inserted] = c_.emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  return *this;
}

TensorLiePoly& TensorLiePoly::operator-=(const TensorLiePoly& o) {
  for (const auto& [k, v] : o.c_) {
    auto [it, inserted] = c_.emplace(k, -v);
    if (!inserted) {
      it->second -= v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  return *this;
}

TensorLiePoly TensorLiePoly::operator-() const {
  TensorLiePoly r(space_);
  for (const auto& [k, v] : c_) r.c_.emplace(k, -v);
  return r;
}

TensorLiePoly TensorLiePoly::flip() const {
  TensorLiePoly r(space_);
  for (const auto& [k, v] : c_) r.c_.emplace(Key{k.k, k.l, k.s, k.i, k.j, k.r}, v);
  return r;
}

std::string TensorLiePoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c_) {
    if (!first) os << " + ";
    os << v.str() << "*F(" << k.i << "," << k.j << ")^(" << k.r << ")(x)F(" << k.k << "," << k.l
       << ")^(" << k.s << ")";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

TensorLiePoly cobracket(const Space& s, int i, int j, int r) {
  TensorLiePoly out(s);
  if (r < 1) throw std::invalid_argument("invalid degree");
  for (int a : s.indices())
    for (int sdeg = 1; sdeg <= r - 1; ++sdeg) {
      out.add(i, a, r - sdeg, a, j, sdeg, Rational(1));
      out.add(a, j, sdeg, i, a, r - sdeg, Rational(-1));
    }
  return out;
}

TensorLiePoly cobracket_of_matrix(const Space& s, const MatrixQ& coeff_matrix, int r) {
  TensorLiePoly out(s);
  for (const auto& [ij, c] : decompose_in_g(s, coeff_matrix)) {
    TensorLiePoly d = cobracket(s, ij.first, ij.second, r);
    for (const auto& [k, v] : d.terms()) out.add(k.i, k.j, k.r, k.k, k.l, k.s, v * c);
  }
  return out;
}

TensorLiePoly apply_rho_rho(const PairSpec& spec, const TensorLiePoly& t) {
  const Space& s = spec.space;
  TensorLiePoly out(s);
  for (const auto& [key, v] : t.terms()) {
    // rho(F x^{r-1}) = (-1)^{r-1} (G F G) x^{r-1} on each factor
    MatrixQ left = spec.G * F_matrix(s, key.i, key.j) * spec.G;
    MatrixQ right = spec.G * F_matrix(s, key.k, key.l) * spec.G;
    int sgn = ((key.r - 1) + (key.s - 1)) % 2 == 0 ? 1 : -1;
    for (const auto& [lij, lc] : decompose_in_g(s, left))
      for (const auto& [rij, rc] : decompose_in_g(s, right))
        out.add(lij.first, lij.second, key.r, rij.first, rij.second, key.s,
                v * lc * rc * Rational(sgn));
  }
  return out;
}

TensorLiePoly project_eigen(const PairSpec& spec, const TensorLiePoly& t, int left_sign,
                            int right_sign) {
  const Space& s = spec.space;
  TensorLiePoly out(s);
  Rational quarter(1, 4);
  for (const auto& [key, v] : t.terms()) {
    MatrixQ fl = F_matrix(s, key.i, key.j);
    MatrixQ fr = F_matrix(s, key.k, key.l);
    MatrixQ rl = spec.G * fl * spec.G;
    MatrixQ rr = spec.G * fr * spec.G;
    int sl = (key.r - 1) % 2 == 0 ? 1 : -1;
    int sr = (key.s - 1) % 2 == 0 ? 1 : -1;
    // (1 + eps rho)/2 per factor
    MatrixQ pl = fl + rl * Rational(left_sign * sl);
    MatrixQ pr = fr + rr * Rational(right_sign * sr);
    for (const auto& [lij, lc] : decompose_in_g(s, pl))
      for (const auto& [rij, rc] : decompose_in_g(s, pr))
        out.add(lij.first, lij.second, key.r, rij.first, rij.second, key.s,
                v * lc * rc * quarter);
  }
  return out;
}

TensorLiePoly tau_projection(const PairSpec& spec, int i, int j, int r) {
  TensorLiePoly delta = cobracket_of_matrix(spec.space, f_prime_matrix(spec, i, j, r), r);
  return project_eigen(spec, delta, -1, +1);
}

TensorLiePoly tau_closed_form(const PairSpec& spec, int i, int j, int r) {
  const Space& s = spec.space;
  TensorLiePoly out(s);
  for (int a : s.indices())
    for (int sdeg = 1; sdeg <= r - 1; ++sdeg) {
      MatrixQ right_aj = f_prime_matrix(spec, a, j, r - sdeg);
      for (const auto& [rij, rc] : decompose_in_g(s, right_aj))
        out.add(i, a, sdeg, rij.first, rij.second, r - sdeg, rc);
      MatrixQ right_ia = f_prime_matrix(spec, i, a, r - sdeg);
      Rational sign = (sdeg % 2 == 0) ? Rational(-1) : Rational(1);
      for (const auto& [rij, rc] : decompose_in_g(s, right_ia))
        out.add(a, j, sdeg, rij.first, rij.second, r - sdeg, rc * sign);
    }
  return out;
}

}  // namespace ytwist
