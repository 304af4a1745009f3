#include "ytwist/pair_catalog.hpp"

#include <sstream>
#include <stdexcept>

#include "ytwist/current_algebra.hpp"
#include "ytwist/linalg.hpp"

namespace ytwist {

const char* family_name(Family f) {
  switch (f) {
    case Family::B0: return "B0";
    case Family::C0: return "C0";
    case Family::D0: return "D0";
    case Family::CI: return "CI";
    case Family::DIII: return "DIII";
    case Family::CII: return "CII";
    case Family::BDI: return "BDI";
  }
  return "?";
}

bool family_symplectic(Family f) {
  return f == Family::C0 || f == Family::CI || f == Family::CII;
}

namespace {

void require(bool cond) {
  if (!cond) throw std::invalid_argument("invalid symmetric pair parameters");
}

MatrixQ build_g_matrix(Family f, const Space& s, int p, int q, GVariant variant) {
  int N = s.N();
  MatrixQ g(N);
  auto E = [&](int i, int j, long val) { g(s.pos(i), s.pos(j)) += Rational(val); };
  switch (f) {
    case Family::B0:
    case Family::C0:
    case Family::D0:
      for (int i : s.indices()) E(i, i, 1);
      break;
    case Family::CI:
    case Family::DIII:
      for (int i = 1; i <= N / 2; ++i) {
        E(i, i, 1);
        E(-i, -i, -1);
      }
      break;
    case Family::CII:
      for (int i = 1; i <= q / 2; ++i) {
        E(i, i, -1);
        E(-i, -i, -1);
      }
      for (int i = q / 2 + 1; i <= N / 2; ++i) {
        E(i, i, 1);
        E(-i, -i, 1);
      }
      break;
    case Family::BDI:
      if (variant == GVariant::Alternate) {
        if (N % 2 == 0) {
          require(p % 2 == 0 && q % 2 == 0);
          for (int i = 1; i <= q / 2; ++i) {
            E(i, i, -1);
            E(-i, -i, -1);
          }
          for (int i = q / 2 + 1; i <= N / 2; ++i) {
            E(i, i, 1);
            E(-i, -i, 1);
          }
        } else {
          require(p % 2 == 1 && q % 2 == 0);
          E(0, 0, -1);
          for (int i = 1; i <= (p - 1) / 2; ++i) {
            E(i, i, -1);
            E(-i, -i, -1);
          }
          for (int i = (p + 1) / 2; i <= (N - 1) / 2; ++i) {
            E(i, i, 1);
            E(-i, -i, 1);
          }
        }
      } else if (N % 2 == 0) {
        for (int i = 1; i <= (p - q) / 2; ++i) {
          E(i, i, 1);
          E(-i, -i, 1);
        }
        for (int i = (p - q) / 2 + 1; i <= N / 2; ++i) {
          E(-i, i, 1);
          E(i, -i, 1);
        }
      } else {
        for (int i = -(p - q - 1) / 2; i <= (p - q - 1) / 2; ++i) E(i, i, 1);
        for (int i = (p - q + 1) / 2; i <= (N - 1) / 2; ++i) {
          E(-i, i, 1);
          E(i, -i, 1);
        }
      }
      break;
  }
  return g;
}

}  // namespace

PairSpec build_pair(Family f, int N, int p, int q, GVariant variant) {
  ThetaFamily theta = family_symplectic(f) ? ThetaFamily::Symplectic : ThetaFamily::Orthogonal;
  require(N >= 2);
  switch (f) {
    case Family::B0:
      require(N % 2 == 1);
      break;
    case Family::D0:
      require(N % 2 == 0);
      break;
    case Family::C0:
      require(N % 2 == 0);
      break;
    case Family::CI:
    case Family::DIII:
      require(N % 2 == 0);
      break;
    case Family::CII:
      require(N % 2 == 0 && p > 0 && q > 0 && p + q == N && p % 2 == 0 && q % 2 == 0);
      break;
    case Family::BDI:
      require(p + q == N && q > 0);
      if (N % 2 == 0)
        require(p >= q && (p - q) % 2 == 0);
      else
        require(p > q && (p - q) % 2 == 1);
      break;
  }
  if (variant == GVariant::Alternate) require(f == Family::BDI);

  PairSpec spec{f, N, p, q, Space(theta, N), Rational(0), MatrixQ(N)};
  spec.kappa = spec.space.kappa();
  spec.G = build_g_matrix(f, spec.space, p, q, variant);
  bool second = (f == Family::BDI || f == Family::CII) && p > q;
  spec.kind = second ? GKind::Second : GKind::First;
  switch (f) {
    case Family::B0:
    case Family::C0:
    case Family::D0:
      spec.expected_trace = Rational(N);
      break;
    case Family::CI:
    case Family::DIII:
      spec.expected_trace = Rational(0);
      break;
    case Family::CII:
    case Family::BDI:
      // the alternate odd-N matrix carries the opposite trace
      spec.expected_trace =
          (variant == GVariant::Alternate && N % 2 == 1) ? Rational(q - p) : Rational(p - q);
      break;
  }
  if (second) {
    // c is pinned by the trace of G through the rank-one contraction
    // identity c * tr(G) = 4; the primary matrices have tr(G) = p - q.
    spec.c = Rational(4) / spec.expected_trace;
  }
  spec.sign_pm = spec.space.symplectic() ? -1 : 1;
  spec.sign_paren = (f == Family::CI || f == Family::DIII) ? -1 : 1;
  std::ostringstream key;
  key << family_name(f) << ":" << N;
  if (f == Family::CII || f == Family::BDI) key << ":" << p << ":" << q;
  spec.key = key.str();
  return spec;
}

PairSpec pair_from_key(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : key) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) throw std::invalid_argument("malformed pair key: " + key);
  auto to_int = [&](const std::string& t) {
    size_t pos = 0;
    int val = std::stoi(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("malformed pair key: " + key);
    return val;
  };
  int N = to_int(parts[1]);
  const std::string& fam = parts[0];
  Family f;
  if (fam == "B0") f = Family::B0;
  else if (fam == "C0") f = Family::C0;
  else if (fam == "D0") f = Family::D0;
  else if (fam == "BD0") f = (N % 2 == 1) ? Family::B0 : Family::D0;
  else if (fam == "CI") f = Family::CI;
  else if (fam == "DIII") f = Family::DIII;
  else if (fam == "CII") f = Family::CII;
  else if (fam == "BDI") f = Family::BDI;
  else throw std::invalid_argument("unknown family in pair key: " + key);
  int p = 0, q = 0;
  if (f == Family::CII || f == Family::BDI) {
    if (parts.size() != 4) throw std::invalid_argument("malformed pair key: " + key);
    p = to_int(parts[2]);
    q = to_int(parts[3]);
  } else if (parts.size() != 2) {
    throw std::invalid_argument("malformed pair key: " + key);
  }
  return build_pair(f, N, p, q);
}

std::vector<std::string> default_catalog() {
  return {"B0:3",      "C0:4",      "D0:4",      "CI:4",      "DIII:6",    "CII:4:2:2",
          "CII:8:4:4", "CII:8:6:2", "BDI:5:3:2", "BDI:4:2:2", "BDI:6:4:2", "BDI:3:2:1"};
}

CheckReport validate_pair(const PairSpec& spec) {
  const Space& s = spec.space;
  int N = s.N();
  MatrixQ id = MatrixQ::identity(N, Rational(1));
  if (spec.G * spec.G != id)
    return CheckReport::fail("validate-pair", "G^2 != I for " + spec.key);
  MatrixQ gt = theta_transpose(spec.G, s, 0);
  MatrixQ expect = spec.G;
  if (spec.sign_paren < 0) expect *= Rational(-1);
  if (gt != expect)
    return CheckReport::fail("validate-pair", "G^t != (" + std::string(spec.sign_paren < 0 ? "-" : "+") +
                                                  ")G for " + spec.key);
  if (spec.G.trace() != spec.expected_trace)
    return CheckReport::fail("validate-pair", "trace(G) mismatch for " + spec.key);
  // conjugation preserves g: G F G lies in g for every basis element
  for (int i : s.indices())
    for (int j : s.indices()) {
      MatrixQ f = F_matrix(s, i, j);
      if (f.is_zero()) continue;
      MatrixQ conj = spec.G * f * spec.G;
      MatrixQ anti = conj + theta_transpose(conj, s, 0);
      if (!anti.is_zero()) {
        std::ostringstream os;
        os << "conjugation leaves g at F(" << i << "," << j << ") for " << spec.key;
        return CheckReport::fail("validate-pair", os.str());
      }
    }
  return CheckReport::pass("validate-pair");
}

MatrixRF gu_exact(const PairSpec& spec) {
  int N = spec.space.N();
  MatrixRF r(N);
  if (spec.kind == GKind::First) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) r(i, j) = RationalFunction(spec.G(i, j));
    return r;
  }
  // (I - c u G) / (1 - c u)
  Polynomial den = Polynomial(Rational(1)) - Polynomial::monomial(1, 0, spec.c);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Polynomial num = Polynomial::monomial(1, 0, -spec.c * spec.G(i, j));
      if (i == j) num += Polynomial(Rational(1));
      r(i, j) = RationalFunction(num, den);
    }
  return r;
}

Matrix<PowerSeries> gu_series(const PairSpec& spec, int order) {
  int N = spec.space.N();
  Matrix<PowerSeries> r(N, PowerSeries(order));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j)[0] = spec.G(i, j);
  if (spec.kind == GKind::First) return r;
  Rational cinv = spec.c.inverse();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Rational gmi = spec.G(i, j) - (i == j ? Rational(1) : Rational(0));
      if (gmi.is_zero()) continue;
      Rational ct(1);
      for (int t = 1; t <= order; ++t) {
        ct *= cinv;
        r(i, j)[t] = gmi * ct;
      }
    }
  return r;
}

RationalFunction gu_trace(const PairSpec& spec) {
  if (spec.kind == GKind::First) return RationalFunction(spec.G.trace());
  // (N - 4u)/(1 - c u)
  Polynomial num = Polynomial(Rational(spec.N)) - Polynomial::monomial(1, 0, Rational(4));
  Polynomial den = Polynomial(Rational(1)) - Polynomial::monomial(1, 0, spec.c);
  return RationalFunction(num, den);
}

SubalgebraBasis fixed_subalgebra(const PairSpec& spec) {
  const Space& s = spec.space;
  int N = s.N();
  SubalgebraBasis out;
  RowSpan plus(N * N), minus(N * N);
  for (int i : s.indices())
    for (int j : s.indices()) {
      MatrixQ f = F_matrix(s, i, j);
      if (f.is_zero()) continue;
      MatrixQ conj = spec.G * f * spec.G;
      MatrixQ pplus = f + conj;
      MatrixQ pminus = f - conj;
      if (!pplus.is_zero() && plus.insert(flatten(pplus))) out.plus_basis.push_back(pplus);
      if (!pminus.is_zero() && minus.insert(flatten(pminus))) out.minus_basis.push_back(pminus);
    }
  return out;
}

int dim_g(const Space& s) {
  int N = s.N();
  return s.symplectic() ? N * (N + 1) / 2 : N * (N - 1) / 2;
}

int dim_g_rho(const PairSpec& spec) {
  switch (spec.family) {
    case Family::B0:
    case Family::C0:
    case Family::D0:
      return dim_g(spec.space);
    case Family::CI:
    case Family::DIII:
      return (spec.N / 2) * (spec.N / 2);
    case Family::CII:
      return spec.p * (spec.p + 1) / 2 + spec.q * (spec.q + 1) / 2;
    case Family::BDI:
      return spec.p * (spec.p - 1) / 2 + spec.q * (spec.q - 1) / 2;
  }
  return 0;
}

}  // namespace ytwist
