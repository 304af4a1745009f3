#ifndef YTWIST_PAIR_CATALOG_HPP
#define YTWIST_PAIR_CATALOG_HPP

#include <string>
#include <vector>

#include "ytwist/power_series.hpp"
#include "ytwist/report.hpp"
#include "ytwist/tensor.hpp"

namespace ytwist {

/// Symmetric-pair families. B0/C0/D0 carry the trivial involution; the rest
/// follow Cartan's classification: BDI = (so_N, so_p + so_q),
/// CI = (sp_N, gl_{N/2}), CII = (sp_N, sp_p + sp_q), DIII = (so_N, gl_{N/2}).
enum class Family { B0, C0, D0, CI, DIII, CII, BDI };

enum class GKind { First, Second };

/// A few families admit more than one involution matrix with the same fixed
/// subalgebra; Alternate selects the secondary form where one exists.
enum class GVariant { Primary, Alternate };

const char* family_name(Family f);
bool family_symplectic(Family f);

/// Full symmetric-pair record: the involution matrix G, its kind, the
/// deformation scalar c (second kind only, c = 4/(p-q)), kappa, and the sign
/// conventions entering the symmetry relation. sign_pm is +1 orthogonal / -1
/// symplectic; sign_paren is -1 exactly for CI and DIII.
struct PairSpec {
  Family family;
  int N = 0;
  int p = 0, q = 0;  // only meaningful for BDI, CII
  Space space;
  Rational kappa;
  MatrixQ G;
  GKind kind = GKind::First;
  Rational c;  // defined iff kind == Second
  int sign_pm = 1;
  int sign_paren = 1;
  Rational expected_trace;
  std::string key;

  int theta(int i, int j) const { return space.theta(i, j); }
};

/// Constructs the catalog pair, enforcing the parity constraints
/// ("invalid symmetric pair parameters" on violation).
PairSpec build_pair(Family f, int N, int p = 0, int q = 0, GVariant variant = GVariant::Primary);

/// Parses catalog keys like "BDI:5:3:2", "CI:4", "B0:3".
PairSpec pair_from_key(const std::string& key);

/// The standard verification catalog.
std::vector<std::string> default_catalog();

/// Involution sanity: G^2 = I, G^t = (sign_paren) G, conjugation preserves g,
/// and trace(G) matches the family value.
CheckReport validate_pair(const PairSpec& spec);

/// G(u): the constant matrix for the first kind, (I - c u G)(1 - c u)^{-1}
/// for the second kind.
MatrixRF gu_exact(const PairSpec& spec);

/// Truncated expansion at infinity: G + (G - I) sum_{t>=1} c^{-t} u^{-t}.
Matrix<PowerSeries> gu_series(const PairSpec& spec, int order);

/// Trace of G(u) as a rational function of u.
RationalFunction gu_trace(const PairSpec& spec);

/// Eigenbases of the involution X -> G X G^{-1} on g, extracted from the
/// projected F-basis by exact rank.
struct SubalgebraBasis {
  std::vector<MatrixQ> plus_basis;   // fixed subalgebra
  std::vector<MatrixQ> minus_basis;  // eigenvalue -1 eigenspace
};

SubalgebraBasis fixed_subalgebra(const PairSpec& spec);

int dim_g(const Space& s);
/// dim of the fixed subalgebra for the catalog families.
int dim_g_rho(const PairSpec& spec);

}  // namespace ytwist

#endif
