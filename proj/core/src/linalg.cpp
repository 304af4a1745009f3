#include "ytwist/linalg.hpp"

namespace ytwist {

void RowSpan::reduce(std::vector<Rational>& v) const {
  for (const auto& [piv, row] : rows_) {
    if (v[static_cast<size_t>(piv)].is_zero()) continue;
    Rational f = v[static_cast<size_t>(piv)];
    for (int k = piv; k < dim_; ++k) v[static_cast<size_t>(k)] -= f * row[static_cast<size_t>(k)];
  }
}

bool RowSpan::insert(std::vector<Rational> v) {
  reduce(v);
  int piv = -1;
  for (int k = 0; k < dim_; ++k)
    if (!v[static_cast<size_t>(k)].is_zero()) {
      piv = k;
      break;
    }
  if (piv < 0) return false;
  Rational inv = v[static_cast<size_t>(piv)].inverse();
  for (int k = piv; k < dim_; ++k) v[static_cast<size_t>(k)] *= inv;
  // keep rows ordered by pivot so reduce() is a single sweep
  auto it = rows_.begin();
  while (it != rows_.end() && it->first < piv) ++it;
  rows_.insert(it, {piv, std::move(v)});
  return true;
}

bool RowSpan::contains(std::vector<Rational> v) const {
  reduce(v);
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<Rational> flatten(const MatrixQ& m) {
  std::vector<Rational> v;
  v.reserve(static_cast<size_t>(m.size()) * m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) v.push_back(m(i, j));
  return v;
}

}  // namespace ytwist
