#ifndef YTWIST_LINALG_HPP
#define YTWIST_LINALG_HPP

#include <utility>
#include <vector>

#include "ytwist/rational.hpp"
#include "ytwist/tensor.hpp"

namespace ytwist {

/// Incremental row-echelon span over Q, for exact rank and membership tests.
class RowSpan {
 public:
  explicit RowSpan(int dim) : dim_(dim) {}

  /// Reduces v against the current rows; inserts the remainder if nonzero.
  /// Returns true when the rank grew.
  bool insert(std::vector<Rational> v);

  bool contains(std::vector<Rational> v) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return dim_; }

 private:
  void reduce(std::vector<Rational>& v) const;
  int dim_;
  std::vector<std::pair<int, std::vector<Rational>>> rows_;  // (pivot index, pivot-normalized row)
};

std::vector<Rational> flatten(const MatrixQ& m);

}  // namespace ytwist

#endif
