#pragma once

#include <vector>

#include "plankline/geometry.hpp"

namespace plankline {

/// Nonnegative rational weight per cell, stored row-major by cell_id.
class WeightGrid {
 public:
  explicit WeightGrid(int n, const Rational& fill = 0);

  int n() const { return n_; }
  const Rational& at(const CellIndex& c) const { return w_[cell_id(c, n_)]; }
  /// Throws std::invalid_argument for negative weights or out-of-range cells.
  void set(const CellIndex& c, const Rational& value);

  const std::vector<Rational>& values() const { return w_; }
  Rational total() const;
  std::vector<double> to_doubles() const;

  /// Multiplies every weight by a nonnegative factor.
  void scale(const Rational& factor);

  bool operator==(const WeightGrid& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  int n_;
  std::vector<Rational> w_;
};

}  // namespace plankline
