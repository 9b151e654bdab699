#include "plankline/weights.hpp"

#include <stdexcept>

namespace plankline {

WeightGrid::WeightGrid(int n, const Rational& fill) : n_(n) {
  if (n < 1) throw std::invalid_argument("board size must be >= 1");
  if (fill < 0) throw std::invalid_argument("weights must be nonnegative");
  w_.assign(static_cast<size_t>(n) * n, fill);
}

void WeightGrid::set(const CellIndex& c, const Rational& value) {
  if (c.i < 1 || c.i > n_ || c.j < 1 || c.j > n_) throw std::invalid_argument("cell outside board");
  if (value < 0) throw std::invalid_argument("weights must be nonnegative");
  w_[cell_id(c, n_)] = value;
}

Rational WeightGrid::total() const {
  Rational s = 0;
  for (const auto& w : w_) s += w;
  return s;
}

std::vector<double> WeightGrid::to_doubles() const {
  std::vector<double> out;
  out.reserve(w_.size());
  for (const auto& w : w_) out.push_back(w.get_d());
  return out;
}

void WeightGrid::scale(const Rational& factor) {
  if (factor < 0) throw std::invalid_argument("scale factor must be nonnegative");
  for (auto& w : w_) w *= factor;
}

}  // namespace plankline
