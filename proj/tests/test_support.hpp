#pragma once

// Independent oracles and generators shared by the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "plankline/geometry.hpp"

namespace plankline::testing {

/// Random rational in [-range, range] with denominator <= max_den.
inline Rational random_rational(std::mt19937_64& rng, long max_den, long range = 1) {
  std::uniform_int_distribution<long> den(1, max_den);
  long q = den(rng);
  std::uniform_int_distribution<long> num(-range * q, range * q);
  return make_rational(num(rng), q);
}

/// Random non-vertical or vertical rational line meeting a neighbourhood of the board.
inline Line random_line(std::mt19937_64& rng, long max_den = 97) {
  std::uniform_int_distribution<int> kind(0, 9);
  if (kind(rng) == 0) return Line::vertical(random_rational(rng, max_den, 1));
  Rational slope = random_rational(rng, max_den, 4);
  Rational at_zero = random_rational(rng, max_den, 2);
  return Line::from_slope(slope, at_zero);
}

/// Pierce oracle: walks the line through [-1,1]^2, collects every parameter where it
/// crosses a grid line x = const or y = const, and classifies the midpoint of each
/// consecutive pair. A midpoint strictly inside a cell proves that cell is pierced;
/// every pierced cell contains such an open piece of the line.
inline std::set<CellIndex> pierce_oracle(const Board& board, const Line& line) {
  const int n = board.n();
  std::set<CellIndex> out;
  // Parametrize p(u) = p0 + u*d.
  Rational x0, y0, dx, dy;
  if (line.is_vertical()) {
    x0 = line.c() / line.a();
    y0 = 0;
    dx = 0;
    dy = 1;
  } else {
    x0 = 0;
    y0 = line.intercept();
    dx = 1;
    dy = line.slope();
  }
  std::vector<Rational> params;
  for (int k = 0; k <= n; ++k) {
    Rational g = board.coordinate(k);
    if (dx != 0) params.push_back((g - x0) / dx);
    if (dy != 0) params.push_back((g - y0) / dy);
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  for (size_t k = 0; k + 1 < params.size(); ++k) {
    Rational u = (params[k] + params[k + 1]) / 2;
    Rational x = x0 + u * dx, y = y0 + u * dy;
    if (x <= -1 || x >= 1 || y <= -1 || y >= 1) continue;
    // Cell index: floor((x+1) n / 2) + 1; reject points on grid lines.
    Rational gx = (x + 1) * make_rational(n, 2), gy = (y + 1) * make_rational(n, 2);
    if (gx.get_den() == 1 || gy.get_den() == 1) continue;
    int i = static_cast<int>(floor(gx).get_si()) + 1;
    int j = static_cast<int>(floor(gy).get_si()) + 1;
    out.insert({i, j});
  }
  return out;
}

/// Hit oracle: direct closed-rectangle / line test by corner evaluation of a*x+b*y-c.
inline std::set<CellIndex> hit_oracle(const Board& board, const Line& line) {
  std::set<CellIndex> out;
  const int n = board.n();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      bool le = false, ge = false;
      for (int a : {i - 1, i})
        for (int b : {j - 1, j}) {
          int s = sgn(line.evaluate(board.coordinate(a), board.coordinate(b)));
          le |= s <= 0;
          ge |= s >= 0;
        }
      if (le && ge) out.insert({i, j});
    }
  return out;
}

/// The explicit member of a perturbed family for a concrete small delta.
inline Line explicit_perturbation(const PerturbedLine& p, const Rational& delta) {
  if (p.base.is_vertical()) {
    // x = c + tilt*delta*(y - pivot) + shift*delta^2
    Rational c = p.base.c() / p.base.a();
    Rational k = p.tilt * delta;
    return Line(Rational(1), -k, c - k * p.pivot + p.shift * delta * delta);
  }
  Rational m = p.base.slope() + p.tilt * delta;
  Rational q = p.base.intercept() - p.tilt * delta * p.pivot + p.shift * delta * delta;
  return Line::from_slope(m, q);
}

inline std::set<CellIndex> as_set(const std::vector<CellIndex>& v) { return {v.begin(), v.end()}; }

/// Consecutive cells along the line differ by +1 in exactly one coordinate once the
/// walking order is fixed by the slope sign (rows descend for negative slopes).
inline bool is_staircase(const Snake& s, const Line& line) {
  if (s.cells.size() < 2) return true;
  std::vector<CellIndex> order = s.cells;
  bool descending = !line.is_vertical() && line.slope() < 0;
  std::sort(order.begin(), order.end(), [&](const CellIndex& a, const CellIndex& b) {
    if (a.i != b.i) return a.i < b.i;
    return descending ? a.j > b.j : a.j < b.j;
  });
  for (size_t k = 1; k < order.size(); ++k) {
    int di = order[k].i - order[k - 1].i;
    int dj = order[k].j - order[k - 1].j;
    if (descending) dj = -dj;
    if (!((di == 1 && dj == 0) || (di == 0 && dj == 1))) return false;
  }
  return true;
}

}  // namespace plankline::testing
