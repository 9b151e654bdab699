#pragma once

// Grid-coordinate line scanning shared by snake computation, enumeration and
// separation. Grid coordinates map the board [-1,1]^2 onto [0,n]^2 so that cell
// vertices are integer points and cell (i,j) is [i-1,i] x [j-1,j].

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "plankline/geometry.hpp"

namespace plankline::grid {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

template <class Int>
int sign_of(const Int& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

template <class Int>
int clamp_to_int(const Int& v, int lo, int hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  if constexpr (std::is_same_v<Int, Integer>)
    return static_cast<int>(v.get_si());
  else
    return static_cast<int>(v);
}

/// A (perturbed) line in grid coordinates, written in its chart as
/// v*(u) = (slope_num * u + offset_num) / den with den > 0.
/// Non-transposed: u = X, v = Y. Transposed (vertical board lines): u = Y, v = X.
/// The pivot is pivot_num / pivot_den on the u axis.
template <class Int>
struct GridLine {
  bool transposed = false;
  Int slope_num = 0;
  Int offset_num = 0;
  Int den = 1;
  int tilt = 0;
  int shift = 0;
  Int pivot_num = 0;
  Int pivot_den = 1;
};

/// Boundary data at one grid abscissa u: vertices v <= largest_neg are strictly
/// below (perturbed) line, vertices v >= first_pos strictly above, each clamped
/// to [-1, n+1].
struct Transition {
  int largest_neg;
  int first_pos;
};

enum class Incidence { pierce, hit };

template <class Int>
int tie_sign(const GridLine<Int>& L, long u) {
  if (L.tilt != 0) {
    Int d = Int(u) * L.pivot_den - L.pivot_num;
    int s = sign_of(d);
    if (s != 0) return -L.tilt * s;
  }
  return -L.shift;
}

template <class Int>
Transition transition_at(const GridLine<Int>& L, long u, int n, Incidence mode) {
  Int num = L.slope_num * Int(u) + L.offset_num;
  Int fl = floor_div(num, L.den);
  bool exact = (fl * L.den == num);
  Int neg, pos;
  if (!exact) {
    neg = fl;
    pos = fl + 1;
  } else if (mode == Incidence::hit) {
    // Closed incidence: the on-line vertex counts as both sides.
    neg = fl;
    pos = fl;
  } else {
    int t = tie_sign(L, u);
    neg = t < 0 ? fl : fl - 1;
    pos = t > 0 ? fl : fl + 1;
  }
  return {clamp_to_int(neg, -1, n + 1), clamp_to_int(pos, -1, n + 1)};
}

/// Row range [lo, hi] of column `col` (1-based, chart orientation) given the two
/// bounding transitions; empty when lo > hi.
inline std::pair<int, int> column_range(const Transition& left, const Transition& right, int n) {
  int lo = std::max(1, std::min(left.first_pos, right.first_pos));
  int hi = std::min(n, std::max(left.largest_neg, right.largest_neg) + 1);
  return {lo, hi};
}

/// Calls visit(col, lo, hi) for every chart column with a nonempty range.
template <class Int, class Visit>
void scan(const GridLine<Int>& L, int n, Incidence mode, Visit&& visit) {
  Transition prev = transition_at(L, 0, n, mode);
  for (int u = 1; u <= n; ++u) {
    Transition cur = transition_at(L, u, n, mode);
    auto [lo, hi] = column_range(prev, cur, n);
    if (lo <= hi) visit(u, lo, hi);
    prev = cur;
  }
}

/// Exact grid form of a board line; int64 when every intermediate product
/// stays far below overflow, otherwise arbitrary precision.
struct CompiledLine {
  std::optional<GridLine<std::int64_t>> fast;
  GridLine<Integer> exact;
};

CompiledLine compile(const PerturbedLine& line, int n);

/// Inverse of compile for a grid line with small integer data.
PerturbedLine to_board(const GridLine<std::int64_t>& L, int n);

/// Cells (board orientation) visited by a compiled line.
template <class Visit>
void scan_cells(const CompiledLine& c, int n, Incidence mode, Visit&& visit) {
  auto emit = [&](bool transposed, int col, int lo, int hi) {
    for (int r = lo; r <= hi; ++r) {
      if (transposed)
        visit(CellIndex{r, col});
      else
        visit(CellIndex{col, r});
    }
  };
  if (c.fast) {
    scan(*c.fast, n, mode, [&](int col, int lo, int hi) { emit(c.fast->transposed, col, lo, hi); });
  } else {
    scan(c.exact, n, mode, [&](int col, int lo, int hi) { emit(c.exact.transposed, col, lo, hi); });
  }
}

}  // namespace plankline::grid
