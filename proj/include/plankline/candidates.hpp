#pragma once

// The finite candidate family of perturbed lines, generated in grid coordinates.
//
// Every line through at least two board vertices is produced exactly once, keyed
// by its primitive direction (dx, dy) and its first on-board vertex. For such a
// line with on-line vertices u_0 < ... < u_{k-1} (chart abscissae) the 2k
// generic neighbours are: rotations by +-delta about each midpoint
// (u_i + u_{i+1}) / 2, and the two parallel shifts. Together with the four
// corner-touching diagonals these reach every cell of the dual arrangement.

#include <array>
#include <cstdint>
#include <vector>

#include "plankline/grid_scan.hpp"

namespace plankline::grid {

using FastLine = GridLine<std::int64_t>;

/// A line through board vertices; its on-board vertices sit at chart abscissae
/// first_u + k * step for k in [0, count).
struct BaseLine {
  FastLine g;
  int first_u = 0;
  int step = 1;
  int count = 1;
};

/// Primitive directions (dx, dy) with 1 <= dx <= n, |dy| <= n, plus (0, 1) last.
inline std::vector<std::array<int, 2>> candidate_directions(int n) {
  std::vector<std::array<int, 2>> out;
  for (int dx = 1; dx <= n; ++dx)
    for (int dy = -n; dy <= n; ++dy) {
      int a = dx, b = dy < 0 ? -dy : dy;
      while (b != 0) {
        int t = a % b;
        a = b;
        b = t;
      }
      if (a == 1) out.push_back({dx, dy});
    }
  out.push_back({0, 1});
  return out;
}

namespace detail {

inline bool on_board(int n, long x, long y) { return x >= 0 && x <= n && y >= 0 && y <= n; }

inline BaseLine make_base(int n, int x0, int y0, int dx, int dy) {
  BaseLine b;
  if (dx == 0) {
    b.g.transposed = true;
    b.g.slope_num = 0;
    b.g.offset_num = x0;
    b.g.den = 1;
    b.first_u = y0;
    b.step = 1;
    b.count = n - y0 + 1;
    return b;
  }
  b.g.slope_num = dy;
  b.g.offset_num = static_cast<std::int64_t>(y0) * dx - static_cast<std::int64_t>(dy) * x0;
  b.g.den = dx;
  b.first_u = x0;
  b.step = dx;
  int k = (n - x0) / dx;
  if (dy > 0) k = std::min(k, (n - y0) / dy);
  if (dy < 0) k = std::min(k, y0 / -dy);
  b.count = k + 1;
  return b;
}

}  // namespace detail

/// Calls f(BaseLine) for every line with direction (dx, dy) through >= 2 board
/// vertices, ordered by first vertex (x, then y).
template <class F>
void for_each_base_line(int n, int dx, int dy, F&& f) {
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      if (detail::on_board(n, x - dx, y - dy)) continue;
      if (!detail::on_board(n, x + dx, y + dy)) continue;
      f(detail::make_base(n, x, y, dx, dy));
    }
}

/// The four diagonals that touch the board in a single corner.
inline std::vector<BaseLine> corner_lines(int n) {
  std::vector<BaseLine> out;
  for (auto [x, y, dy] : std::array<std::array<int, 3>, 4>{{{0, 0, -1}, {0, n, 1}, {n, 0, 1}, {n, n, -1}}}) {
    BaseLine b = detail::make_base(n, x, y, 1, dy);
    b.count = 1;
    out.push_back(b);
  }
  return out;
}

/// Calls f(FastLine) for each generic neighbour of the base line.
template <class F>
void for_each_perturbation(const BaseLine& b, int n, F&& f) {
  FastLine g = b.g;
  g.shift = 1;
  g.pivot_den = 2;
  for (int k = 0; k + 1 < b.count; ++k) {
    g.pivot_num = 2L * b.first_u + (2L * k + 1) * b.step;
    for (int tilt : {-1, 1}) {
      g.tilt = tilt;
      f(g);
    }
  }
  g.tilt = 0;
  g.pivot_num = n;  // board abscissa 0
  for (int shift : {-1, 1}) {
    g.shift = shift;
    f(g);
  }
}

/// Calls f(const BaseLine&) for every base line of the family: all directions in
/// order, then the corner diagonals.
template <class F>
void for_each_base_line(int n, F&& f) {
  for (auto [dx, dy] : candidate_directions(n)) for_each_base_line(n, dx, dy, f);
  for (const auto& b : corner_lines(n)) f(b);
}

// ---------------------------------------------------------------------------
// Float scoring of all perturbations of a base line against cell weights.

/// Prefix sums of double weights in both chart orientations.
struct FloatWeights {
  int n = 0;
  std::vector<double> col;  // col[(u-1)*(n+1) + r] = sum_{j <= r} w(u, j)
  std::vector<double> row;  // row[(u-1)*(n+1) + r] = sum_{i <= r} w(i, u)
  double total = 0;

  FloatWeights() = default;
  FloatWeights(int n_, const std::vector<double>& w) : n(n_) {
    const size_t stride = static_cast<size_t>(n) + 1;
    col.assign(stride * n, 0.0);
    row.assign(stride * n, 0.0);
    for (int u = 1; u <= n; ++u)
      for (int r = 1; r <= n; ++r) {
        col[(u - 1) * stride + r] = col[(u - 1) * stride + r - 1] + w[(u - 1) * n + (r - 1)];
        row[(u - 1) * stride + r] = row[(u - 1) * stride + r - 1] + w[(r - 1) * n + (u - 1)];
        total += w[(u - 1) * n + (r - 1)];
      }
  }

  double range(bool transposed, int u, int lo, int hi) const {
    if (lo > hi) return 0.0;
    const double* p = (transposed ? row.data() : col.data()) + static_cast<size_t>(u - 1) * (n + 1);
    return p[hi] - p[lo - 1];
  }
};

/// Scores every perturbation of `b` and calls visit(const FastLine&, double).
/// Transitions follow transition_at exactly; only the summation is in floating point.
template <class Visit>
void score_perturbations(const BaseLine& b, const FloatWeights& W, std::vector<Transition>& scratch, Visit&& visit) {
  const int n = W.n;
  const FastLine& g = b.g;
  const bool tr = g.transposed;
  auto clamp = [&](std::int64_t v) { return static_cast<int>(std::min<std::int64_t>(std::max<std::int64_t>(v, -1), n + 1)); };

  // Boundaries where the line is inside the band v in [-1, n+1]; outside it every
  // adjacent column range is empty.
  int ua = 0, ub = n;
  if (g.slope_num != 0) {
    std::int64_t lo_num = -g.den - g.offset_num, hi_num = static_cast<std::int64_t>(n + 1) * g.den - g.offset_num;
    std::int64_t a = floor_div(lo_num, g.slope_num), c = floor_div(hi_num, g.slope_num);
    if (a > c) std::swap(a, c);
    ua = static_cast<int>(std::max<std::int64_t>(0, a - 1));
    ub = static_cast<int>(std::min<std::int64_t>(n, c + 2));
    if (ua > ub) {
      for_each_perturbation(b, n, [&](const FastLine& p) { visit(p, 0.0); });
      return;
    }
  }

  scratch.resize(static_cast<size_t>(n) + 1);
  // Generic transitions; on-board vertices are filled per perturbation.
  std::int64_t A = floor_div(g.slope_num, g.den), B = g.slope_num - A * g.den;
  std::int64_t num0 = g.slope_num * ua + g.offset_num;
  std::int64_t q = floor_div(num0, g.den), r = num0 - q * g.den;
  for (int u = ua; u <= ub; ++u) {
    scratch[u] = {clamp(q), clamp(q + 1)};
    q += A;
    r += B;
    if (r >= g.den) {
      r -= g.den;
      ++q;
    }
  }

  auto is_vertex = [&](int u) { return u >= b.first_u && (u - b.first_u) % b.step == 0 && (u - b.first_u) / b.step < b.count; };
  auto vertex_v = [&](int u) { return static_cast<int>((g.slope_num * u + g.offset_num) / g.den); };

  double base = 0;
  std::vector<int> affected;
  affected.reserve(static_cast<size_t>(2 * b.count + 2));
  for (int u = std::max(1, ua + 1); u <= ub; ++u) {
    if (is_vertex(u - 1) || is_vertex(u)) {
      affected.push_back(u);
      continue;
    }
    auto [lo, hi] = column_range(scratch[u - 1], scratch[u], n);
    base += W.range(tr, u, lo, hi);
  }

  auto transition = [&](int u, int tie) -> Transition {
    if (!is_vertex(u)) return scratch[u];
    int v = vertex_v(u);
    return tie < 0 ? Transition{v, v + 1} : Transition{v - 1, v};
  };

  for_each_perturbation(b, n, [&](const FastLine& p) {
    double s = base;
    for (int u : affected) {
      auto [lo, hi] = column_range(transition(u - 1, tie_sign(p, u - 1)), transition(u, tie_sign(p, u)), n);
      s += W.range(tr, u, lo, hi);
    }
    visit(p, s);
  });
}

}  // namespace plankline::grid
