#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "plankline/rational.hpp"

namespace plankline {

/// The n x n chessboard embedded in [-1,1]^2. Cell (i,j) is the closed square
/// [-1 + (i-1)2/n, -1 + i*2/n] x [-1 + (j-1)2/n, -1 + j*2/n]; i indexes x, j indexes y.
class Board {
 public:
  explicit Board(int n);

  int n() const { return n_; }
  int cell_count() const { return n_ * n_; }

  /// Board coordinate of grid index k in [0, n]: -1 + 2k/n.
  Rational coordinate(int k) const;
  double coordinate_d(int k) const { return -1.0 + 2.0 * k / n_; }

 private:
  int n_;
};

struct CellIndex {
  int i = 1;
  int j = 1;
  auto operator<=>(const CellIndex&) const = default;
};

/// Row-major id in [0, n^2): (i-1)*n + (j-1).
inline int cell_id(const CellIndex& c, int n) { return (c.i - 1) * n + (c.j - 1); }
inline CellIndex cell_from_id(int id, int n) { return {id / n + 1, id % n + 1}; }

/// The locus a*x + b*y = c. Always stored canonically: integer coefficients with
/// gcd 1 and the first nonzero of (a, b) positive, so equal loci compare equal.
class Line {
 public:
  Line() = default;
  /// Throws std::invalid_argument when a = b = 0.
  Line(Rational a, Rational b, Rational c);

  /// y = slope * x + intercept.
  static Line from_slope(const Rational& slope, const Rational& intercept);
  /// x = offset.
  static Line vertical(const Rational& offset);
  /// Line through two distinct points.
  static Line through(const Rational& x1, const Rational& y1, const Rational& x2, const Rational& y2);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }

  bool is_vertical() const { return b_ == 0; }
  /// Only for non-vertical lines.
  Rational slope() const { return -a_ / b_; }
  Rational intercept() const { return c_ / b_; }

  /// a*x + b*y - c.
  Rational evaluate(const Rational& x, const Rational& y) const { return a_ * x + b_ * y - c_; }

  bool operator==(const Line& o) const { return a_ == o.a_ && b_ == o.b_ && c_ == o.c_; }
  bool operator<(const Line& o) const;

  std::string to_string() const;

 private:
  Rational a_ = 0, b_ = 1, c_ = 0;
};

/// A line together with an infinitesimal perturbation that resolves incidences
/// with grid vertices.
///
/// For a non-vertical base y = m*x + q the perturbed family is
///   y = m*x + q + tilt*delta*(x - pivot) + shift*delta^2,   delta -> 0+,
/// i.e. the slope grows by tilt*delta while rotating about the point of abscissa
/// `pivot`, and the offset there grows by shift*delta^2. A vertical base x = c uses
/// the transposed chart: x = c + tilt*delta*(y - pivot) + shift*delta^2.
/// With tilt = shift = 0 the object is the base line itself. The pivot defaults
/// to 0, which makes tilt/shift the plain slope/offset perturbation.
struct PerturbedLine {
  Line base;
  int tilt = 0;
  int shift = 0;
  Rational pivot = 0;

  PerturbedLine() = default;
  PerturbedLine(Line l, int tilt_ = 0, int shift_ = 0, Rational pivot_ = 0);

  bool operator==(const PerturbedLine& o) const {
    return base == o.base && tilt == o.tilt && shift == o.shift && pivot == o.pivot;
  }
  bool operator<(const PerturbedLine& o) const;

  /// Lexicographic sign of the perturbed "above minus line" function at a point:
  /// +1 above (or right of, for vertical bases), -1 below, 0 on the line when unperturbed.
  int side(const Rational& x, const Rational& y) const;
};

/// Cells whose open interior meets a line, sorted lexicographically by (i, j).
struct Snake {
  int n = 0;
  std::vector<CellIndex> cells;

  bool operator==(const Snake& o) const { return n == o.n && cells == o.cells; }
  auto operator<=>(const Snake& o) const {
    if (auto c = n <=> o.n; c != 0) return c;
    return cells <=> o.cells;
  }
  bool contains(const CellIndex& c) const;
  size_t size() const { return cells.size(); }
  bool empty() const { return cells.empty(); }
};

Snake make_snake(int n, std::vector<CellIndex> cells);

/// Cells pierced by the (perturbed) line. Exact; O(n).
Snake snake_of_line(const Board& board, const PerturbedLine& line);

/// Cells whose closed square meets the line, sorted.
std::vector<CellIndex> hit_cells_of_line(const Board& board, const Line& line);

/// The line s*x + (1 - |s|)*y = t, for s, t in [-1, 1].
Line dual_line(const Rational& s, const Rational& t);

/// The eight symmetries of the square [-1,1]^2, as maps (x, y) -> (x', y').
enum class Symmetry : std::uint8_t {
  identity,
  rotate90,      // (x, y) -> (-y, x)
  rotate180,     // (x, y) -> (-x, -y)
  rotate270,     // (x, y) -> (y, -x)
  reflect_x,     // (x, y) -> (-x, y)
  reflect_y,     // (x, y) -> (x, -y)
  reflect_diag,  // (x, y) -> (y, x)
  reflect_anti,  // (x, y) -> (-y, -x)
};

inline constexpr std::array<Symmetry, 8> all_symmetries = {
    Symmetry::identity,  Symmetry::rotate90,  Symmetry::rotate180,    Symmetry::rotate270,
    Symmetry::reflect_x, Symmetry::reflect_y, Symmetry::reflect_diag, Symmetry::reflect_anti};

std::string to_string(Symmetry g);

/// Maps the point (x, y) in place.
void apply_symmetry(Symmetry g, Rational& x, Rational& y);
void apply_symmetry(Symmetry g, double& x, double& y);
CellIndex apply_symmetry(Symmetry g, const CellIndex& c, int n);
Line apply_symmetry(Symmetry g, const Line& line);
PerturbedLine apply_symmetry(Symmetry g, const PerturbedLine& line);
Snake apply_symmetry(Symmetry g, const Snake& snake);

}  // namespace plankline
