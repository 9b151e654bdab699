#include "plankline/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "plankline/grid_scan.hpp"

namespace plankline {

Board::Board(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("board size must be >= 1");
}

Rational Board::coordinate(int k) const { return Rational(-1) + make_rational(2L * k, n_); }

// ---------------------------------------------------------------------------
// Line

Line::Line(Rational a, Rational b, Rational c) {
  if (a == 0 && b == 0) throw std::invalid_argument("degenerate line: a = b = 0");
  Integer l = 1;
  for (const Rational* r : {&a, &b, &c}) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r->get_den_mpz_t());
  Integer ia = a.get_num() * (l / a.get_den());
  Integer ib = b.get_num() * (l / b.get_den());
  Integer ic = c.get_num() * (l / c.get_den());
  Integer g = 0;
  for (const Integer* z : {&ia, &ib, &ic}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z->get_mpz_t());
  ia /= g;
  ib /= g;
  ic /= g;
  if (ia < 0 || (ia == 0 && ib < 0)) {
    ia = -ia;
    ib = -ib;
    ic = -ic;
  }
  a_ = Rational(ia);
  b_ = Rational(ib);
  c_ = Rational(ic);
}

Line Line::from_slope(const Rational& slope, const Rational& intercept) {
  return Line(-slope, Rational(1), intercept);
}

Line Line::vertical(const Rational& offset) { return Line(Rational(1), Rational(0), offset); }

Line Line::through(const Rational& x1, const Rational& y1, const Rational& x2, const Rational& y2) {
  Rational a = y2 - y1;
  Rational b = x1 - x2;
  if (a == 0 && b == 0) throw std::invalid_argument("Line::through needs distinct points");
  return Line(a, b, a * x1 + b * y1);
}

bool Line::operator<(const Line& o) const {
  if (a_ != o.a_) return a_ < o.a_;
  if (b_ != o.b_) return b_ < o.b_;
  return c_ < o.c_;
}

std::string Line::to_string() const {
  return plankline::to_string(a_) + "*x + " + plankline::to_string(b_) + "*y = " + plankline::to_string(c_);
}

// ---------------------------------------------------------------------------
// PerturbedLine

PerturbedLine::PerturbedLine(Line l, int tilt_, int shift_, Rational pivot_)
    : base(std::move(l)), tilt(tilt_), shift(shift_), pivot(std::move(pivot_)) {
  if (tilt < -1 || tilt > 1 || shift < -1 || shift > 1)
    throw std::invalid_argument("tilt and shift must be in {-1, 0, 1}");
  if (tilt == 0) pivot = 0;
}

bool PerturbedLine::operator<(const PerturbedLine& o) const {
  if (!(base == o.base)) return base < o.base;
  if (tilt != o.tilt) return tilt < o.tilt;
  if (shift != o.shift) return shift < o.shift;
  return pivot < o.pivot;
}

int PerturbedLine::side(const Rational& x, const Rational& y) const {
  Rational h, u;
  if (base.is_vertical()) {
    h = x - base.c() / base.a();
    u = y;
  } else {
    h = y - base.slope() * x - base.intercept();
    u = x;
  }
  if (int s = sgn(h); s != 0) return s;
  if (tilt != 0) {
    if (int s = sgn(u - pivot); s != 0) return -tilt * s;
  }
  return -shift;
}

// ---------------------------------------------------------------------------
// Snake

bool Snake::contains(const CellIndex& c) const { return std::binary_search(cells.begin(), cells.end(), c); }

Snake make_snake(int n, std::vector<CellIndex> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (const auto& c : cells)
    if (c.i < 1 || c.i > n || c.j < 1 || c.j > n) throw std::invalid_argument("cell outside board");
  return Snake{n, std::move(cells)};
}

Snake snake_of_line(const Board& board, const PerturbedLine& line) {
  auto compiled = grid::compile(line, board.n());
  std::vector<CellIndex> cells;
  cells.reserve(static_cast<size_t>(2 * board.n()));
  grid::scan_cells(compiled, board.n(), grid::Incidence::pierce, [&](CellIndex c) { cells.push_back(c); });
  std::sort(cells.begin(), cells.end());
  return Snake{board.n(), std::move(cells)};
}

std::vector<CellIndex> hit_cells_of_line(const Board& board, const Line& line) {
  auto compiled = grid::compile(PerturbedLine(line), board.n());
  std::vector<CellIndex> cells;
  grid::scan_cells(compiled, board.n(), grid::Incidence::hit, [&](CellIndex c) { cells.push_back(c); });
  std::sort(cells.begin(), cells.end());
  return cells;
}

Line dual_line(const Rational& s, const Rational& t) { return Line(s, Rational(1) - abs(s), t); }

// ---------------------------------------------------------------------------
// Symmetries

namespace {

struct Matrix2 {
  int m00, m01, m10, m11;
};

Matrix2 matrix_of(Symmetry g) {
  switch (g) {
    case Symmetry::identity: return {1, 0, 0, 1};
    case Symmetry::rotate90: return {0, -1, 1, 0};
    case Symmetry::rotate180: return {-1, 0, 0, -1};
    case Symmetry::rotate270: return {0, 1, -1, 0};
    case Symmetry::reflect_x: return {-1, 0, 0, 1};
    case Symmetry::reflect_y: return {1, 0, 0, -1};
    case Symmetry::reflect_diag: return {0, 1, 1, 0};
    case Symmetry::reflect_anti: return {0, -1, -1, 0};
  }
  throw std::invalid_argument("unknown symmetry");
}

template <class T>
void apply_matrix(const Matrix2& m, T& x, T& y) {
  T nx = T(m.m00) * x + T(m.m01) * y;
  T ny = T(m.m10) * x + T(m.m11) * y;
  x = nx;
  y = ny;
}

}  // namespace

std::string to_string(Symmetry g) {
  switch (g) {
    case Symmetry::identity: return "identity";
    case Symmetry::rotate90: return "rotate90";
    case Symmetry::rotate180: return "rotate180";
    case Symmetry::rotate270: return "rotate270";
    case Symmetry::reflect_x: return "reflect_x";
    case Symmetry::reflect_y: return "reflect_y";
    case Symmetry::reflect_diag: return "reflect_diag";
    case Symmetry::reflect_anti: return "reflect_anti";
  }
  return "?";
}

void apply_symmetry(Symmetry g, Rational& x, Rational& y) { apply_matrix(matrix_of(g), x, y); }
void apply_symmetry(Symmetry g, double& x, double& y) { apply_matrix(matrix_of(g), x, y); }

CellIndex apply_symmetry(Symmetry g, const CellIndex& c, int n) {
  // Centered odd coordinates make the board symmetric about the origin.
  int x = 2 * c.i - n - 1;
  int y = 2 * c.j - n - 1;
  apply_matrix(matrix_of(g), x, y);
  return {(x + n + 1) / 2, (y + n + 1) / 2};
}

Line apply_symmetry(Symmetry g, const Line& line) {
  // Orthogonal maps send the normal (a, b) to M (a, b).
  Rational a = line.a(), b = line.b();
  apply_matrix(matrix_of(g), a, b);
  return Line(a, b, line.c());
}

PerturbedLine apply_symmetry(Symmetry g, const PerturbedLine& line) {
  const Matrix2 m = matrix_of(g);
  Line image = apply_symmetry(g, line.base);
  if (line.tilt == 0 && line.shift == 0) return PerturbedLine(image);

  // Pivot point, chart direction and the positive-side direction of the source chart.
  Rational px, py, dx, dy, ex, ey;
  if (line.base.is_vertical()) {
    px = line.base.c() / line.base.a();
    py = line.pivot;
    dx = 0;
    dy = 1;
    ex = 1;
    ey = 0;
  } else {
    px = line.pivot;
    py = line.base.slope() * px + line.base.intercept();
    dx = 1;
    dy = line.base.slope();
    ex = 0;
    ey = 1;
  }
  apply_matrix(m, px, py);
  apply_matrix(m, dx, dy);
  apply_matrix(m, ex, ey);

  Rational pivot;
  int kappa, orient;
  if (image.is_vertical()) {
    pivot = py;
    kappa = sgn(dy);
    orient = sgn(ex);
  } else {
    pivot = px;
    kappa = sgn(dx);
    orient = sgn(ey - image.slope() * ex);
  }
  return PerturbedLine(image, orient * kappa * line.tilt, orient * line.shift, pivot);
}

Snake apply_symmetry(Symmetry g, const Snake& snake) {
  std::vector<CellIndex> cells;
  cells.reserve(snake.cells.size());
  for (const auto& c : snake.cells) cells.push_back(apply_symmetry(g, c, snake.n));
  std::sort(cells.begin(), cells.end());
  return Snake{snake.n, std::move(cells)};
}

// ---------------------------------------------------------------------------
// Grid compilation

namespace grid {

namespace {

constexpr double kFastLimit = 1.0e17;  // well below 2^63 / 64

bool small(const Integer& z, const Integer& bound) { return abs(z) < bound; }

}  // namespace

CompiledLine compile(const PerturbedLine& line, int n) {
  CompiledLine out;
  GridLine<Integer>& g = out.exact;
  g.tilt = line.tilt;
  g.shift = line.shift;
  const Rational half_n = make_rational(n, 2);
  Rational slope, offset;
  if (line.base.is_vertical()) {
    g.transposed = true;
    slope = 0;
    offset = (line.base.c() / line.base.a() + 1) * half_n;
  } else {
    g.transposed = false;
    slope = line.base.slope();
    offset = (line.base.intercept() - slope + 1) * half_n;
  }
  Integer den;
  mpz_lcm(den.get_mpz_t(), slope.get_den_mpz_t(), offset.get_den_mpz_t());
  g.den = den;
  g.slope_num = slope.get_num() * (den / slope.get_den());
  g.offset_num = offset.get_num() * (den / offset.get_den());
  Rational pivot = (line.pivot + 1) * half_n;
  g.pivot_num = pivot.get_num();
  g.pivot_den = pivot.get_den();

  const Integer bound(static_cast<unsigned long>(kFastLimit / (n + 2)));
  if (small(g.slope_num, bound) && small(g.offset_num, bound) && small(g.den, bound) &&
      small(g.pivot_num, bound) && small(g.pivot_den, bound)) {
    GridLine<std::int64_t> f;
    f.transposed = g.transposed;
    f.slope_num = g.slope_num.get_si();
    f.offset_num = g.offset_num.get_si();
    f.den = g.den.get_si();
    f.tilt = g.tilt;
    f.shift = g.shift;
    f.pivot_num = g.pivot_num.get_si();
    f.pivot_den = g.pivot_den.get_si();
    out.fast = f;
  }
  return out;
}

PerturbedLine to_board(const GridLine<std::int64_t>& L, int n) {
  const Rational two_over_n = make_rational(2, n);
  Rational pivot = make_rational(L.pivot_num, L.pivot_den) * two_over_n - 1;
  pivot.canonicalize();
  if (L.transposed) {
    if (L.slope_num != 0) throw std::invalid_argument("transposed grid line must be vertical");
    Rational x = make_rational(L.offset_num, L.den) * two_over_n - 1;
    x.canonicalize();
    return PerturbedLine(Line::vertical(x), L.tilt, L.shift, pivot);
  }
  Rational m = make_rational(L.slope_num, L.den);
  Rational q = make_rational(L.offset_num, L.den) * two_over_n + m - 1;
  q.canonicalize();
  return PerturbedLine(Line::from_slope(m, q), L.tilt, L.shift, pivot);
}

}  // namespace grid

}  // namespace plankline
