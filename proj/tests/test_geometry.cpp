#include "doctest.h"

#include <random>

#include "plankline/geometry.hpp"
#include "test_support.hpp"

using namespace plankline;
using plankline::testing::as_set;

namespace {

std::vector<CellIndex> cells(std::initializer_list<CellIndex> l) { return {l}; }

}  // namespace

TEST_CASE("line canonical form") {
  Line a(make_rational(-2, 3), Rational(4, 3), Rational(2));
  Line b(Rational(1), Rational(-2), Rational(-3));
  CHECK(a == b);
  CHECK(a.a() == 1);
  CHECK(a.b() == -2);
  CHECK_THROWS(Line(Rational(0), Rational(0), Rational(1)));
  CHECK(Line::vertical(make_rational(1, 2)).is_vertical());
}

TEST_CASE("snake_of_line examples") {
  SUBCASE("single cell") {
    auto s = snake_of_line(Board(1), PerturbedLine(Line::from_slope(0, 0)));
    CHECK(s.cells == cells({{1, 1}}));
  }
  SUBCASE("line inside the cell boundaries pierces nothing") {
    CHECK(snake_of_line(Board(2), PerturbedLine(Line::vertical(0))).empty());
  }
  SUBCASE("generic line, checked against the crossing oracle") {
    Line l = Line::from_slope(make_rational(1, 3), make_rational(1, 7));
    auto s = snake_of_line(Board(2), PerturbedLine(l));
    CHECK(s.cells == cells({{1, 1}, {1, 2}, {2, 2}}));
    CHECK(as_set(s.cells) == plankline::testing::pierce_oracle(Board(2), l));
  }
  SUBCASE("perturbed diagonal") {
    PerturbedLine p(Line::from_slope(1, 0), -1, +1);
    auto s = snake_of_line(Board(2), p);
    CHECK(s.cells == cells({{1, 1}, {1, 2}, {2, 2}}));
    Line explicit_line = plankline::testing::explicit_perturbation(p, make_rational(1, 1000));
    CHECK(as_set(s.cells) == plankline::testing::pierce_oracle(Board(2), explicit_line));
  }
  SUBCASE("line outside the board") {
    CHECK(snake_of_line(Board(3), PerturbedLine(Line::from_slope(0, 5))).empty());
  }
}

TEST_CASE("hit_cells_of_line examples") {
  CHECK(hit_cells_of_line(Board(1), Line::from_slope(0, 1)) == cells({{1, 1}}));
  CHECK(hit_cells_of_line(Board(2), Line::from_slope(1, 0)).size() == 4);
  auto col = hit_cells_of_line(Board(4), Line::vertical(make_rational(-1, 2)));
  CHECK(col.size() == 8);
  for (const auto& c : col) CHECK((c.i == 1 || c.i == 2));
  CHECK(hit_cells_of_line(Board(4), Line::from_slope(1, 3)).empty());
}

TEST_CASE("dual_line examples") {
  CHECK(dual_line(0, 0) == Line::from_slope(0, 0));
  CHECK(dual_line(1, 1) == Line::vertical(1));
  CHECK(dual_line(make_rational(-1, 2), make_rational(1, 4)) == Line::from_slope(1, make_rational(1, 2)));
}

TEST_CASE("symmetry examples") {
  Snake s = make_snake(2, {{1, 1}, {1, 2}});
  CHECK(apply_symmetry(Symmetry::identity, s) == s);
  CHECK(apply_symmetry(Symmetry::rotate180, make_snake(2, {{1, 1}})) == make_snake(2, {{2, 2}}));
  Line l = Line::from_slope(2, make_rational(1, 3));
  CHECK(apply_symmetry(Symmetry::reflect_diag, l) == Line::from_slope(make_rational(1, 2), make_rational(-1, 6)));
  for (auto g : all_symmetries) {
    CellIndex c{1, 3};
    CellIndex image = apply_symmetry(g, c, 4);
    CHECK(image.i >= 1);
    CHECK(image.i <= 4);
    CHECK(image.j >= 1);
    CHECK(image.j <= 4);
  }
}

TEST_CASE("snake matches the crossing oracle on random rational lines") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 12; ++n) {
    Board board(n);
    for (int k = 0; k < 300; ++k) {
      Line l = plankline::testing::random_line(rng, 13);
      auto s = snake_of_line(board, PerturbedLine(l));
      REQUIRE(as_set(s.cells) == plankline::testing::pierce_oracle(board, l));
      CHECK(s.cells.size() <= static_cast<size_t>(2 * n - 1));
      // Through a vertex the unperturbed snake may step diagonally; a generic
      // perturbation restores the staircase and only adds cells.
      Snake generic = snake_of_line(board, PerturbedLine(l, 1, 1));
      CHECK(plankline::testing::is_staircase(generic, l));
      CHECK(generic.cells.size() <= static_cast<size_t>(2 * n - 1));
      for (const auto& c : s.cells) CHECK(generic.contains(c));
      auto hits = as_set(hit_cells_of_line(board, l));
      CHECK(hits == plankline::testing::hit_oracle(board, l));
      for (const auto& c : s.cells) CHECK(hits.count(c) == 1);
    }
  }
}

TEST_CASE("perturbed lines through grid vertices match an explicit small perturbation") {
  std::mt19937_64 rng(11);
  const Rational delta = make_rational(1, 1000000000);
  for (int n = 1; n <= 8; ++n) {
    Board board(n);
    std::uniform_int_distribution<int> coord(0, n);
    std::uniform_int_distribution<int> sgn3(-1, 1);
    for (int k = 0; k < 200; ++k) {
      int x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
      if (x1 == x2 && y1 == y2) continue;
      Line base = Line::through(board.coordinate(x1), board.coordinate(y1), board.coordinate(x2),
                                board.coordinate(y2));
      Rational pivot = make_rational(coord(rng) * 2 - n + (k % 2), n);
      PerturbedLine p(base, sgn3(rng), sgn3(rng), pivot);
      auto s = snake_of_line(board, p);
      if (p.tilt == 0 && p.shift == 0) {
        CHECK(as_set(s.cells) == plankline::testing::pierce_oracle(board, base));
      } else {
        Line e = plankline::testing::explicit_perturbation(p, delta);
        REQUIRE(as_set(s.cells) == plankline::testing::pierce_oracle(board, e));
      }
    }
  }
}

TEST_CASE("equivariance under the eight symmetries") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> sgn3(-1, 1);
  for (int n : {2, 3, 5, 8}) {
    Board board(n);
    std::uniform_int_distribution<int> coord(0, n);
    for (int k = 0; k < 150; ++k) {
      Line base = (k % 3 == 0) ? plankline::testing::random_line(rng, 11)
                               : Line::through(board.coordinate(coord(rng)), board.coordinate(coord(rng)),
                                               board.coordinate(coord(rng)) + make_rational(1, 1000 + k),
                                               board.coordinate(coord(rng)));
      PerturbedLine p(base, sgn3(rng), sgn3(rng), make_rational(coord(rng) - n / 2, n));
      Snake s = snake_of_line(board, p);
      for (auto g : all_symmetries) {
        CHECK(snake_of_line(board, apply_symmetry(g, p)) == apply_symmetry(g, s));
      }
    }
    // Lines through vertex pairs exercise the tie-breaking path.
    for (int k = 0; k < 150; ++k) {
      int x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
      if (x1 == x2 && y1 == y2) continue;
      Line base = Line::through(board.coordinate(x1), board.coordinate(y1), board.coordinate(x2),
                                board.coordinate(y2));
      PerturbedLine p(base, sgn3(rng), sgn3(rng), make_rational(2 * coord(rng) - n - 1, n));
      Snake s = snake_of_line(board, p);
      for (auto g : all_symmetries) CHECK(snake_of_line(board, apply_symmetry(g, p)) == apply_symmetry(g, s));
    }
  }
}

TEST_CASE("lines avoiding every grid vertex ignore the perturbation") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 10; ++n) {
    Board board(n);
    for (int k = 0; k < 50; ++k) {
      // Denominators coprime to the grid spacing keep the line off every vertex.
      Line l = Line::from_slope(plankline::testing::random_rational(rng, 5, 3),
                                make_rational(1, 1009 * (k + 1)) + plankline::testing::random_rational(rng, 5));
      bool through_vertex = false;
      for (int a = 0; a <= n && !through_vertex; ++a)
        for (int b = 0; b <= n; ++b)
          if (l.evaluate(board.coordinate(a), board.coordinate(b)) == 0) through_vertex = true;
      if (through_vertex) continue;
      Snake ref = snake_of_line(board, PerturbedLine(l));
      for (int t = -1; t <= 1; ++t)
        for (int s = -1; s <= 1; ++s) CHECK(snake_of_line(board, PerturbedLine(l, t, s, make_rational(1, 3))) == ref);
    }
  }
}

TEST_CASE("large coefficients take the arbitrary-precision path") {
  Rational huge = Rational(Integer("123456789012345678901234567890")) / Integer("987654321098765432109876543211");
  Line l = Line::from_slope(huge, make_rational(1, 5));
  CHECK(as_set(snake_of_line(Board(6), PerturbedLine(l)).cells) == plankline::testing::pierce_oracle(Board(6), l));
}
