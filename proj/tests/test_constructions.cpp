#include "doctest.h"

#include <map>

#include "plankline/constructions.hpp"

using namespace plankline;

namespace {

// Non-vertical line only: one exact evaluation per vertex column.
bool through_any_vertex(const Board& b, const Line& l) {
  for (int x = 0; x <= b.n(); ++x) {
    Rational g = (l.slope() * b.coordinate(x) + l.intercept() + 1) * make_rational(b.n(), 2);
    if (g.get_den() == 1 && g >= 0 && g <= b.n()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("piercing family examples") {
  auto f3 = piercing_family(Board(3));
  CHECK(f3.lines.size() == 2);
  CHECK(verify_family(Board(3), f3).empty());
  auto f10 = piercing_family(Board(10));
  CHECK(f10.lines.size() == 9);
  CHECK(verify_family(Board(10), f10).empty());
  CHECK(verify_family(Board(4), piercing_family(Board(4))).empty());
  CHECK_THROWS(piercing_family(Board(2)));
}

TEST_CASE("closing line pierces the four corner-adjacent cells") {
  for (int n = 3; n <= 40; ++n) {
    Board b(n);
    auto s = snake_of_line(b, piercing_family(b).lines[0]);
    for (CellIndex c : {CellIndex{1, n}, CellIndex{2, n}, CellIndex{n - 1, 1}, CellIndex{n, 1}}) CHECK(s.contains(c));
    CHECK(piercing_family(b).lines[0].base.slope() == make_rational(-(2 * n - 1), 2 * n - 2));
  }
}

TEST_CASE("structure of the translated lines") {
  for (int n = 3; n <= 60; ++n) {
    Board b(n);
    auto fam = piercing_family(b);
    const Rational step = make_rational(2, n);
    for (int i = 1; i <= n - 2; ++i) {
      const Line& l = fam.lines[i].base;
      CHECK_FALSE(through_any_vertex(b, l));
      // The centre of cell (n-i, i+1) lies on the line; the offset is along x = -y.
      Rational cx = -1 + make_rational(2 * (n - i) - 1, n), cy = -1 + make_rational(2 * (i + 1) - 1, n);
      CHECK(l.evaluate(cx, cy) == 0);
      std::map<int, int> per_row;
      for (const auto& c : snake_of_line(b, fam.lines[i]).cells) ++per_row[c.j];
      for (auto [row, count] : per_row) CHECK(count == (row == i + 1 ? 3 : std::min(count, 2)));
      CHECK(per_row[i + 1] == 3);
      if (i + 1 <= n - 2) {
        const Line& next = fam.lines[i + 1].base;
        CHECK(next.slope() == l.slope());
        // Translating by (-2/n, 2/n) moves the intercept by 2/n + slope * 2/n.
        CHECK(next.intercept() == l.intercept() + step + l.slope() * step);
      }
    }
  }
}

TEST_CASE("hitting family examples") {
  auto h2 = hitting_family(Board(2));
  REQUIRE(h2.lines.size() == 1);
  CHECK(h2.lines[0].base == Line::vertical(0));
  CHECK(verify_family(Board(2), h2).empty());
  auto h3 = hitting_family(Board(3));
  REQUIRE(h3.lines.size() == 2);
  CHECK(h3.lines[0].base == Line::vertical(make_rational(-1, 3)));
  CHECK(h3.lines[1].base == Line::vertical(1));
  CHECK(verify_family(Board(3), h3).empty());
  auto h100 = hitting_family(Board(100));
  CHECK(h100.lines.size() == 50);
  CHECK(verify_family(Board(100), h100).empty());
  CHECK(verify_family(Board(5), hitting_family(Board(5))).empty());
}

TEST_CASE("verify_family reports uncovered cells") {
  LineFamily empty;
  empty.n = 2;
  CHECK(verify_family(Board(2), empty).size() == 4);
  // A hitting family does not pierce: boundary lines miss every open cell.
  LineFamily h = hitting_family(Board(4));
  h.mode = CoverMode::pierce;
  CHECK(verify_family(Board(4), h).size() == 16);
}

TEST_CASE("line family JSON round trip") {
  auto fam = piercing_family(Board(7));
  auto back = line_family_from_json(nlohmann::json::parse(to_json(fam).dump()));
  CHECK(back == fam);
  CHECK_THROWS(line_family_from_json(nlohmann::json::parse(R"({"n": 2, "lines": [{"a": "0", "b": "0", "c": "1"}]})")));
  CHECK_THROWS(line_family_from_json(nlohmann::json::parse(R"({"lines": []})")));
}
