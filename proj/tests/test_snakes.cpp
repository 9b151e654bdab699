#include "doctest.h"

#include <filesystem>
#include <random>
#include <set>

#include "plankline/candidates.hpp"
#include "plankline/parallel.hpp"
#include "plankline/snakes.hpp"
#include "test_support.hpp"

using namespace plankline;

namespace {

std::set<Snake> as_set(const SnakeFamily& f) { return {f.snakes.begin(), f.snakes.end()}; }

Rational exact_weight(const WeightGrid& w, const Snake& s) {
  Rational sum = 0;
  for (const auto& c : s.cells) sum += w.at(c);
  return sum;
}

WeightGrid random_weights(std::mt19937_64& rng, int n, int zero_percent = 20) {
  WeightGrid w(n);
  std::uniform_int_distribution<int> pct(0, 99);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (pct(rng) >= zero_percent) w.set({i, j}, abs(plankline::testing::random_rational(rng, 17)));
  return w;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("plankline-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("candidate family size") {
  auto c1 = candidate_lines(Board(1));
  std::set<Line> bases;
  for (const auto& l : c1) bases.insert(l.base);
  // 4 edges and 2 diagonals through corner pairs, plus the 4 corner-touching diagonals.
  CHECK(bases.size() == 10);
  CHECK(c1.size() == 32);
  for (int n = 1; n <= 8; ++n) {
    Board b(n);
    auto c = candidate_lines(b);
    std::size_t v = static_cast<std::size_t>(n + 1) * (n + 1);
    CHECK(c.size() == candidate_count(b));
    CHECK(c.size() <= 4 * (v * (v - 1) / 2) + 8 * v + 8);
    CHECK(std::set<PerturbedLine>(c.begin(), c.end()).size() == c.size());
  }
}

TEST_CASE("n=2 candidates include a perturbed diagonal with the expected snake") {
  Board b(2);
  bool found = false;
  Snake target = make_snake(2, {{1, 1}, {1, 2}, {2, 2}});
  for (const auto& l : candidate_lines(b))
    if (l.base == Line::from_slope(1, 0) && snake_of_line(b, l) == target) found = true;
  CHECK(found);
}

TEST_CASE("enumerate_snakes examples") {
  auto f1 = enumerate_snakes(Board(1));
  REQUIRE(f1.snakes.size() == 1);
  CHECK(f1.snakes[0] == make_snake(1, {{1, 1}}));

  auto f2 = enumerate_snakes(Board(2));
  auto set2 = as_set(f2);
  std::vector<CellIndex> all = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (const auto& omit : all) {
    std::vector<CellIndex> cells;
    for (const auto& c : all)
      if (!(c == omit)) cells.push_back(c);
    CHECK(set2.count(make_snake(2, cells)) == 1);
  }
  for (int n = 1; n <= 9; ++n) {
    auto f = enumerate_snakes(Board(n));
    for (const auto& s : f.snakes) {
      CHECK(!s.empty());
      CHECK(s.size() <= static_cast<std::size_t>(2 * n - 1));
    }
    CHECK(std::is_sorted(f.snakes.begin(), f.snakes.end()));
    CHECK(std::adjacent_find(f.snakes.begin(), f.snakes.end()) == f.snakes.end());
  }
}

TEST_CASE("family soundness and symmetry closure") {
  for (int n = 1; n <= 8; ++n) {
    Board b(n);
    for (auto mode : {CoverMode::pierce, CoverMode::hit}) {
      auto f = mode == CoverMode::pierce ? enumerate_snakes(b) : enumerate_hit_sets(b);
      REQUIRE(f.witnesses.size() == f.snakes.size());
      for (std::size_t k = 0; k < f.snakes.size(); ++k) {
        if (mode == CoverMode::pierce) {
          REQUIRE(snake_of_line(b, f.witnesses[k]) == f.snakes[k]);
        } else {
          REQUIRE(hit_cells_of_line(b, f.witnesses[k].base) == f.snakes[k].cells);
        }
      }
      auto members = as_set(f);
      for (auto g : all_symmetries)
        for (const auto& s : f.snakes) REQUIRE(members.count(apply_symmetry(g, s)) == 1);
    }
  }
}

TEST_CASE("randomized completeness") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 12; ++n) {
    Board b(n);
    auto members = as_set(enumerate_snakes(b));
    auto hit_max = maximal_members(enumerate_hit_sets(b));
    std::uniform_int_distribution<int> coord(0, n);
    const int trials = n <= 6 ? 20000 : 5000;
    for (int k = 0; k < trials; ++k) {
      Line l = plankline::testing::random_line(rng, 4 * n + 3);
      Snake s = snake_of_line(b, PerturbedLine(l));
      // A generic neighbour of the line has a snake equal to a member, and the
      // line's own snake is contained in it.
      Snake generic = snake_of_line(b, PerturbedLine(l, (k & 1) ? 1 : -1, (k & 2) ? 1 : -1));
      if (generic.empty()) continue;
      REQUIRE(members.count(generic) == 1);
      for (const auto& c : s.cells) CHECK(generic.contains(c));
    }
    // Through vertex pairs with random pivots; these sit on arrangement edges.
    for (int k = 0; k < trials / 4; ++k) {
      int x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
      if (x1 == x2 && y1 == y2) continue;
      Line base = Line::through(b.coordinate(x1), b.coordinate(y1), b.coordinate(x2), b.coordinate(y2));
      PerturbedLine p(base, (k & 1) ? 1 : -1, (k & 2) ? 1 : -1,
                      plankline::testing::random_rational(rng, 3 * n + 1));
      Snake s = snake_of_line(b, p);
      if (!s.empty()) REQUIRE(members.count(s) == 1);
      // Hit sets of arbitrary lines lie inside a maximal hit set.
      auto hits = hit_cells_of_line(b, base);
      bool inside = false;
      for (const auto& m : hit_max.snakes) {
        if (std::includes(m.cells.begin(), m.cells.end(), hits.begin(), hits.end())) {
          inside = true;
          break;
        }
      }
      CHECK(inside);
    }
  }
}

TEST_CASE("float scoring agrees with exact scanning") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 9; ++n) {
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    std::uniform_int_distribution<int> small(0, 7);
    for (auto& x : w) x = small(rng);  // integers keep float sums exact
    grid::FloatWeights W(n, w);
    std::vector<grid::Transition> scratch;
    grid::for_each_base_line(n, [&](const grid::BaseLine& b) {
      grid::score_perturbations(b, W, scratch, [&](const grid::FastLine& g, double s) {
        double exact = 0;
        grid::scan(g, n, grid::Incidence::pierce, [&](int col, int lo, int hi) {
          for (int r = lo; r <= hi; ++r) exact += g.transposed ? w[(r - 1) * n + (col - 1)] : w[(col - 1) * n + (r - 1)];
        });
        REQUIRE(s == exact);
      });
    });
  }
}

TEST_CASE("separation oracle examples") {
  Board b2(2);
  auto rep = separation_oracle(b2, WeightGrid(2, make_rational(1, 3)));
  CHECK(rep.worst_sum == 1);
  CHECK_FALSE(rep.violated);
  CHECK(snake_of_line(b2, rep.worst_line) == rep.worst_snake);

  for (int n : {1, 4, 7}) CHECK(separation_oracle(Board(n), WeightGrid(n)).worst_sum == 0);

  WeightGrid corner(2);
  corner.set({1, 1}, 1);
  rep = separation_oracle(b2, corner);
  CHECK(rep.worst_sum == 1);
  CHECK(rep.worst_snake.contains({1, 1}));

  auto heavy = separation_oracle(b2, WeightGrid(2, 1));
  CHECK(heavy.worst_sum == 3);
  CHECK(heavy.violated);
}

TEST_CASE("separation oracle equals the maximum over the enumerated family") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 7; ++n) {
    Board b(n);
    auto fam = enumerate_snakes(b);
    for (int trial = 0; trial < 6; ++trial) {
      WeightGrid w = random_weights(rng, n);
      Rational best = 0;
      for (const auto& s : fam.snakes) best = std::max(best, exact_weight(w, s));
      auto rep = separation_oracle(b, w);
      REQUIRE(rep.worst_sum == best);
      CHECK(exact_weight(w, snake_of_line(b, rep.worst_line)) == rep.worst_sum);
    }
  }
}

TEST_CASE("violated_snakes returns distinct snakes best first") {
  Board b(6);
  std::mt19937_64 rng(4);
  WeightGrid w = random_weights(rng, 6, 0);
  auto d = w.to_doubles();
  auto top = violated_snakes(b, d, 0.0, 25);
  REQUIRE(top.size() == 25);
  std::set<Snake> seen;
  for (std::size_t k = 0; k < top.size(); ++k) {
    CHECK(seen.insert(top[k].snake).second);
    CHECK(snake_of_line(b, top[k].line) == top[k].snake);
    if (k > 0) CHECK(top[k - 1].score >= top[k].score);
  }
  CHECK(top[0].score == doctest::Approx(to_double(separation_oracle(b, w).worst_sum)));
  CHECK(violated_snakes(b, d, 1e9, 10).empty());
}

TEST_CASE("max_cells") {
  CHECK(max_cells(Board(5), CoverMode::pierce).count == 9);
  CHECK(max_cells(Board(1), CoverMode::hit).count == 1);
  auto h2 = max_cells(Board(2), CoverMode::hit);
  CHECK(h2.count == 4);
  for (int n = 2; n <= 12; ++n) {
    auto r = max_cells(Board(n), CoverMode::pierce);
    CHECK(r.count == 2 * n - 1);
    CHECK(snake_of_line(Board(n), r.witness).size() == static_cast<std::size_t>(r.count));
    auto h = max_cells(Board(n), CoverMode::hit);
    CHECK(h.count == 3 * n - 2);
    CHECK(hit_cells_of_line(Board(n), h.witness.base).size() == static_cast<std::size_t>(h.count));
  }
}

TEST_CASE("results do not depend on the thread count") {
  Board b(7);
  std::mt19937_64 rng(23);
  WeightGrid w = random_weights(rng, 7);
  set_thread_count(1);
  auto f1 = enumerate_snakes(b);
  auto r1 = separation_oracle(b, w);
  set_thread_count(4);
  auto f4 = enumerate_snakes(b);
  auto r4 = separation_oracle(b, w);
  set_thread_count(0);
  CHECK(f1.snakes == f4.snakes);
  CHECK(f1.witnesses == f4.witnesses);
  CHECK(r1.worst_line == r4.worst_line);
  CHECK(r1.worst_sum == r4.worst_sum);
}

TEST_CASE("snake file round trip") {
  auto fam = enumerate_snakes(Board(4));
  std::string text = format_snake_file(fam);
  CHECK(text.rfind("plankline-snakes v1 n=4 count=" + std::to_string(fam.snakes.size()) + "\n", 0) == 0);
  auto back = parse_snake_file(text);
  CHECK(back.snakes == fam.snakes);
  CHECK(format_snake_file(back) == text);

  CHECK_THROWS(parse_snake_file("plankline-snakes v1 n=2 count=1\n1,2 1,1\n"));
  CHECK_THROWS(parse_snake_file("plankline-snakes v1 n=2 count=2\n1,1\n"));
  CHECK_THROWS(parse_snake_file("plankline-snakes v2 n=2 count=0\n"));
  CHECK_THROWS(parse_snake_file("plankline-snakes v1 n=2 count=1\n3,1\n"));

  TempDir dir;
  write_snake_cache(dir.path, fam);
  SnakeFamily loaded;
  REQUIRE(read_snake_cache(dir.path, 4, CoverMode::pierce, loaded));
  CHECK(loaded.snakes == fam.snakes);
  CHECK(loaded.witnesses == fam.witnesses);
  CHECK_FALSE(read_snake_cache(dir.path, 5, CoverMode::pierce, loaded));
  CHECK_FALSE(read_snake_cache(dir.path, 4, CoverMode::hit, loaded));

  // A sidecar from another generator version invalidates the cache.
  SnakeFamily stale = fam;
  stale.generator_version = "older";
  write_snake_cache(dir.path, stale);
  CHECK_FALSE(read_snake_cache(dir.path, 4, CoverMode::pierce, loaded));
  auto fresh = load_or_enumerate(Board(4), CoverMode::pierce, dir.path);
  CHECK(fresh.snakes == fam.snakes);
  CHECK(read_snake_cache(dir.path, 4, CoverMode::pierce, loaded));
}
