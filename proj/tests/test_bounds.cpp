#include "doctest.h"

#include "plankline/bounds.hpp"

using namespace plankline;

TEST_CASE("lp_dual_bound small boards") {
  auto r1 = lp_dual_bound(Board(1));
  CHECK(r1.certificate.bound == 1);
  auto r2 = lp_dual_bound(Board(2));
  CHECK(r2.certificate.bound == make_rational(4, 3));
  CHECK(r2.converged);
  for (int n = 1; n <= 8; ++n) {
    auto r = lp_dual_bound(Board(n));
    validate_certificate(r.certificate);
    CHECK(r.converged);
    for (std::size_t k = 1; k < r.objectives.size(); ++k) CHECK(r.objectives[k] <= r.objectives[k - 1] + 1e-9);
    // The certified bound can lose only rounding error against the float optimum.
    CHECK(to_double(r.certificate.bound) == doctest::Approx(r.objectives.back()).epsilon(1e-6));
    if (n >= 4) CHECK(to_double(r.certificate.bound) >= 0.5 * n);
  }
}

TEST_CASE("non-converged runs still certify") {
  DualBoundOptions opt;
  opt.max_rounds = 1;
  auto r = lp_dual_bound(Board(6), opt);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.certificate.converged);
  validate_certificate(r.certificate);
  CHECK(r.certificate.bound > 0);
}

TEST_CASE("cover_search examples") {
  auto f = cover_search(Board(2), CoverMode::pierce, 2);
  CHECK(f.feasible);
  CHECK(f.witness.size() == 2);
  CHECK_FALSE(cover_search(Board(2), CoverMode::pierce, 1).feasible);
  CHECK_FALSE(cover_search(Board(6), CoverMode::pierce, 4).feasible);
  CHECK(cover_search(Board(1), CoverMode::hit, 1).feasible);
  CHECK_FALSE(cover_search(Board(3), CoverMode::pierce, 0).feasible);
  CHECK_THROWS(cover_search(Board(3), CoverMode::pierce, 4));
}

TEST_CASE("exact_min_cover values") {
  CHECK(exact_min_cover(Board(2), CoverMode::hit).value == 1);
  CHECK(exact_min_cover(Board(3), CoverMode::pierce).value == 2);
  auto p5 = exact_min_cover(Board(5), CoverMode::pierce);
  CHECK(p5.value == 4);
  validate_certificate(certify_cover(Board(5), CoverMode::pierce, p5.witness, "test"));
  for (int n = 1; n <= 5; ++n) CHECK(exact_min_cover(Board(n), CoverMode::hit).value == (n + 1) / 2);
  CHECK_THROWS_AS(exact_min_cover(Board(8), CoverMode::pierce), GuardError);
}

TEST_CASE("weak duality against exact covers") {
  for (int n = 1; n <= 5; ++n) {
    auto m = lp_dual_bound(Board(n)).certificate.bound;
    auto p = exact_min_cover(Board(n), CoverMode::pierce).value;
    CHECK(m <= p);
    if (n >= 3) CHECK(p <= n - 1);
  }
}
