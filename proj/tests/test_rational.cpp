#include "doctest.h"

#include "plankline/rational.hpp"

using namespace plankline;

TEST_CASE("parse and print rationals") {
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("-0.585")) == "-117/200");
  CHECK(to_string(parse_rational("1e-4")) == "1/10000");
  CHECK(to_string(parse_rational("  42 ")) == "42");
  CHECK(to_string(parse_rational("2.5E1")) == "25");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("rationalize recovers small fractions") {
  CHECK(rationalize(1.0 / 3.0, 1000) == make_rational(1, 3));
  CHECK(rationalize(0.7205, 100000) == make_rational(1441, 2000));
  CHECK(rationalize(-2.0, 10) == Rational(-2));
  CHECK(rationalize(1e-12, 1000) == Rational(0));
}

TEST_CASE("decimal rendering is fixed-width and rounds half away from zero") {
  CHECK(to_decimal(make_rational(1, 3), 6) == "0.333333");
  CHECK(to_decimal(make_rational(2, 3), 3) == "0.667");
  CHECK(to_decimal(make_rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal(Rational(5), 2) == "5.00");
  CHECK(to_decimal(make_rational(-1, 1000), 2) == "0.00");
}
