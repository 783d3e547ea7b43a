#include <doctest.h>

#include "cfrk/rational.hpp"

using cfrk::Rational;

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(7) - Rational(9, 2)) == Rational(5, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK((Rational(1, 2) / Rational(1, 8)) == Rational(4));
}

TEST_CASE("rational comparisons are exact") {
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(Rational(1, 3) > Rational(33, 100));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(10, 5).is_integer());
  CHECK(Rational(0).is_zero());
}

TEST_CASE("rational string round-trip") {
  CHECK(Rational(7).str() == "7");
  CHECK(Rational(-3, 4).str() == "-3/4");
  CHECK(*Rational::parse("7") == Rational(7));
  CHECK(*Rational::parse(" -3/4 ") == Rational(-3, 4));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("x"));
  CHECK(!Rational::parse(""));
}

TEST_CASE("rational ceil") {
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(6, 2).ceil() == 3);
  CHECK(Rational(0).ceil() == 0);
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}
