#include "doctest.h"
#include "tsskp/rational.hpp"

using namespace tsskp;

TEST_CASE("round_half_away rounds halves away from zero") {
  CHECK(round_half_away(Rat(1, 2)) == 1);
  CHECK(round_half_away(Rat(-1, 2)) == -1);
  CHECK(round_half_away(Rat(3, 2)) == 2);
  CHECK(round_half_away(Rat(7, 5)) == 1);
  CHECK(round_half_away(Rat(8, 5)) == 2);
  CHECK(round_half_away(Rat(4)) == 4);
  CHECK(round_half_away(Rat(0)) == 0);
  CHECK(round_half_away(Rat(-7, 5)) == -1);
  CHECK(round_half_away(Rat(-8, 5)) == -2);
}

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("7/10") == Rat(7, 10));
  CHECK(parse_rational("0.7") == Rat(7, 10));
  CHECK(parse_rational(".5") == Rat(1, 2));
  CHECK(parse_rational("123") == Rat(123));
  CHECK(parse_rational("-0.25") == Rat(-1, 4));
  CHECK(parse_rational("+3/4") == Rat(3, 4));
  CHECK(parse_rational("1.040") == Rat(26, 25));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
}

TEST_CASE("formatting is exact and stable") {
  CHECK(rational_string(Rat(26, 25)) == "26/25");
  CHECK(rational_string(Rat(4)) == "4");
  CHECK(decimal_string(Rat(26, 25), 9) == "1.040000000");
  CHECK(decimal_string(Rat(340, 7), 1) == "48.6");
  CHECK(decimal_string(Rat(0), 1) == "0.0");
  CHECK(decimal_string(Rat(-1, 8), 2) == "-0.13");
  CHECK(compact_string(Rat(26, 25)) == "1.04");
  CHECK(compact_string(Rat(1, 3)) == "1/3");
  CHECK(compact_string(Rat(5)) == "5");
  CHECK(compact_string(Rat(1, 10)) == "0.1");
}

TEST_CASE("doubles convert exactly") {
  CHECK(rat_from_double(0.5) == Rat(1, 2));
  CHECK(rat_from_double(3.0) == Rat(3));
  const Rat r = rat_from_double(0.1);
  CHECK(to_double(r) == 0.1);  // exact representation of the double
  CHECK(r != Rat(1, 10));      // which is not one tenth
}

TEST_CASE("parse and print round-trip") {
  for (const Rat& r : {Rat(26, 25), Rat(-7, 3), Rat(0), Rat(1000000), Rat(1, 1000000)}) {
    CHECK(parse_rational(rational_string(r)) == r);
  }
}
