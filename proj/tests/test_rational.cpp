#include <cmath>

#include <doctest.h>

#include "contracts/errors.hpp"
#include "contracts/rational.hpp"

using namespace contracts;

TEST_CASE("make_rat canonicalizes") {
  CHECK(make_rat(2, 4) == Rat(1, 2));
  CHECK(make_rat(-2, 4) == Rat(-1, 2));
  CHECK(make_rat(2, -4) == Rat(-1, 2));
  CHECK(make_rat(0, 7) == Rat(0));
  CHECK_THROWS_AS(make_rat(1, 0), InputError);
}

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("1/3") == Rat(1, 3));
  CHECK(parse_rational("-4/6") == Rat(-2, 3));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational("-12") == Rat(-12));
  CHECK(parse_rational("0.25") == Rat(1, 4));
  CHECK(parse_rational("0.1") == Rat(1, 10));  // exact, not the nearest double
  CHECK(parse_rational("-3.5") == Rat(-7, 2));
  CHECK(parse_rational("1e-3") == Rat(1, 1000));
  CHECK(parse_rational("2.5e+2") == Rat(250));
  CHECK(parse_rational("2.5E2") == Rat(250));
  CHECK(parse_rational("1.25e-1") == Rat(1, 8));
  CHECK(parse_rational("+3/9") == Rat(1, 3));
}

TEST_CASE("parse_rational rejects junk") {
  for (const char* bad : {"", " ", "1/0", "1//2", "a", "1.2.3", "1e", "0x10", "1 /2", "2/",
                          "--3", "1e+", ".e3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), InputError);
  }
}

TEST_CASE("fraction rendering") {
  CHECK(to_fraction_string(Rat(1, 3)) == "1/3");
  CHECK(to_fraction_string(make_rat(-5, 10)) == "-1/2");
  CHECK(to_fraction_string(Rat(4)) == "4");
  CHECK(to_fraction_string(Rat(0)) == "0");
}

TEST_CASE("decimal rendering rounds to significant digits") {
  CHECK(to_decimal_string(Rat(1, 3)) == "0.333333333333");
  CHECK(to_decimal_string(Rat(13, 9)) == "1.44444444444");
  CHECK(to_decimal_string(Rat(1, 2)) == "0.5");
  CHECK(to_decimal_string(Rat(0)) == "0");
  CHECK(to_decimal_string(Rat(1, 3), 3) == "0.333");
}

TEST_CASE("round trip through strings") {
  for (long num = -7; num <= 7; ++num) {
    for (long den = 1; den <= 9; ++den) {
      const Rat value = make_rat(num, den);
      CHECK(parse_rational(to_fraction_string(value)) == value);
    }
  }
}

TEST_CASE("rat_from_double is exact") {
  CHECK(rat_from_double(0.5) == Rat(1, 2));
  CHECK(rat_from_double(-0.75) == Rat(-3, 4));
  CHECK(rat_from_double(3.0) == Rat(3));
  const Rat tenth = rat_from_double(0.1);
  CHECK(tenth != Rat(1, 10));  // 0.1 is not representable in binary
  CHECK(tenth.get_d() == 0.1);
}

TEST_CASE("rat_log snapshots the double logarithm") {
  const Rat two = rat_log(2);
  CHECK(two == rat_from_double(std::log(2.0)));
  CHECK(two == rat_log(2));  // deterministic
  CHECK(two > Rat(693, 1000));
  CHECK(two < Rat(694, 1000));
  CHECK(rat_log(3) > rat_log(2));
  CHECK_THROWS_AS(rat_log(1), InputError);
  CHECK_THROWS_AS(rat_log(0), InputError);
}
