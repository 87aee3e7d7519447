#include "doctest.h"
#include "moran/exact.hpp"
#include "moran/field.hpp"
#include "moran/simulate.hpp"

using namespace moran;

TEST_CASE("binomials and parsing") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(13, 10) == 286);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));

  CHECK(parse_rational("3/14") == rat(3, 14));
  CHECK(parse_rational("0.25") == rat(1, 4));
  CHECK(parse_rational("-1.5e-2") == rat(-3, 200));
  CHECK(parse_rational("7") == rat(7));
  CHECK_THROWS_AS(parse_rational("abc"), argument_error);
  CHECK_THROWS_AS(parse_rational("1/0"), argument_error);

  CHECK(rational_from_double(0.5) == rat(1, 2));
  CHECK(rational_from_double(0.1) != rat(1, 10));  // dyadic expansion is exact
  CHECK(to_string(rat(-3, 7)) == "-3/7");
}

TEST_CASE("rising and falling factorials") {
  CHECK(rising(rat(0), 0) == rat(1));
  CHECK(falling(rat(0), 0) == rat(1));
  CHECK(falling(rat(3), 2) == rat(6));
  CHECK(rising(rat(1, 2), 3) == rat(1, 2) * rat(3, 2) * rat(5, 2));
  CHECK(rising(2.0, 3) == doctest::Approx(24.0));

  // cross identity x_(n) = (x+n-1)_[n] on random rationals
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Rational x = rat(static_cast<long long>(rng.next() % 41) - 20,
                     1 + static_cast<long long>(rng.next() % 9));
    int n = static_cast<int>(rng.next() % 11);
    CHECK(rising(x, n) == falling(x + rat(n - 1), n));
  }
}
