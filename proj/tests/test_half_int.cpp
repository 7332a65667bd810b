#include <catch2/catch_amalgamated.hpp>

#include "matvar/half_int.hpp"

using namespace matvar;

TEST_CASE("half-integer arithmetic is exact and closed") {
    const HalfInt a = HalfInt::half(3);   // 3/2
    const HalfInt b = HalfInt(2);         // 2
    CHECK((a + b).twice() == 7);
    CHECK((a - b).twice() == -1);
    CHECK((-a).twice() == -3);
    CHECK(a.value() == 1.5);
    CHECK(b.is_integer());
    CHECK_FALSE(a.is_integer());
}

TEST_CASE("half-integer ordering is total") {
    CHECK(HalfInt::half(1) < HalfInt(1));
    CHECK(HalfInt(-1) < HalfInt::half(-1));
    CHECK(HalfInt::half(4) == HalfInt(2));
}

TEST_CASE("half-integers print as fractions, never decimals") {
    CHECK(HalfInt::half(3).str() == "3/2");
    CHECK(HalfInt::half(-1).str() == "-1/2");
    CHECK(HalfInt(2).str() == "2");
    CHECK(HalfInt(0).str() == "0");
}

TEST_CASE("rationals normalize through gcd and sign") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK((Rational(1, 2) + Rational(1, 4)) == Rational(3, 4));
    CHECK((Rational(3, 4) * Rational(2, 3)) == Rational(1, 2));
    CHECK(Rational(HalfInt::half(5)) == Rational(5, 2));
    CHECK(Rational(7, 2).str() == "7/2");
    CHECK(Rational(3).str() == "3");
    CHECK(Rational(1, 4) < Rational(1, 2));
}
