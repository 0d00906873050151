#include <doctest.h>

#include "descriptor/errors.hpp"
#include "descriptor/linalg.hpp"

using descriptor::Error;
using descriptor::ErrorCode;
using descriptor::Rational;

TEST_CASE("rational parsing reads decimals and fractions exactly") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-6/8") == Rational(-3, 4));
  CHECK(Rational::parse("0.1") == Rational(1, 10));
  CHECK(Rational::parse("-1.25e-3") == Rational(-1, 800));
  CHECK(Rational::parse("2E2") == Rational(200));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("rational arithmetic and ordering") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(a > b);
  CHECK((-a).sign() == -1);
  CHECK(abs(-a) == a);
  CHECK(Rational(4, 2).is_integer());
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(-5).str() == "-5");
  CHECK_THROWS_AS(a / Rational(0), Error);
}

TEST_CASE("from_double is exact for dyadic values") {
  CHECK(Rational::from_double(0.375) == Rational(3, 8));
  CHECK(Rational::from_double(-2.0) == Rational(-2));
  // 0.1 as a double is not 1/10; its exact value has denominator 2^55.
  const Rational tenth = Rational::from_double(0.1);
  CHECK(tenth != Rational(1, 10));
  CHECK(tenth.to_double() == 0.1);
}

TEST_CASE("eigen matrices over rationals multiply and invert exactly") {
  descriptor::RationalMatrix a(2, 2);
  a << Rational(1), Rational(2), Rational(3), Rational(4);
  const auto inv = descriptor::inverse<Rational>(a);
  const descriptor::RationalMatrix prod = a * inv;
  CHECK(prod == descriptor::RationalMatrix::Identity(2, 2));
  CHECK(inv(0, 0) == Rational(-2));
  CHECK(inv(1, 0) == Rational(3, 2));
  CHECK(descriptor::determinant<Rational>(a) == Rational(-2));
}
