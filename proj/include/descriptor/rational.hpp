#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace descriptor {

/// Exact rational scalar used by the exact-mode code paths.
///
/// A thin value wrapper around boost's cpp_rational. The wrapper exists so
/// that Eigen sees a plain scalar without boost's expression-template
/// overloads, which do not compose with Eigen's own operator templates.
class Rational {
 public:
  using Impl = boost::multiprecision::cpp_rational;
  using Integer = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(int n) : v_(n) {}                // NOLINT(implicit)
  Rational(long n) : v_(n) {}               // NOLINT(implicit)
  Rational(long long n) : v_(n) {}          // NOLINT(implicit)
  Rational(long long num, long long den);
  explicit Rational(Impl v) : v_(std::move(v)) {}
  explicit Rational(const Integer& n) : v_(n) {}
  Rational(const Integer& num, const Integer& den);

  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double x);

  /// Parses "p/q", integers, and decimal literals with optional exponent
  /// ("-1.25e-3"). Decimals are read exactly, so "0.1" is 1/10.
  static Rational parse(std::string_view text);

  double to_double() const { return v_.convert_to<double>(); }
  std::string str() const;

  Integer numerator() const { return boost::multiprecision::numerator(v_); }
  Integer denominator() const { return boost::multiprecision::denominator(v_); }
  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }
  const Impl& impl() const { return v_; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Impl(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Impl(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Impl(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(Impl(-v_)); }
  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ == b.v_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  Impl v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace descriptor

namespace Eigen {
template <>
struct NumTraits<descriptor::Rational> : GenericNumTraits<descriptor::Rational> {
  using Real = descriptor::Rational;
  using NonInteger = descriptor::Rational;
  using Nested = descriptor::Rational;
  using Literal = descriptor::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 100
  };
  static Real epsilon() { return 0; }
  static Real dummy_precision() { return 0; }
  static int digits10() { return 0; }
};
}  // namespace Eigen
