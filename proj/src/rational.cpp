#include "descriptor/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "descriptor/errors.hpp"

namespace descriptor {

namespace {

Rational::Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw Error(ErrorCode::ParseError, "malformed number '" + std::string(whole) + "'");
  Rational::Integer out = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::ParseError, "malformed number '" + std::string(whole) + "'");
    out = out * 10 + (c - '0');
  }
  return out;
}

Rational::Integer pow10(long e) {
  Rational::Integer out = 1;
  for (long i = 0; i < e; ++i) out *= 10;
  return out;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (exp_text.size() > 6) throw Error(ErrorCode::ParseError, "exponent too large in '" + std::string(whole) + "'");
    exponent = parse_integer(exp_text, whole).convert_to<long>();
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    digits = std::string(text.substr(0, dot)) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    digits = std::string(text);
  }
  Rational::Integer mantissa = parse_integer(digits, whole);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(Rational::Integer(mantissa * pow10(exponent)));
  return Rational(mantissa, pow10(-exponent));
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
  v_ = Impl(num, den);
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
  v_ = Impl(num, den);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite value has no rational form");
  return Rational(Impl(x));
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  std::string_view whole = text;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), whole);
    Rational den = parse_decimal(text.substr(slash + 1), whole);
    if (den.is_zero()) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }
  return parse_decimal(text, whole);
}

std::string Rational::str() const { return v_.str(); }

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "rational division by zero");
  return Rational(Rational::Impl(a.v_ / b.v_));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

}  // namespace descriptor
