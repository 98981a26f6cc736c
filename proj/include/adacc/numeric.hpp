#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace adacc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Input/config problems: bad model specs, arity mismatches, unparsable files.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problems arising during a computation: empty shells, memory caps, degenerate windows.
struct computation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Natural log of a positive big integer. Relative error < 2^-50: the top 64 bits
// carry the mantissa, the discarded tail perturbs it by < 2^-63.
inline double log_big(const BigInt& n) {
  if (n <= 0) throw computation_error("log_big: argument must be positive");
  const std::size_t bits = boost::multiprecision::msb(n) + 1;
  if (bits <= 900) return std::log(n.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw validation_error("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double m = std::frexp(x, &exp);           // x = m * 2^exp, |m| in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));  // integer, |mant| < 2^53
  const int e2 = exp - 53;
  Rational r(mant);
  if (e2 >= 0) {
    r *= Rational(BigInt(1) << e2);
  } else {
    r /= Rational(BigInt(1) << -e2);
  }
  return r;
}

// Parses "123", "-0.25", "1/3" exactly. Decimal strings become exact base-10 rationals.
inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw validation_error("empty rational literal");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw validation_error("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  long frac_digits = -1;
  bool any = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.') {
      if (frac_digits >= 0) throw validation_error("malformed rational '" + s + "'");
      frac_digits = 0;
    } else if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (frac_digits >= 0) ++frac_digits;
      any = true;
    } else {
      throw validation_error("malformed rational '" + s + "'");
    }
  }
  if (!any) throw validation_error("malformed rational '" + s + "'");
  Rational r(digits);
  if (frac_digits > 0) {
    BigInt den = 1;
    for (long k = 0; k < frac_digits; ++k) den *= 10;
    r /= Rational(den);
  }
  return neg ? -r : r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// floor/ceil on rationals; *_strict variants give the largest integer < t / smallest > t.
inline BigInt rfloor(const Rational& t) {
  BigInt q = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  if (Rational(q) > t) --q;
  return q;
}

inline BigInt rceil(const Rational& t) {
  BigInt q = rfloor(t);
  if (Rational(q) < t) ++q;
  return q;
}

inline BigInt rfloor_strict(const Rational& t) {
  BigInt q = rfloor(t);
  if (Rational(q) == t) --q;
  return q;
}

inline BigInt rceil_strict(const Rational& t) {
  BigInt q = rceil(t);
  if (Rational(q) == t) ++q;
  return q;
}

inline bool is_integer(const Rational& t) { return boost::multiprecision::denominator(t) == 1; }

// 12 significant digits, fixed formatting rule shared by every CSV/report writer.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_rational(const Rational& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  if (boost::multiprecision::denominator(r) != 1)
    s += "/" + boost::multiprecision::denominator(r).str();
  return s;
}

}  // namespace adacc
