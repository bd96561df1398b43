#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "depthgrid/error.hpp"

namespace depthgrid {

__extension__ using wide_int = __int128;

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator, so equality is
/// structural. Arithmetic goes through 128-bit intermediates and throws
/// NumericError if the reduced result does not fit in 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by intent
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "n/d", or "n" when the denominator is 1.
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "n", "n/d", "-n/d" (whitespace not allowed).
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
      if (s.empty()) throw PreconditionError("invalid rational: '" + std::string(text) + "'");
      std::size_t i = 0;
      bool neg = false;
      if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
      }
      if (i == s.size()) throw PreconditionError("invalid rational: '" + std::string(text) + "'");
      wide_int v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
          throw PreconditionError("invalid rational: '" + std::string(text) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > INT64_MAX) throw NumericError("rational literal overflows: " + std::string(text));
      }
      return static_cast<std::int64_t>(neg ? -v : v);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return reduce(static_cast<wide_int>(a.num_) * b.den_ + static_cast<wide_int>(b.num_) * a.den_,
                  static_cast<wide_int>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return reduce(static_cast<wide_int>(a.num_) * b.den_ - static_cast<wide_int>(b.num_) * a.den_,
                  static_cast<wide_int>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce(static_cast<wide_int>(a.num_) * b.num_, static_cast<wide_int>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational division by zero");
    return reduce(static_cast<wide_int>(a.num_) * b.den_, static_cast<wide_int>(a.den_) * b.num_);
  }
  Rational operator-() const { return reduce(-static_cast<wide_int>(num_), den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<wide_int>(a.num_) * b.den_ <=> static_cast<wide_int>(b.num_) * a.den_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw NumericError("rational with zero denominator");
    return reduce(n, d);
  }

  static wide_int gcd128(wide_int a, wide_int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      wide_int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational reduce(wide_int n, wide_int d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    wide_int g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
      throw NumericError("rational arithmetic overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace depthgrid
