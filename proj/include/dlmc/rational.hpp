#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "dlmc/error.hpp"

namespace dlmc {

/// Exact non-negative-denominator rational kept in lowest terms.
///
/// Intermediate products use 128-bit arithmetic; a result that does not fit
/// back into 64 bits raises `dlmc::error` instead of wrapping.
class rational {
public:
  constexpr rational() = default;
  rational(std::int64_t num) : num_(num), den_(1) {} // NOLINT: implicit from integer
  rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  /// num / 2^log2_den
  static rational dyadic(std::int64_t num, unsigned log2_den) {
    if (log2_den > 62) {
      throw error("dyadic denominator 2^" + std::to_string(log2_den) + " exceeds 64-bit range");
    }
    return rational(num, std::int64_t{1} << log2_den);
  }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }

  bool is_dyadic() const noexcept { return (den_ & (den_ - 1)) == 0; }

  /// Exponent k with denominator == 2^k; -1 when not dyadic.
  int log2_denominator() const noexcept {
    if (!is_dyadic()) return -1;
    int k = 0;
    for (std::int64_t d = den_; d > 1; d >>= 1) ++k;
    return k;
  }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend rational operator+(const rational& a, const rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend rational operator-(const rational& a, const rational& b) { return a + rational(-b.num_, b.den_); }
  friend rational operator*(const rational& a, const rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend rational operator/(const rational& a, const rational& b) {
    if (b.num_ == 0) throw error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  rational& operator+=(const rational& o) { return *this = *this + o; }
  rational& operator-=(const rational& o) { return *this = *this - o; }

  friend bool operator==(const rational&, const rational&) = default;
  friend std::strong_ordering operator<=>(const rational& a, const rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend rational abs(const rational& a) { return rational(a.num_ < 0 ? -a.num_ : a.num_, a.den_); }

  friend std::ostream& operator<<(std::ostream& os, const rational& r) { return os << r.str(); }

private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static rational from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) throw error("rational arithmetic overflow");
    rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

} // namespace dlmc
