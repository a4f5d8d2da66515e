#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace outerdim {

// Exact binary rational mantissa / 2^exponent with an arbitrary-precision
// mantissa. Canonical form: the mantissa is odd, or the value is zero and the
// exponent is 0. Values never carry a negative exponent; integers with
// factors of two are stored with exponent 0 and an even mantissa.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : mantissa_(value) {}  // NOLINT: implicit from integers
  Dyadic(int value) : mantissa_(value) {}   // NOLINT

  static Dyadic from_parts(mpz_class mantissa, std::uint32_t exponent);
  // 2^power, power may be negative.
  static Dyadic pow2(long power);
  // Every finite double is a dyadic rational; the conversion is exact.
  static Dyadic from_double(double value);
  // Accepts "m/2^e", "m/d" with d a power of two, integers, and finite
  // decimals whose value is dyadic ("0.375").
  static Dyadic parse(std::string_view text);

  const mpz_class& mantissa() const noexcept { return mantissa_; }
  std::uint32_t exponent() const noexcept { return exponent_; }

  int sign() const noexcept { return sgn(mantissa_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const noexcept { return exponent_ == 0; }

  // Nearest double (round to nearest); exact when the mantissa fits 53 bits.
  double to_double() const;
  // Canonical text form "m/2^e".
  std::string str() const;

  Dyadic operator-() const;
  Dyadic abs() const;
  // this * 2^power, exact.
  Dyadic ldexp(long power) const;

  // Largest multiple of 2^-bits that is <= this (resp. smallest >=).
  Dyadic floor_to(long bits) const;
  Dyadic ceil_to(long bits) const;
  // floor(this * 2^bits) as an integer.
  mpz_class floor_scaled(long bits) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& other) { return *this = *this + other; }
  Dyadic& operator-=(const Dyadic& other) { return *this = *this - other; }
  Dyadic& operator*=(const Dyadic& other) { return *this = *this * other; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  mpq_class to_rational() const;

 private:
  void normalize();

  mpz_class mantissa_{0};
  std::uint32_t exponent_ = 0;
};

Dyadic min(const Dyadic& a, const Dyadic& b);
Dyadic max(const Dyadic& a, const Dyadic& b);

// a / b when the quotient is dyadic; throws NonDyadicScale otherwise.
Dyadic exact_div(const Dyadic& a, const Dyadic& b);

// Sum of squares of component differences, exact.
Dyadic squared_distance(const std::vector<Dyadic>& a, const std::vector<Dyadic>& b);

// Closed interval [lo, hi] with lo <= hi.
struct DyadicInterval {
  Dyadic lo;
  Dyadic hi;

  DyadicInterval() = default;
  DyadicInterval(Dyadic lo_, Dyadic hi_);

  Dyadic length() const { return hi - lo; }
  bool contains(const Dyadic& x) const { return lo <= x && x <= hi; }
  bool degenerate() const { return lo == hi; }
  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

using Point = std::vector<Dyadic>;

}  // namespace outerdim
