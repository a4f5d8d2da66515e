#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

#include "outerdim/dyadic.hpp"

namespace outerdim {

using Rational = mpq_class;

// "3/2", "2", "-1", "1.5", "1.01" (decimals are read exactly).
Rational parse_rational(std::string_view text);
std::string rational_str(const Rational& q);
double to_double(const Rational& q);

// Log-space comparison settings. A comparison whose log difference is within
// `tolerance` is retried with doubled precision and tolerance / 100, up to
// `retries` times; a remaining near-tie falls back to an exact integer
// comparison when the exponent is a small rational, and otherwise counts as
// equality.
struct LogCompare {
  long precision_bits = 128;
  double tolerance = 1e-12;
  int retries = 3;
};

// Sign of |v|^k - K*d, where r2 = |v|^2 exactly and d > 0.
int compare_power(const Dyadic& r2, const Rational& k, const Dyadic& K, const Dyadic& d,
                  const LogCompare& cfg = {});

// |v|^k / d evaluated in high precision (r2 = |v|^2, d > 0).
double ratio_high_precision(const Dyadic& r2, const Rational& k, const Dyadic& d,
                            long precision_bits = 256);

// base^exponent rounded up (resp. down) onto the 2^-bits grid. base >= 0.
Dyadic pow_ceil(const Dyadic& base, const Rational& exponent, long bits);
Dyadic pow_floor(const Dyadic& base, const Rational& exponent, long bits);
double pow_real(double base, const Rational& exponent);

// Smallest dyadic on the 2^-bits grid that is >= value * (1 + 1e-12).
// Turns an empirical worst ratio into a constant usable downstream.
Dyadic safe_constant(double value, long bits = 40);

}  // namespace outerdim
