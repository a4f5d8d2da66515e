#include "outerdim/dyadic.hpp"

#include <cmath>
#include <limits>

#include <mpfr.h>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

mpz_class pow2z(unsigned long power) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, power);
  return out;
}

// Brings a and b to the common exponent max(ea, eb).
void align(const Dyadic& a, const Dyadic& b, mpz_class& ma, mpz_class& mb,
           std::uint32_t& e) {
  e = std::max(a.exponent(), b.exponent());
  ma = a.mantissa();
  mb = b.mantissa();
  if (a.exponent() < e) mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), e - a.exponent());
  if (b.exponent() < e) mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), e - b.exponent());
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

mpz_class parse_integer(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) fail(ErrorCode::Parse, "not an integer: '" + std::string(text) + "'");
  mpz_class out;
  out.set_str(std::string(text.front() == '+' ? text.substr(1) : text), 10);
  return out;
}

}  // namespace

Dyadic Dyadic::from_parts(mpz_class mantissa, std::uint32_t exponent) {
  Dyadic out;
  out.mantissa_ = std::move(mantissa);
  out.exponent_ = exponent;
  out.normalize();
  return out;
}

Dyadic Dyadic::pow2(long power) {
  if (power >= 0) return from_parts(pow2z(static_cast<unsigned long>(power)), 0);
  return from_parts(mpz_class(1), static_cast<std::uint32_t>(-power));
}

Dyadic Dyadic::from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::NonFinite, "non-finite value cannot be made dyadic");
  if (value == 0.0) return Dyadic();
  int exp2 = 0;
  double frac = std::frexp(value, &exp2);  // value = frac * 2^exp2, |frac| in [0.5, 1)
  auto scaled = static_cast<std::int64_t>(std::ldexp(frac, 53));
  mpz_class m(static_cast<long>(scaled));
  long e = 53 - exp2;  // value = scaled / 2^e
  if (e <= 0) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(-e));
    return from_parts(std::move(m), 0);
  }
  return from_parts(std::move(m), static_cast<std::uint32_t>(e));
}

Dyadic Dyadic::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::Parse, "empty dyadic literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    std::string_view den = text.substr(slash + 1);
    if (den.size() > 2 && den.substr(0, 2) == "2^") {
      std::string_view e = den.substr(2);
      if (!all_digits(e)) fail(ErrorCode::Parse, "bad exponent in '" + std::string(text) + "'");
      return from_parts(std::move(num), static_cast<std::uint32_t>(std::stoul(std::string(e))));
    }
    mpz_class d = parse_integer(den);
    if (d <= 0) fail(ErrorCode::Parse, "denominator must be positive: '" + std::string(text) + "'");
    unsigned long bits = mpz_scan1(d.get_mpz_t(), 0);
    if (d != pow2z(bits))
      fail(ErrorCode::Parse, "denominator is not a power of two: '" + std::string(text) + "'");
    return from_parts(std::move(num), static_cast<std::uint32_t>(bits));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip.front() == '-';
    if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) ip.remove_prefix(1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      fail(ErrorCode::Parse, "bad decimal literal '" + std::string(text) + "'");
    mpq_class q(mpz_class(std::string(ip.empty() ? "0" : ip) + std::string(fp), 10), 1);
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, fp.size());
    q /= ten;
    q.canonicalize();
    if (neg) q = -q;
    const mpz_class& den = q.get_den();
    unsigned long bits = mpz_scan1(den.get_mpz_t(), 0);
    if (den != pow2z(bits))
      fail(ErrorCode::Parse, "decimal '" + std::string(text) + "' is not a dyadic rational");
    return from_parts(q.get_num(), static_cast<std::uint32_t>(bits));
  }
  return from_parts(parse_integer(text), 0);
}

void Dyadic::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  if (exponent_ == 0) return;
  unsigned long tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  unsigned long shift = std::min<unsigned long>(tz, exponent_);
  if (shift > 0) {
    mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), shift);
    exponent_ -= static_cast<std::uint32_t>(shift);
  }
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  mpfr_t r;
  mpfr_init2(r, static_cast<mpfr_prec_t>(std::max<size_t>(64, mpz_sizeinbase(mantissa_.get_mpz_t(), 2) + 1)));
  mpfr_set_z(r, mantissa_.get_mpz_t(), MPFR_RNDN);
  mpfr_div_2ui(r, r, exponent_, MPFR_RNDN);
  double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clear(r);
  return out;
}

std::string Dyadic::str() const {
  return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
}

Dyadic Dyadic::operator-() const {
  Dyadic out = *this;
  out.mantissa_ = -out.mantissa_;
  return out;
}

Dyadic Dyadic::abs() const { return sign() < 0 ? -*this : *this; }

Dyadic Dyadic::ldexp(long power) const {
  if (is_zero()) return *this;
  if (power >= 0) {
    auto p = static_cast<unsigned long>(power);
    if (p <= exponent_) return from_parts(mantissa_, exponent_ - static_cast<std::uint32_t>(p));
    mpz_class m = mantissa_;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), p - exponent_);
    return from_parts(std::move(m), 0);
  }
  return from_parts(mantissa_, exponent_ + static_cast<std::uint32_t>(-power));
}

mpz_class Dyadic::floor_scaled(long bits) const {
  // floor(mantissa * 2^(bits - exponent))
  long shift = bits - static_cast<long>(exponent_);
  mpz_class out = mantissa_;
  if (shift >= 0)
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<unsigned long>(shift));
  else
    mpz_fdiv_q_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<unsigned long>(-shift));
  return out;
}

Dyadic Dyadic::floor_to(long bits) const {
  mpz_class m = floor_scaled(bits);
  if (bits >= 0) return from_parts(std::move(m), static_cast<std::uint32_t>(bits));
  mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(-bits));
  return from_parts(std::move(m), 0);
}

Dyadic Dyadic::ceil_to(long bits) const {
  Dyadic f = floor_to(bits);
  if (f == *this) return f;
  return f + pow2(-bits);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  mpz_class ma, mb;
  std::uint32_t e = 0;
  align(a, b, ma, mb, e);
  return Dyadic::from_parts(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  mpz_class ma, mb;
  std::uint32_t e = 0;
  align(a, b, ma, mb, e);
  return Dyadic::from_parts(ma - mb, e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic::from_parts(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  mpz_class ma, mb;
  std::uint32_t e = 0;
  align(a, b, ma, mb, e);
  int c = cmp(ma, mb);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

mpq_class Dyadic::to_rational() const {
  mpq_class q(mantissa_, pow2z(exponent_));
  q.canonicalize();
  return q;
}

Dyadic min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
Dyadic max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

Dyadic exact_div(const Dyadic& a, const Dyadic& b) {
  if (b.is_zero()) fail(ErrorCode::DegenerateInterval, "division by zero length");
  // b = mb / 2^eb with mb = odd * 2^t
  mpz_class mb = b.mantissa();
  unsigned long t = mpz_scan1(mb.get_mpz_t(), 0);
  mpz_class odd;
  mpz_fdiv_q_2exp(odd.get_mpz_t(), mb.get_mpz_t(), t);
  if (!mpz_divisible_p(a.mantissa().get_mpz_t(), odd.get_mpz_t()))
    fail(ErrorCode::NonDyadicScale, a.str() + " / " + b.str() + " is not dyadic");
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.mantissa().get_mpz_t(), odd.get_mpz_t());
  // a/b = q * 2^(eb - ea - t)
  long power = static_cast<long>(b.exponent()) - static_cast<long>(a.exponent()) - static_cast<long>(t);
  return Dyadic::from_parts(std::move(q), 0).ldexp(power);
}

Dyadic squared_distance(const std::vector<Dyadic>& a, const std::vector<Dyadic>& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "dimension mismatch in distance");
  Dyadic sum;
  for (size_t i = 0; i < a.size(); ++i) {
    Dyadic d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

DyadicInterval::DyadicInterval(Dyadic lo_, Dyadic hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) fail(ErrorCode::InvalidArgument, "interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
}

}  // namespace outerdim
