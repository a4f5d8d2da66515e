#include "outerdim/realcmp.hpp"

#include <cmath>

#include <mpfr.h>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

// RAII wrapper for an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(long prec) { mpfr_init2(v_, static_cast<mpfr_prec_t>(prec)); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

void set_dyadic(mpfr_ptr out, const Dyadic& x, mpfr_rnd_t rnd) {
  mpfr_set_z(out, x.mantissa().get_mpz_t(), rnd);
  mpfr_div_2ui(out, out, x.exponent(), rnd);
}

void set_rational(mpfr_ptr out, const Rational& q, mpfr_rnd_t rnd) {
  mpfr_set_q(out, q.get_mpq_t(), rnd);
}

Dyadic mpfr_to_dyadic_grid(mpfr_ptr v, long bits, bool up) {
  mpfr_mul_2si(v, v, bits, MPFR_RNDN);  // exact scaling
  if (up)
    mpfr_ceil(v, v);
  else
    mpfr_floor(v, v);
  mpz_class m;
  mpfr_get_z(m.get_mpz_t(), v, MPFR_RNDN);
  if (bits >= 0) return Dyadic::from_parts(std::move(m), static_cast<std::uint32_t>(bits));
  return Dyadic::from_parts(std::move(m), 0).ldexp(-bits);
}

// Exact fallback: compares r2^p with (K d)^(2q) for k = p / q.
int exact_rational_compare(const Dyadic& r2, const Rational& k, const Dyadic& kd) {
  const mpz_class& p = k.get_num();
  const mpz_class& q = k.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p() || p > 256 || q > 256) return 0;
  mpq_class lhs = r2.to_rational();
  mpq_class rhs = kd.to_rational();
  mpz_class ln, ld, rn, rd;
  mpz_pow_ui(ln.get_mpz_t(), lhs.get_num_mpz_t(), p.get_ui());
  mpz_pow_ui(ld.get_mpz_t(), lhs.get_den_mpz_t(), p.get_ui());
  mpz_pow_ui(rn.get_mpz_t(), rhs.get_num_mpz_t(), 2 * q.get_ui());
  mpz_pow_ui(rd.get_mpz_t(), rhs.get_den_mpz_t(), 2 * q.get_ui());
  // ln/ld vs rn/rd
  mpz_class a = ln * rd;
  mpz_class b = rn * ld;
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::Parse, "empty rational literal");
  if (text.find('/') != std::string_view::npos) {
    Rational q;
    if (q.set_str(std::string(text), 10) != 0) fail(ErrorCode::Parse, "bad rational '" + std::string(text) + "'");
    if (q.get_den() == 0) fail(ErrorCode::Parse, "zero denominator");
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string ip(text.substr(0, dot));
    std::string fp(text.substr(dot + 1));
    bool neg = !ip.empty() && ip.front() == '-';
    if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) ip.erase(0, 1);
    for (char c : ip + fp)
      if (c < '0' || c > '9') fail(ErrorCode::Parse, "bad decimal '" + std::string(text) + "'");
    if (ip.empty() && fp.empty()) fail(ErrorCode::Parse, "bad decimal '" + std::string(text) + "'");
    mpz_class num((ip.empty() ? std::string("0") : ip) + fp, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    Rational q(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  Rational q;
  if (q.set_str(std::string(text), 10) != 0) fail(ErrorCode::Parse, "bad rational '" + std::string(text) + "'");
  return q;
}

std::string rational_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

int compare_power(const Dyadic& r2, const Rational& k, const Dyadic& K, const Dyadic& d,
                  const LogCompare& cfg) {
  if (d.sign() <= 0) fail(ErrorCode::InvalidArgument, "compare_power needs d > 0");
  if (K.sign() <= 0) fail(ErrorCode::InvalidArgument, "compare_power needs K > 0");
  if (r2.is_zero()) return -1;
  Dyadic kd = K * d;
  long prec = cfg.precision_bits;
  double tol = cfg.tolerance;
  for (int round = 0; round <= cfg.retries; ++round) {
    Mpfr lhs(prec), rhs(prec), kk(prec);
    set_dyadic(lhs.get(), r2, MPFR_RNDN);
    mpfr_log(lhs.get(), lhs.get(), MPFR_RNDN);
    set_rational(kk.get(), k, MPFR_RNDN);
    mpfr_mul(lhs.get(), lhs.get(), kk.get(), MPFR_RNDN);
    mpfr_div_2ui(lhs.get(), lhs.get(), 1, MPFR_RNDN);  // k/2 * log(r2)
    set_dyadic(rhs.get(), kd, MPFR_RNDN);
    mpfr_log(rhs.get(), rhs.get(), MPFR_RNDN);
    mpfr_sub(lhs.get(), lhs.get(), rhs.get(), MPFR_RNDN);
    double diff = mpfr_get_d(lhs.get(), MPFR_RNDN);
    if (diff > tol) return 1;
    if (diff < -tol) return -1;
    prec *= 2;
    tol /= 100.0;
  }
  return exact_rational_compare(r2, k, kd);
}

double ratio_high_precision(const Dyadic& r2, const Rational& k, const Dyadic& d, long precision_bits) {
  if (d.sign() <= 0) fail(ErrorCode::InvalidArgument, "ratio needs d > 0");
  if (r2.is_zero()) return 0.0;
  Mpfr a(precision_bits), kk(precision_bits), b(precision_bits);
  set_dyadic(a.get(), r2, MPFR_RNDN);
  mpfr_log(a.get(), a.get(), MPFR_RNDN);
  set_rational(kk.get(), k, MPFR_RNDN);
  mpfr_mul(a.get(), a.get(), kk.get(), MPFR_RNDN);
  mpfr_div_2ui(a.get(), a.get(), 1, MPFR_RNDN);
  set_dyadic(b.get(), d, MPFR_RNDN);
  mpfr_log(b.get(), b.get(), MPFR_RNDN);
  mpfr_sub(a.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_exp(a.get(), a.get(), MPFR_RNDN);
  return mpfr_get_d(a.get(), MPFR_RNDN);
}

namespace {

Dyadic pow_grid(const Dyadic& base, const Rational& exponent, long bits, bool up) {
  if (base.sign() < 0) fail(ErrorCode::InvalidArgument, "pow of negative base");
  if (base.is_zero()) {
    if (exponent <= 0) fail(ErrorCode::InvalidArgument, "0^non-positive");
    return Dyadic();
  }
  const long prec = 256 + bits;
  Mpfr b(prec), e(prec);
  mpfr_rnd_t rnd = up ? MPFR_RNDU : MPFR_RNDD;
  set_dyadic(b.get(), base, rnd);
  set_rational(e.get(), exponent, MPFR_RNDN);
  mpfr_pow(b.get(), b.get(), e.get(), rnd);
  return mpfr_to_dyadic_grid(b.get(), bits, up);
}

}  // namespace

Dyadic pow_ceil(const Dyadic& base, const Rational& exponent, long bits) {
  return pow_grid(base, exponent, bits, true);
}

Dyadic pow_floor(const Dyadic& base, const Rational& exponent, long bits) {
  return pow_grid(base, exponent, bits, false);
}

double pow_real(double base, const Rational& exponent) {
  return std::pow(base, to_double(exponent));
}

Dyadic safe_constant(double value, long bits) {
  if (!std::isfinite(value) || value < 0) fail(ErrorCode::NonFinite, "constant must be finite and non-negative");
  double inflated = value * (1.0 + 1e-12);
  Dyadic out = Dyadic::from_double(inflated).ceil_to(bits);
  return out.is_zero() ? Dyadic::pow2(-bits) : out;
}

}  // namespace outerdim
