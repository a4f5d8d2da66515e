#include "outerdim/cantor.hpp"

#include <algorithm>
#include <cmath>

#include <mpfr.h>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

long base_log2(const DyadicInterval& cell) {
  Dyadic len = cell.length();
  if (len.sign() <= 0) fail(ErrorCode::DegenerateInterval, "base cell must have positive length");
  const mpz_class& m = len.mantissa();
  if (mpz_popcount(m.get_mpz_t()) != 1) fail(ErrorCode::InvalidArgument, "base cell length must be a power of two");
  return static_cast<long>(mpz_scan1(m.get_mpz_t(), 0)) - static_cast<long>(len.exponent());
}

long length_bits(const Rational& k, int s) {
  return static_cast<long>(std::ceil(2.0 * to_double(k) * s)) + 8;
}

}  // namespace

void CantorSpec::validate() const {
  if (k <= 1) fail(ErrorCode::InvalidK, "Cantor exponent must exceed 1");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be at least 1");
  if (depth > 40) fail(ErrorCode::InvalidArgument, "depth exceeds the hard cap 40");
  base_log2(base_cell);
}

std::string CantorInterval::address() const {
  std::string out;
  for (auto d : digits) out += static_cast<char>('0' + d);
  return out;
}

bool exact_length(const Rational& k, int s) {
  Rational ks = k * s;
  return ks.get_den() == 1;
}

Dyadic stage_length(const Rational& k, int s) {
  Rational ks = k * s;
  if (ks.get_den() == 1) return Dyadic::pow2(-ks.get_num().get_si());
  return pow_floor(Dyadic(2), -ks, length_bits(k, s));
}

CantorStage build_stage(const CantorSpec& spec) {
  spec.validate();
  const long lb = base_log2(spec.base_cell);
  const Dyadic& origin = spec.base_cell.lo;
  CantorStage out;
  out.spec = spec;

  std::vector<CantorInterval> level;
  {
    Dyadic len = stage_length(spec.k, 1);
    for (std::uint8_t d = 1; d <= 2; ++d) {
      Dyadic center = Dyadic(2 * d - 1).ldexp(-2);
      level.push_back({{d}, DyadicInterval(center - len.ldexp(-1), center + len.ldexp(-1))});
    }
  }
  for (auto& c : level) c.iv = {origin + c.iv.lo.ldexp(lb), origin + c.iv.hi.ldexp(lb)};
  out.stages.push_back(level);

  for (int s = 2; s <= spec.depth; ++s) {
    Dyadic len = stage_length(spec.k, s).ldexp(lb);
    std::vector<CantorInterval> next;
    next.reserve(level.size() * 2);
    for (const auto& p : level) {
      CantorInterval left{p.digits, DyadicInterval(p.iv.lo, p.iv.lo + len)};
      CantorInterval right{p.digits, DyadicInterval(p.iv.hi - len, p.iv.hi)};
      left.digits.push_back(1);
      right.digits.push_back(2);
      next.push_back(std::move(left));
      next.push_back(std::move(right));
    }
    level = std::move(next);
    out.stages.push_back(level);
  }
  return out;
}

const std::vector<CantorInterval>& CantorStage::at(int s) const {
  if (s < 1 || s > static_cast<int>(stages.size())) fail(ErrorCode::InvalidArgument, "stage out of range");
  return stages[static_cast<std::size_t>(s - 1)];
}

Dyadic CantorStage::sibling_gap(int s, std::size_t index) const {
  const auto& lv = at(s);
  std::size_t left = index & ~std::size_t{1};
  return lv.at(left + 1).iv.lo - lv.at(left).iv.hi;
}

std::vector<Dyadic> CantorStage::carrier() const {
  std::vector<Dyadic> pts;
  pts.reserve(last().size() * 2);
  for (const auto& c : last()) {
    pts.push_back(c.iv.lo);
    pts.push_back(c.iv.hi);
  }
  return pts;
}

PiecewiseDomain CantorStage::domain() const {
  PiecewiseDomain d;
  for (const auto& c : last()) d.intervals.push_back(c.iv);
  d.sample_points = carrier();
  return d;
}

StageMeasure measure_stage(const CantorSpec& spec, int s) {
  spec.validate();
  if (s < 0 || s > spec.depth) fail(ErrorCode::InvalidArgument, "stage exceeds the spec depth");
  const long lb = base_log2(spec.base_cell);
  StageMeasure m;
  Rational e = Rational(s) - spec.k * s + lb;  // log2 of the measure
  if (e.get_den() == 1) {
    m.exact = Dyadic::pow2(e.get_num().get_si());
    m.value = m.exact->to_double();
  } else {
    mpfr_t v, x;
    mpfr_init2(v, 256);
    mpfr_init2(x, 256);
    mpfr_set_q(x, e.get_mpq_t(), MPFR_RNDN);
    mpfr_ui_pow(v, 2, x, MPFR_RNDN);
    m.value = mpfr_get_d(v, MPFR_RNDN);
    mpfr_clear(v);
    mpfr_clear(x);
  }
  return m;
}

double reference_constant(const Rational& k) {
  if (k <= 1) fail(ErrorCode::InvalidK, "constant needs k > 1");
  double p = std::exp2(to_double(k));
  return p / (p - 2.0);
}

Dyadic eval_g(const CantorStage& stage, const Dyadic& x) {
  const auto& lv = stage.last();
  auto it = std::lower_bound(lv.begin(), lv.end(), x,
                             [](const CantorInterval& c, const Dyadic& v) { return c.iv.hi < v; });
  if (it == lv.end() || (x != it->iv.lo && x != it->iv.hi))
    fail(ErrorCode::NotInCarrier, x.str() + " is not an endpoint of a stage-" +
                                      std::to_string(stage.spec.depth) + " interval");
  const int s = stage.spec.depth;
  const long lb = base_log2(stage.spec.base_cell);
  mpz_class idx = 0;
  for (auto d : it->digits) idx = 2 * idx + (d - 1);
  if (x == it->iv.hi) idx += 1;
  return stage.spec.base_cell.lo + Dyadic::from_parts(idx, 0).ldexp(lb - s);
}

EvaluableMap cantor_map(const CantorStage& stage) {
  PiecewiseDomain d = stage.domain();
  std::vector<Point> values;
  values.reserve(d.sample_points.size());
  for (const auto& t : d.sample_points) values.push_back({eval_g(stage, t)});
  return EvaluableMap(1, std::move(d), std::move(values),
                      "cantor-g(k=" + rational_str(stage.spec.k) + ",depth=" + std::to_string(stage.spec.depth) + ")");
}

std::string cantor_csv(const CantorStage& stage) {
  std::string out = "address,lo,hi,gap\n";
  const int s = stage.spec.depth;
  const auto& lv = stage.at(s);
  for (std::size_t i = 0; i < lv.size(); ++i)
    out += lv[i].address() + "," + lv[i].iv.lo.str() + "," + lv[i].iv.hi.str() + "," +
           stage.sibling_gap(s, i).str() + "\n";
  return out;
}

}  // namespace outerdim
