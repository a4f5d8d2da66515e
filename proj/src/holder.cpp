#include "outerdim/holder.hpp"

#include <algorithm>
#include <cmath>

#include "outerdim/error.hpp"
#include "outerdim/parallel.hpp"

namespace outerdim {

bool PiecewiseDomain::contains(const Dyadic& t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](const Dyadic& v, const DyadicInterval& iv) { return v < iv.lo; });
  if (it == intervals.begin()) return false;
  return std::prev(it)->contains(t);
}

DyadicInterval PiecewiseDomain::hull() const {
  if (intervals.empty()) fail(ErrorCode::EmptyDomain, "domain has no intervals");
  return {intervals.front().lo, intervals.back().hi};
}

Dyadic PiecewiseDomain::measure() const {
  Dyadic total;
  for (const auto& iv : intervals) total += iv.length();
  return total;
}

void PiecewiseDomain::validate() const {
  for (std::size_t i = 1; i < intervals.size(); ++i)
    if (!(intervals[i - 1].hi < intervals[i].lo))
      fail(ErrorCode::InvalidArgument, "domain intervals must be sorted and disjoint");
  for (std::size_t i = 1; i < sample_points.size(); ++i)
    if (!(sample_points[i - 1] < sample_points[i]))
      fail(ErrorCode::InvalidArgument, "carrier points must be strictly increasing");
  for (const auto& t : sample_points)
    if (!contains(t)) fail(ErrorCode::InvalidArgument, "carrier point " + t.str() + " outside domain");
}

EvaluableMap::EvaluableMap(int codomain_dim, PiecewiseDomain domain, std::vector<Point> values,
                           std::string provenance, Rule rule)
    : n_(codomain_dim),
      domain_(std::move(domain)),
      values_(std::move(values)),
      provenance_(std::move(provenance)),
      rule_(std::move(rule)) {
  if (n_ < 1) fail(ErrorCode::InvalidArgument, "codomain dimension must be positive");
  if (values_.size() != domain_.sample_points.size())
    fail(ErrorCode::InvalidArgument, "one value per carrier point required");
  for (const auto& v : values_)
    if (static_cast<int>(v.size()) != n_) fail(ErrorCode::InvalidArgument, "value has wrong dimension");
  domain_.validate();
}

std::optional<Point> EvaluableMap::try_eval(const Dyadic& t) const {
  const auto& c = domain_.sample_points;
  auto it = std::lower_bound(c.begin(), c.end(), t);
  if (it != c.end() && *it == t) return values_[static_cast<std::size_t>(it - c.begin())];
  if (rule_ && domain_.contains(t)) return rule_(t);
  return std::nullopt;
}

Point EvaluableMap::eval(const Dyadic& t) const {
  auto v = try_eval(t);
  if (!v) fail(ErrorCode::NotInCarrier, "point " + t.str() + " is not admissible for " + provenance_);
  return *v;
}

std::pair<Point, Point> EvaluableMap::range_box() const {
  if (values_.empty()) fail(ErrorCode::UnboundedPiece, "map has an empty carrier image");
  Point lo = values_.front(), hi = values_.front();
  for (const auto& v : values_)
    for (int i = 0; i < n_; ++i) {
      if (v[i] < lo[i]) lo[i] = v[i];
      if (hi[i] < v[i]) hi[i] = v[i];
    }
  return {lo, hi};
}

const char* verify_mode_name(VerifyMode m) {
  switch (m) {
    case VerifyMode::Claimed: return "claimed";
    case VerifyMode::EndpointExhaustive: return "endpoint-exhaustive";
    case VerifyMode::Sampled: return "sampled";
  }
  return "?";
}

namespace {

struct PairStats {
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  std::uint64_t violations = 0;
  std::uint64_t tested = 0;
};

class PairKernel {
 public:
  PairKernel(const EvaluableMap& f, const Rational& k, const Dyadic& K, const LogCompare& cmp)
      : f_(f), k_(k), K_(K), cmp_(cmp), kd_(to_double(k)), Kd_(K.to_double()) {
    const auto& c = f.carrier();
    t_.reserve(c.size());
    for (const auto& t : c) t_.push_back(t.to_double());
    v_.reserve(c.size() * f.codomain_dim());
    for (const auto& v : f.values())
      for (const auto& x : v) v_.push_back(x.to_double());
  }

  void visit(std::size_t i, std::size_t j, PairStats& s) const {
    const int n = f_.codomain_dim();
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      double dv = v_[i * n + a] - v_[j * n + a];
      r2 += dv * dv;
    }
    double d = t_[j] - t_[i];
    double ratio = r2 == 0.0 ? 0.0 : (kd_ == 2.0 ? r2 / d : std::pow(r2, 0.5 * kd_) / d);
    ++s.tested;
    if (ratio > s.best) {
      s.best = ratio;
      s.bi = i;
      s.bj = j;
    }
    if (ratio > Kd_ * (1.0 - 1e-9) && exact_sign(i, j) > 0) ++s.violations;
  }

  int exact_sign(std::size_t i, std::size_t j) const {
    Dyadic r2 = squared_distance(f_.values()[i], f_.values()[j]);
    Dyadic d = f_.carrier()[j] - f_.carrier()[i];
    return compare_power(r2, k_, K_, d, cmp_);
  }

  double exact_ratio(std::size_t i, std::size_t j) const {
    Dyadic r2 = squared_distance(f_.values()[i], f_.values()[j]);
    Dyadic d = f_.carrier()[j] - f_.carrier()[i];
    return ratio_high_precision(r2, k_, d);
  }

 private:
  const EvaluableMap& f_;
  Rational k_;
  Dyadic K_;
  LogCompare cmp_;
  double kd_, Kd_;
  std::vector<double> t_;
  std::vector<double> v_;
};

PairStats merge(const std::vector<PairStats>& parts) {
  PairStats out;
  for (const auto& p : parts) {
    if (p.best > out.best) {
      out.best = p.best;
      out.bi = p.bi;
      out.bj = p.bj;
    }
    out.violations += p.violations;
    out.tested += p.tested;
  }
  return out;
}

}  // namespace

HolderCertificate verify_dk(const EvaluableMap& f, const Rational& k, const Dyadic& K,
                            const VerifyStrategy& strategy) {
  const std::size_t n = f.size();
  if (n < 2) fail(ErrorCode::EmptyDomain, "verification needs at least two carrier points");
  if (k <= 0) fail(ErrorCode::InvalidK, "exponent must be positive");
  if (K.sign() <= 0) fail(ErrorCode::InvalidArgument, "constant must be positive");
  PairKernel kernel(f, k, K, strategy.compare);

  PairStats stats;
  if (strategy.mode == VerifyMode::Sampled) {
    if (strategy.count == 0) fail(ErrorCode::InvalidArgument, "sampled verification needs a pair count");
    CounterRng rng(strategy.seed);
    const std::uint64_t count = strategy.count;
    auto parts = parallel_blocks<PairStats>(count, 64, [&](std::size_t lo, std::size_t hi) {
      PairStats s;
      for (std::size_t c = lo; c < hi; ++c) {
        std::size_t i = rng.below(2 * c, n);
        std::size_t j = (i + 1 + rng.below(2 * c + 1, n - 1)) % n;
        if (j < i) std::swap(i, j);
        kernel.visit(i, j, s);
      }
      return s;
    });
    stats = merge(parts);
  } else {
    // Rows are split so that each block holds roughly the same pair count.
    const std::size_t blocks = std::min<std::size_t>(n - 1, 256);
    std::vector<std::size_t> row_start(blocks + 1, n - 1);
    {
      const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
      double acc = 0.0;
      std::size_t b = 0;
      row_start[0] = 0;
      for (std::size_t i = 0; i + 1 < n && b + 1 < blocks; ++i) {
        acc += static_cast<double>(n - 1 - i);
        if (acc >= total * static_cast<double>(b + 1) / static_cast<double>(blocks)) row_start[++b] = i + 1;
      }
      for (std::size_t r = b + 1; r <= blocks; ++r) row_start[r] = n - 1;
    }
    auto parts = parallel_blocks<PairStats>(blocks, blocks, [&](std::size_t lo, std::size_t hi) {
      PairStats s;
      for (std::size_t i = row_start[lo]; i < row_start[hi]; ++i)
        for (std::size_t j = i + 1; j < n; ++j) kernel.visit(i, j, s);
      return s;
    });
    stats = merge(parts);
  }

  HolderCertificate cert;
  cert.k = k;
  cert.K = K;
  cert.mode = strategy.mode == VerifyMode::Sampled ? VerifyMode::Sampled : VerifyMode::EndpointExhaustive;
  cert.verified_depth = strategy.depth;
  cert.worst_pair = {f.carrier()[stats.bi], f.carrier()[stats.bj]};
  cert.worst_ratio = stats.best <= 0.0 ? 0.0 : kernel.exact_ratio(stats.bi, stats.bj);
  cert.violations = stats.violations;
  cert.pairs_tested = stats.tested;
  cert.pass = stats.violations == 0;
  return cert;
}

HolderCertificate estimate_constant(const EvaluableMap& f, const Rational& k, int depth) {
  VerifyStrategy s;
  s.depth = depth;
  HolderCertificate probe = verify_dk(f, k, Dyadic(1), s);
  Dyadic K = safe_constant(probe.worst_ratio);
  if (K == Dyadic(1)) return probe;
  HolderCertificate cert = verify_dk(f, k, K, s);
  return cert;
}

namespace {

Dyadic div_ceil(const Dyadic& a, const Dyadic& b, long bits) {
  try {
    return exact_div(a, b);
  } catch (const Error&) {
  }
  mpq_class q = a.to_rational() / b.to_rational();
  mpz_class scaled_num = q.get_num();
  mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), static_cast<unsigned long>(bits));
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), scaled_num.get_mpz_t(), q.get_den_mpz_t());
  return Dyadic::from_parts(c, static_cast<std::uint32_t>(bits));
}

}  // namespace

CertifiedMap compose(const CertifiedMap& outer, const CertifiedMap& inner) {
  if (inner.map.codomain_dim() != 1)
    fail(ErrorCode::InvalidArgument, "inner map must take values in R^1");
  std::vector<Point> values;
  values.reserve(inner.map.size());
  for (std::size_t i = 0; i < inner.map.size(); ++i) {
    const Dyadic& y = inner.map.values()[i][0];
    auto v = outer.map.try_eval(y);
    if (!v)
      fail(ErrorCode::RangeEscape, "image " + y.str() + " of carrier point " + inner.map.carrier()[i].str() +
                                       " leaves the outer domain");
    values.push_back(std::move(*v));
  }
  EvaluableMap::Rule rule;
  if (!inner.map.carrier_only() && !outer.map.carrier_only()) {
    EvaluableMap a = outer.map, b = inner.map;
    rule = [a, b](const Dyadic& t) -> std::optional<Point> {
      auto y = b.try_eval(t);
      if (!y) return std::nullopt;
      return a.try_eval((*y)[0]);
    };
  }
  CertifiedMap out{EvaluableMap(outer.map.codomain_dim(), inner.map.domain(), std::move(values),
                                outer.map.provenance() + " o " + inner.map.provenance(), std::move(rule)),
                   {}};
  out.cert.k = outer.cert.k * inner.cert.k;
  out.cert.K = pow_ceil(outer.cert.K, inner.cert.k, 40) * inner.cert.K;
  out.cert.mode = VerifyMode::Claimed;
  out.cert.verified_depth = std::min(outer.cert.verified_depth, inner.cert.verified_depth);
  out.cert.note = "composition bound";
  return out;
}

CertifiedMap affine_reparam(const CertifiedMap& f, const DyadicInterval& source, const DyadicInterval& target) {
  if (!(source.lo < source.hi) || !(target.lo < target.hi))
    fail(ErrorCode::DegenerateInterval, "affine reparametrization needs non-degenerate intervals");
  const Dyadic r = exact_div(target.length(), source.length());
  const Dyadic a = source.lo, x = target.lo;
  auto fwd = [&](const Dyadic& t) { return x + (t - a) * r; };

  const auto& dom = f.map.domain();
  PiecewiseDomain nd;
  for (const auto& iv : dom.intervals) {
    if (iv.lo < source.lo || source.hi < iv.hi)
      fail(ErrorCode::RangeEscape, "domain interval leaves the source interval");
    nd.intervals.emplace_back(fwd(iv.lo), fwd(iv.hi));
  }
  for (const auto& t : dom.sample_points) nd.sample_points.push_back(fwd(t));

  EvaluableMap::Rule rule;
  if (!f.map.carrier_only()) {
    EvaluableMap g = f.map;
    rule = [g, r, a, x](const Dyadic& u) -> std::optional<Point> {
      try {
        return g.try_eval(a + exact_div(u - x, r));
      } catch (const Error&) {
        return std::nullopt;
      }
    };
  }
  CertifiedMap out{EvaluableMap(f.map.codomain_dim(), std::move(nd), f.map.values(),
                                f.map.provenance() + " o affine", std::move(rule)),
                   f.cert};
  out.cert.K = div_ceil(f.cert.K, r, 40);
  out.cert.mode = VerifyMode::Claimed;
  out.cert.worst_pair = {fwd(f.cert.worst_pair.first), fwd(f.cert.worst_pair.second)};
  out.cert.worst_ratio = f.cert.worst_ratio / r.to_double();
  out.cert.note = "affine reparametrization";
  return out;
}

HolderPair dk_to_holder(const Rational& k, const Dyadic& K) {
  if (k <= 0) fail(ErrorCode::InvalidK, "exponent must be positive");
  Rational inv = 1 / k;
  return {inv, pow_ceil(K, inv, 40)};
}

std::pair<Rational, Dyadic> holder_to_dk(const Rational& h, const Dyadic& M, const DyadicInterval& window) {
  if (h <= 0) fail(ErrorCode::InvalidK, "Hoelder exponent must be positive");
  if (window.degenerate()) fail(ErrorCode::WindowMissing, "conversion needs a non-degenerate window");
  Rational k = 1 / h;
  return {k, pow_ceil(M, k, 40)};
}

EvaluableMap identity_map(const PiecewiseDomain& domain) {
  std::vector<Point> values;
  values.reserve(domain.sample_points.size());
  for (const auto& t : domain.sample_points) values.push_back({t});
  return EvaluableMap(1, domain, std::move(values), "identity",
                      [](const Dyadic& t) -> std::optional<Point> { return Point{t}; });
}

EvaluableMap constant_map(const PiecewiseDomain& domain, const Point& value) {
  std::vector<Point> values(domain.sample_points.size(), value);
  return EvaluableMap(static_cast<int>(value.size()), domain, std::move(values), "constant",
                      [value](const Dyadic&) -> std::optional<Point> { return value; });
}

}  // namespace outerdim
