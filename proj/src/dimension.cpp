#include "outerdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "outerdim/cube.hpp"
#include "outerdim/error.hpp"
#include "outerdim/glue.hpp"
#include "outerdim/parallel.hpp"

namespace outerdim {

std::vector<Point> as_points(const std::vector<Dyadic>& values) {
  std::vector<Point> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back({v});
  return out;
}

BoxCountEstimate box_dimension(const std::vector<Point>& points, std::vector<int> ladder) {
  if (points.empty()) fail(ErrorCode::EmptyDomain, "box counting needs at least one point");
  const std::size_t n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n) fail(ErrorCode::InvalidArgument, "points of mixed dimension");
  if (ladder.empty()) {
    int top = 0;
    for (const auto& p : points)
      for (const auto& x : p) top = std::max<int>(top, static_cast<int>(x.exponent()));
    for (int m = 1; m <= std::max(top, 2); ++m) ladder.push_back(m);
  }
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  if (ladder.size() < 2) fail(ErrorCode::DegenerateLadder, "box counting needs at least two scales");
  for (int m : ladder)
    if (m < 0 || m > 62) fail(ErrorCode::DegenerateLadder, "scale exponents must lie in 0..62");

  BoxCountEstimate est;
  for (int m : ladder) {
    auto keys = parallel_blocks<std::vector<std::vector<long>>>(
        points.size(), 16, [&](std::size_t lo, std::size_t hi) {
          std::vector<std::vector<long>> part;
          part.reserve(hi - lo);
          for (std::size_t i = lo; i < hi; ++i) {
            std::vector<long> key(n);
            for (std::size_t a = 0; a < n; ++a) {
              mpz_class c = cell_index(points[i][a], m);
              if (!c.fits_slong_p()) fail(ErrorCode::InvalidArgument, "point too far from the origin");
              key[a] = c.get_si();
            }
            part.push_back(std::move(key));
          }
          return part;
        });
    std::vector<std::vector<long>> all;
    for (auto& part : keys) std::move(part.begin(), part.end(), std::back_inserter(all));
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    est.scales.push_back(m);
    est.counts.push_back(all.size());
  }

  const std::size_t use = std::min<std::size_t>(5, ladder.size());
  const std::size_t first = ladder.size() - use;
  double sx = 0, sy = 0;
  for (std::size_t i = first; i < ladder.size(); ++i) {
    sx += est.scales[i];
    sy += std::log2(static_cast<double>(est.counts[i]));
  }
  const double mx = sx / use, my = sy / use;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = first; i < ladder.size(); ++i) {
    double dx = est.scales[i] - mx, dy = std::log2(static_cast<double>(est.counts[i])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  est.fitted = static_cast<int>(use);
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  double ssr = 0;
  for (std::size_t i = first; i < ladder.size(); ++i) {
    double r = std::log2(static_cast<double>(est.counts[i])) - (est.intercept + est.slope * est.scales[i]);
    est.residuals.push_back(r);
    ssr += r * r;
  }
  est.fit_r2 = syy == 0 ? 1.0 : 1.0 - ssr / syy;
  return est;
}

DmUpperCert make_dm_cert(const CertifiedMap& cover, const std::vector<Point>& covered) {
  DmUpperCert c{cover.cert.k, cover, covered, false};
  std::set<Point> image(cover.map.values().begin(), cover.map.values().end());
  c.inclusion = std::all_of(covered.begin(), covered.end(), [&](const Point& p) { return image.count(p) > 0; });
  return c;
}

namespace {

long to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) fail(ErrorCode::InvalidArgument, "cell index out of range");
  return z.get_si();
}

long floor_cell(const Dyadic& x, int s) { return to_long(x.floor_scaled(s)); }

long left_cell(const Dyadic& x, int s) { return to_long(cell_index(x, s)); }

}  // namespace

HausdorffExport hausdorff_cover_export(const CertifiedMap& cover, const Dyadic& sigma, long window) {
  if (window <= 0) fail(ErrorCode::WindowMissing, "export needs a window [-i, i] with i >= 1");
  if (sigma.sign() <= 0) fail(ErrorCode::InvalidArgument, "sigma must be positive");
  HausdorffExport E;
  E.k = cover.cert.k;
  E.M = cover.cert.K;
  E.sigma = sigma;
  E.window = window;
  const Dyadic sigma2 = sigma * sigma;
  int s = 0;
  for (; s <= 256; ++s)
    if (compare_power(sigma2, E.k, E.M, Dyadic::pow2(-s)) >= 0) break;
  if (s > 256) fail(ErrorCode::InvalidArgument, "sigma too small");
  E.s0 = s;
  E.diam_pow_k = E.M.ldexp(-s);
  E.diam_bound = std::pow(E.diam_pow_k.to_double(), 1.0 / to_double(E.k));
  E.diam_ok = compare_power(sigma2, E.k, E.M, Dyadic::pow2(-s)) >= 0;

  const Dyadic wlo(-window), whi(window);
  std::set<long> cells;
  for (const auto& iv : cover.map.domain().intervals) {
    Dyadic lo = max(iv.lo, wlo), hi = min(iv.hi, whi);
    if (hi < lo) continue;
    long j0 = floor_cell(lo, s);
    long j1 = lo < hi ? left_cell(hi, s) : j0;
    for (long j = j0; j <= j1; ++j) cells.insert(j);
  }
  // Carrier points per cell: half-open cells, a right interval end stays left.
  const auto& dom = cover.map.domain();
  std::map<long, std::pair<Point, Point>> boxes;
  std::map<long, std::size_t> counts;
  for (std::size_t i = 0; i < cover.map.size(); ++i) {
    const Dyadic& t = cover.map.carrier()[i];
    if (t < wlo || whi < t) continue;
    auto it = std::upper_bound(dom.intervals.begin(), dom.intervals.end(), t,
                               [](const Dyadic& v, const DyadicInterval& iv) { return v < iv.lo; });
    bool right_end = it != dom.intervals.begin() && std::prev(it)->hi == t && std::prev(it)->lo < t;
    long j = right_end ? left_cell(t, s) : floor_cell(t, s);
    const Point& v = cover.map.values()[i];
    auto [bit, fresh] = boxes.try_emplace(j, v, v);
    if (!fresh)
      for (std::size_t a = 0; a < v.size(); ++a) {
        if (v[a] < bit->second.first[a]) bit->second.first[a] = v[a];
        if (bit->second.second[a] < v[a]) bit->second.second[a] = v[a];
      }
    ++counts[j];
  }
  for (long j : cells) {
    HausdorffPiece p;
    p.lo = Dyadic(j).ldexp(-s);
    p.hi = Dyadic(j + 1).ldexp(-s);
    if (auto it = boxes.find(j); it != boxes.end()) {
      p.carrier_points = counts[j];
      p.image_diam2 = squared_distance(it->second.first, it->second.second);
    }
    E.pieces.push_back(std::move(p));
  }
  E.sum = Dyadic(static_cast<long>(E.pieces.size())) * E.diam_pow_k;
  E.limit = Dyadic(2 * window) * E.M;
  E.sum_ok = E.sum <= E.limit;
  return E;
}

MaUpperBound ma_upper(const std::vector<Point>& carrier, const Rational& a, const CertifiedMap& cover) {
  if (cover.cert.k != a) fail(ErrorCode::InvalidArgument, "cover exponent differs from a");
  if (Dyadic(1) < cover.cert.K) fail(ErrorCode::ConstantNotOne, "m_a covers need constant <= 1");
  DmUpperCert c = make_dm_cert(cover, carrier);
  if (!c.inclusion) fail(ErrorCode::UncoveredPoint, "carrier not contained in the cover image");
  MaUpperBound b;
  b.a = a;
  b.domain_measure = cover.map.domain().measure();
  b.domain_measure_value = b.domain_measure.to_double();
  b.cover = cover;
  return b;
}

MaCombined ma_combine(const std::vector<MaUpperBound>& parts, double epsilon) {
  if (parts.empty()) {
    MaCombined c;
    c.epsilon = epsilon;
    c.within = true;
    return c;
  }
  std::vector<GluePiece> pieces;
  MaCombined c;
  c.epsilon = epsilon;
  double slack = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i].measure_exact) fail(ErrorCode::InvalidArgument, "combine needs exact part measures");
    pieces.push_back({parts[i].cover, std::nullopt, std::nullopt});
    c.sum_of_parts += parts[i].domain_measure;
    slack += std::ldexp(epsilon, -static_cast<int>(i + 1));
  }
  c.slack_used = slack;
  GlueMeasureResult g = glue_with_measure(pieces, parts.front().a, true);
  c.bound.a = parts.front().a;
  c.bound.domain_measure = g.ledger.total;
  c.bound.domain_measure_value = g.ledger.total.to_double();
  c.bound.cover = {g.map, g.cert};
  c.within = g.cert.pass && g.ledger.total <= c.sum_of_parts &&
             g.ledger.total.to_double() <= c.sum_of_parts.to_double() + slack;
  return c;
}

NullifyPlan nullify_measure(const CertifiedMap& f, const Rational& a, const std::vector<int>& depths,
                            std::uint64_t samples, std::uint64_t seed) {
  const Rational b = f.cert.k;
  if (a <= b) fail(ErrorCode::ExponentOrder, "nullification needs a > b");
  if (Dyadic(1) < f.cert.K) fail(ErrorCode::ConstantNotOne, "renormalize the cover to constant 1 first");
  if (f.map.size() == 0) fail(ErrorCode::EmptyDomain, "cover has no carrier");
  NullifyPlan plan;
  plan.a = a;
  plan.b = b;
  const Rational r = a / b;

  DyadicInterval hull = f.map.domain().hull();
  Dyadic c(to_long(hull.lo.floor_scaled(0)));
  long e = 0;
  while (c + Dyadic::pow2(e) < hull.hi) ++e;
  plan.base_cell = DyadicInterval(c, c + Dyadic::pow2(e));
  long precision = 0;
  for (const auto& t : f.map.carrier()) precision = std::max<long>(precision, t.exponent());
  plan.min_depth = static_cast<int>(std::max<long>(1, e + precision));

  std::set<int> ds;
  for (int d : depths) ds.insert(std::max(d, plan.min_depth));
  if (ds.empty()) ds.insert(plan.min_depth);

  std::set<Point> f_image(f.map.values().begin(), f.map.values().end());
  for (int s : ds) {
    CantorSpec spec;
    spec.k = r;
    spec.depth = s;
    spec.base_cell = plan.base_cell;
    CantorStage stage = build_stage(spec);
    EvaluableMap g = cantor_map(stage);
    NullifyStage st;
    st.depth = s;
    HolderCertificate probe = verify_dk(g, r, Dyadic(1), {VerifyMode::EndpointExhaustive, 0, 0, s, {}});
    st.K_star = safe_constant(probe.worst_ratio);
    st.g_cert = verify_dk(g, r, st.K_star, {VerifyMode::EndpointExhaustive, 0, 0, s, {}});

    StageMeasure m = measure_stage(spec, s);
    st.exact = m.exact.has_value();
    if (m.exact) {
      st.cantor_measure = *m.exact;
      st.domain_measure = *m.exact * st.K_star;
      st.domain_measure_value = st.domain_measure.to_double();
    } else {
      st.domain_measure_value = m.value * st.K_star.to_double();
    }
    st.cantor_measure_value = m.value;

    PiecewiseDomain hd;
    for (const auto& iv : g.domain().intervals) hd.intervals.emplace_back(iv.lo * st.K_star, iv.hi * st.K_star);
    std::vector<Point> hv;
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto y = f.map.try_eval(g.values()[i][0]);
      if (!y) continue;
      hd.sample_points.push_back(g.carrier()[i] * st.K_star);
      hv.push_back(std::move(*y));
    }
    st.h_points = hv.size();
    std::set<Point> h_image(hv.begin(), hv.end());
    st.coverage = std::all_of(f_image.begin(), f_image.end(), [&](const Point& p) { return h_image.count(p) > 0; });
    EvaluableMap h(f.map.codomain_dim(), std::move(hd), std::move(hv),
                   f.map.provenance() + " o q(depth=" + std::to_string(s) + ")");
    if (h.size() >= 2) {
      VerifyStrategy vs;
      vs.mode = VerifyMode::Sampled;
      vs.count = samples;
      vs.seed = seed;
      vs.depth = s;
      st.h_cert = verify_dk(h, a, Dyadic(1), vs);
    } else {
      st.h_cert.k = a;
      st.h_cert.K = Dyadic(1);
    }
    if (!plan.stages.empty() && !(st.domain_measure_value < plan.stages.back().domain_measure_value))
      plan.monotone = false;
    plan.stages.push_back(std::move(st));
    plan.h = std::move(h);
  }
  return plan;
}

}  // namespace outerdim
