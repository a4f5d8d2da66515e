#include <doctest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "outerdim/dimension.hpp"
#include "outerdim/error.hpp"
#include "outerdim/product_cover.hpp"

using namespace outerdim;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

CantorStage stage(const Rational& k, int depth) {
  CantorSpec s;
  s.k = k;
  s.depth = depth;
  return build_stage(s);
}

CertifiedMap identity_cover(const PiecewiseDomain& dom) {
  CertifiedMap c{identity_map(dom), {}};
  c.cert = verify_dk(c.map, Rational(1), Dyadic(1));
  return c;
}

PiecewiseDomain grid(const Dyadic& lo, const Dyadic& hi, int bits) {
  PiecewiseDomain d;
  d.intervals.emplace_back(lo, hi);
  for (Dyadic t = lo; t <= hi; t += Dyadic::pow2(-bits)) d.sample_points.push_back(t);
  return d;
}

// Occupied cells of side 2^-m, counted directly.
std::size_t count_cells(const std::vector<Dyadic>& xs, int m) {
  std::set<long> cells;
  for (const auto& x : xs) {
    const double v = std::ldexp(x.to_double(), m);
    long c = static_cast<long>(std::ceil(v)) - 1;
    cells.insert(c);
  }
  return cells.size();
}

}  // namespace

TEST_SUITE("dimension") {
  TEST_CASE("box counts match a direct count") {
    gen::Gen g(91);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Dyadic> xs;
      for (int i = 0, n = static_cast<int>(g.integer(2, 200)); i < n; ++i)
        xs.push_back(Dyadic(g.integer(1, 1 << 12)).ldexp(-12));
      const BoxCountEstimate e = box_dimension(as_points(xs), {1, 2, 3, 4, 5, 6, 7, 8});
      for (std::size_t i = 0; i < e.scales.size(); ++i) CHECK(e.counts[i] == count_cells(xs, e.scales[i]));
    }
  }

  TEST_CASE("interval, point and Cantor slopes") {
    std::vector<Dyadic> line;
    for (long j = 0; j <= 1024; ++j) line.push_back(Dyadic(j).ldexp(-10));
    CHECK(box_dimension(as_points(line)).slope == doctest::Approx(1.0).epsilon(0.02));

    const BoxCountEstimate pt = box_dimension(as_points({D("3/8")}), {1, 2, 3, 4, 5, 6});
    CHECK(pt.slope == doctest::Approx(0.0));

    for (const auto& [k, expect] : std::vector<std::pair<Rational, double>>{
             {Rational(2), 0.5}, {Rational(3, 2), 2.0 / 3.0}, {Rational(3), 1.0 / 3.0}}) {
      const CantorStage st = stage(k, 12);
      std::vector<int> ladder;
      for (int m = 1; m <= static_cast<int>(std::floor(to_double(k) * 12)); ++m) ladder.push_back(m);
      const BoxCountEstimate e = box_dimension(as_points(st.carrier()), ladder);
      CHECK(std::abs(e.slope - expect) <= 0.05);
      CHECK(e.fitted == 5);
      CHECK(e.residuals.size() == 5);
    }
  }

  TEST_CASE("box counting errors") {
    CHECK_THROWS_AS(box_dimension({}), Error);
    try {
      box_dimension(as_points({D("1/2")}), {3});
      FAIL("expected DegenerateLadder");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateLadder);
    }
  }

  TEST_CASE("inclusion certificates") {
    const CantorStage st = stage(Rational(2), 4);
    const CertifiedMap c = identity_cover(st.domain());
    CHECK(make_dm_cert(c, as_points(st.carrier())).inclusion);
    CHECK_FALSE(make_dm_cert(c, as_points({D("1/2")})).inclusion);
  }

  TEST_CASE("Hausdorff export of the unit interval") {
    const CertifiedMap c = identity_cover(grid(Dyadic(0), Dyadic(1), 5));
    const HausdorffExport e = hausdorff_cover_export(c, D("1/8"), 1);
    CHECK(e.s0 == 3);
    CHECK(e.pieces.size() == 8);
    CHECK(e.sum == Dyadic(1));
    CHECK(e.limit == Dyadic(2));
    CHECK(e.diam_ok);
    CHECK(e.sum_ok);
    std::size_t points = 0;
    for (const auto& p : e.pieces) {
      CHECK(p.hi - p.lo == D("1/8"));
      CHECK(p.image_diam2 <= D("1/64"));
      points += p.carrier_points;
    }
    CHECK(points == c.map.size());
    try {
      hausdorff_cover_export(c, D("1/8"), 0);
      FAIL("expected WindowMissing");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::WindowMissing);
    }
  }

  TEST_CASE("Hausdorff export of the Cantor cover") {
    const CantorStage st = stage(Rational(2), 6);
    CertifiedMap g{cantor_map(st), {}};
    g.cert = estimate_constant(g.map, Rational(2));
    int prev_s0 = -1;
    std::size_t prev_pieces = 0;
    for (const char* sg : {"1/4", "1/8", "1/16"}) {
      const Dyadic sigma = D(sg);
      const HausdorffExport e = hausdorff_cover_export(g, sigma, 1);
      // M 2^-s0 <= sigma^2 < M 2^-(s0-1)
      CHECK(e.M.ldexp(-e.s0) <= sigma * sigma);
      CHECK(sigma * sigma < e.M.ldexp(-(e.s0 - 1)));
      CHECK(e.diam_ok);
      CHECK(e.sum_ok);
      CHECK(e.diam_bound <= sigma.to_double());
      Dyadic sum;
      for (const auto& p : e.pieces) {
        sum += e.diam_pow_k;
        CHECK(p.image_diam2 <= e.diam_pow_k);  // diam^2 <= M 2^-s0 at k = 2
      }
      CHECK(sum == e.sum);
      CHECK(sum <= Dyadic(2) * e.M);
      if (prev_s0 >= 0) {
        // sigma^2 shrinks by 4: s0 moves by at most 2, each cell splits in at most 4
        CHECK(e.s0 >= prev_s0);
        CHECK(e.s0 <= prev_s0 + 2);
        CHECK(e.pieces.size() <= 4 * prev_pieces);
      }
      prev_s0 = e.s0;
      prev_pieces = e.pieces.size();
    }
  }

  TEST_CASE("nullification measures") {
    for (const auto& [a, s, factor] : std::vector<std::tuple<Rational, int, Dyadic>>{
             {Rational(2), 6, D("1/64")}, {Rational(3, 2), 8, D("1/16")}}) {
      const CantorStage st = stage(Rational(2), 2);
      const CertifiedMap f = identity_cover(st.domain());
      const NullifyPlan plan = nullify_measure(f, a, {s}, 2000, 5);
      REQUIRE(plan.stages.size() == 1);
      const NullifyStage& ns = plan.stages[0];
      if (ns.depth == s) {
        CHECK(ns.exact);
        CHECK(ns.cantor_measure == factor);
        CHECK(ns.domain_measure == factor * ns.K_star);
      }
      CHECK(ns.g_cert.pass);
      CHECK(ns.h_cert.pass);
      CHECK(ns.h_cert.violations == 0);
      CHECK(ns.coverage);
    }
  }

  TEST_CASE("nullification decreases with depth") {
    const CantorStage st = stage(Rational(2), 2);
    const CertifiedMap f = identity_cover(st.domain());
    const NullifyPlan plan = nullify_measure(f, Rational(3, 2), {4, 5, 6, 7}, 500, 1);
    CHECK(plan.monotone);
    for (std::size_t i = 1; i < plan.stages.size(); ++i)
      CHECK(plan.stages[i].domain_measure_value < plan.stages[i - 1].domain_measure_value);
    try {
      nullify_measure(f, Rational(1), {4}, 10, 1);
      FAIL("expected ExponentOrder");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ExponentOrder);
    }
  }

  TEST_CASE("m_a bounds and their combination") {
    PiecewiseDomain null_dom;
    null_dom.intervals.emplace_back(Dyadic(0), Dyadic(0));
    null_dom.sample_points.push_back(Dyadic(0));
    CertifiedMap pt{constant_map(null_dom, Point{D("3/4")}), {}};
    pt.cert.k = 2;
    pt.cert.K = Dyadic(1);
    const MaUpperBound zero = ma_upper({Point{D("3/4")}}, Rational(2), pt);
    CHECK(zero.domain_measure == Dyadic(0));

    const CertifiedMap a = identity_cover(grid(Dyadic(0), D("1/8"), 5));
    const CertifiedMap b = identity_cover(grid(Dyadic(2), D("9/4"), 5));
    const MaUpperBound ma = ma_upper(as_points(a.map.carrier()), Rational(1), a);
    const MaUpperBound mb = ma_upper(as_points(b.map.carrier()), Rational(1), b);
    CHECK(ma.domain_measure == D("1/8"));
    CHECK(mb.domain_measure == D("1/4"));
    const MaCombined c = ma_combine({ma, mb}, 1e-3);
    CHECK(c.bound.domain_measure <= D("3/8"));
    CHECK(c.bound.domain_measure_value <= 3.0 / 8.0 + 1e-3);
    CHECK(c.within);
    CHECK(c.slack_used == doctest::Approx(1e-3 * 0.75));
    CHECK(covers_pieces(c.bound.cover.map, {{a, {}, {}}, {b, {}, {}}}));

    try {
      ma_upper({Point{D("5")}}, Rational(1), a);
      FAIL("expected UncoveredPoint");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UncoveredPoint);
    }
  }

  TEST_CASE("product cover of two Cantor carriers") {
    CantorSpec s;
    s.k = 2;
    s.depth = 2;
    const CertifiedMap A = identity_cover(build_stage(s).domain());
    const ProductCoverResult R = product_cover(A, A);
    CHECK(R.exponent == Rational(2));
    CHECK(R.glued.cert.pass);
    CHECK(R.glued.cert.K == Dyadic(1));
    CHECK(R.image_contains_grid);
    CHECK(R.grid_points == A.map.size() * A.map.size());
    CHECK(R.predictions_hold);
    std::set<Point> image(R.glued.map.values().begin(), R.glued.map.values().end());
    for (const auto& x : A.map.carrier())
      for (const auto& y : A.map.carrier()) CHECK(image.count(Point{x, y}) == 1);
  }
}
