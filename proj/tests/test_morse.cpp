#include <doctest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "outerdim/error.hpp"
#include "outerdim/morse_sard.hpp"

using namespace outerdim;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

// Singular values of a 2x2 matrix in closed form.
std::pair<double, double> sv2(double a, double b, double c, double d) {
  const double s1 = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4 * det * det));
  return {std::sqrt((s1 + disc) / 2), std::sqrt(std::max(0.0, (s1 - disc) / 2))};
}

std::vector<Dyadic> dyadic_grid(const Dyadic& lo, const Dyadic& hi, int bits) {
  std::vector<Dyadic> out;
  for (Dyadic t = lo; t <= hi; t += Dyadic::pow2(-bits)) out.push_back(t);
  return out;
}

}  // namespace

TEST_SUITE("morse-sard") {
  TEST_CASE("zoo jacobians agree with finite differences") {
    gen::Gen g(101);
    CHECK(zoo().size() == 6);
    for (const auto& f : zoo()) {
      for (int i = 0; i < 25; ++i) {
        Vec x;
        for (int j = 0; j < f.n; ++j) x.push_back(2 * g.unit() - 1);
        CHECK_MESSAGE(jacobian_consistent(f, x), f.name);
      }
    }
    SmoothFunction bad = zoo_function("paraboloid");
    bad.DF = [](const Vec& x) { return Mat{{2 * x[0], 3 * x[1]}}; };
    CHECK_FALSE(jacobian_consistent(bad, {0.5, 0.5}));
    CHECK_THROWS_AS(zoo_function("nope"), Error);
  }

  TEST_CASE("singular values against the closed form") {
    gen::Gen g(102);
    for (int i = 0; i < 500; ++i) {
      const double a = 2 * g.unit() - 1, b = 2 * g.unit() - 1, c = 2 * g.unit() - 1, d = 2 * g.unit() - 1;
      const Vec s = singular_values({{a, b}, {c, d}});
      const auto [s1, s2] = sv2(a, b, c, d);
      REQUIRE(s.size() == 2);
      CHECK(s[0] == doctest::Approx(s1).epsilon(1e-10));
      CHECK(s[1] == doctest::Approx(s2).epsilon(1e-8).scale(1.0));
    }
    const Vec row = singular_values({{3.0, 4.0}});
    REQUIRE(row.size() == 1);
    CHECK(row[0] == doctest::Approx(5.0));
    const Vec col = singular_values({{3.0}, {4.0}});
    CHECK(col[0] == doctest::Approx(5.0));
  }

  TEST_CASE("critical sets of the closed-form examples") {
    const CriticalSample para = critical_values_sample(zoo_function("paraboloid"), 0, 64);
    REQUIRE(para.points.size() == 1);
    CHECK(para.points[0] == Vec{0.0, 0.0});
    CHECK(para.images[0] == Point{Dyadic(0)});

    const CriticalSample cyl = critical_values_sample(zoo_function("cylinder"), 0, 64);
    CHECK(cyl.points.size() == 65);
    for (const auto& x : cyl.points) CHECK(x[0] == 0.0);
    for (const auto& y : cyl.images) CHECK(y == Point{Dyadic(0)});

    // rank 1 everywhere except x = 0 on a 2 -> 1 map: every point has rank <= 1
    const CriticalSample all = critical_values_sample(zoo_function("saddle"), 1, 64);
    CHECK(all.points.size() == 65 * 65);

    const CriticalSample fold = critical_values_sample(zoo_function("fold"), 1, 64);
    CHECK(fold.points.size() == 65);
    for (const auto& x : fold.points) CHECK(x[1] == 0.0);

    CHECK_THROWS_AS(critical_values_sample(zoo_function("paraboloid"), 0, 16), Error);
  }

  TEST_CASE("bound formula") {
    CHECK(p9_bound(2, 1, 0, 2) == doctest::Approx(1.0));
    CHECK(p9_bound(1, 1, 0, 1.9) == doctest::Approx(1.0 / 1.9));
    CHECK(p9_bound(3, 3, 1, 2) == doctest::Approx(2.0));
    CHECK(p9_bound(2, 2, 2, 5) == doctest::Approx(2.0));
    // strictly decreasing in k + lambda while the min is not m
    double prev = INFINITY;
    for (double kl = 1.0; kl <= 6.0; kl += 0.25) {
      const double b = p9_bound(3, 5, 1, kl);
      CHECK(b < prev);
      prev = b;
    }
  }

  TEST_CASE("Federer consistency on the zoo") {
    for (const auto& f : zoo()) {
      for (int p = 0; p < std::min(f.n, f.m + 1); ++p) {
        const CriticalSample s = critical_values_sample(f, p, 64);
        const BoundReport r = check_bound_p9(s, f.n, f.m, p, f.k, f.lambda);
        CHECK_MESSAGE(r.pass, f.name << " p=" << p << " estimate " << r.estimate << " bound " << r.bound);
      }
    }
    CriticalSample empty;
    const BoundReport t = check_bound_p9(empty, 2, 1, 0, 2, 0);
    CHECK(t.trivial);
    CHECK(t.pass);
  }

  TEST_CASE("flat points of the polynomial examples") {
    const std::vector<Dyadic> xs = dyadic_grid(D("-1/2"), D("1/2"), 8);
    const FlatReport cube = flat_set_image_check(zoo_function("cubic"), 2, 0, xs, {}, 1e-6);
    CHECK(cube.flat_points == 1);
    CHECK(cube.violations == 0);
    CHECK(cube.pass);

    const FlatReport sq = flat_set_image_check(zoo_function("square"), 1, 1, xs, {}, 1e-6);
    CHECK(sq.flat_points == 1);
    CHECK(sq.image_dim == 0.0);
    CHECK(sq.pass);

    // with pairs: |x^3 - y^3| <= M |x - y|^2 fails off the flat set, so only 0 counts
    const FlatReport loose = flat_set_image_check(zoo_function("cubic"), 2, 0, xs, {}, 1.0);
    CHECK(loose.flat_points > 1);
  }

  TEST_CASE("synthesized function interpolates the value carrier") {
    for (const auto& [kv, k] : std::vector<std::pair<Rational, Rational>>{
             {Rational(2), Rational(3, 2)}, {Rational(2), Rational(1)}, {Rational(3), Rational(2)}}) {
      const int depth = 5;
      const SynthesizedFunction f(kv, k, depth);
      CHECK(f.k_dom() == 1 + (kv - k) / 2);
      CantorSpec vs;
      vs.k = kv;
      vs.depth = depth;
      const std::vector<Dyadic> target = build_stage(vs).carrier();
      std::set<Dyadic> values(f.knot_values().begin(), f.knot_values().end());
      for (const auto& y : target) CHECK(values.count(y) == 1);
      for (std::size_t i = 0; i < f.knots().size(); ++i) {
        CHECK(Dyadic::from_double(f(f.knots()[i].to_double())) == f.knot_values()[i]);
        CHECK(f.derivative(f.knots()[i].to_double()) == 0.0);
        if (i) {
          CHECK(f.knots()[i - 1] < f.knots()[i]);
          CHECK(f.knot_values()[i - 1] <= f.knot_values()[i]);
        }
      }
      // monotone between knots and constant outside the hull
      double prev = f(-1.0);
      for (int i = 0; i <= 4096; ++i) {
        const double v = f(i / 4096.0);
        CHECK(v >= prev - 1e-15);
        prev = v;
      }
      CHECK(f(-0.5) == f(f.knots().front().to_double()));
      CHECK(f(1.5) == f(f.knots().back().to_double()));
    }
  }

  TEST_CASE("synthesized function certificates") {
    const SynthReport r = SynthesizedFunction(Rational(2), Rational(3, 2), 6).verify();
    CHECK(r.exact_values);
    CHECK(r.flat_ok);
    CHECK(r.max_flat_derivative <= r.flat_tolerance);
    CHECK(r.holder_ok);
    CHECK(r.holder_exponent >= 0.45);

    const SynthReport one = SynthesizedFunction(Rational(2), Rational(1), 5).verify();
    CHECK(one.exact_values);
    CHECK(one.flat_ok);
    CHECK(one.holder_ok);
  }

  TEST_CASE("critical values of the synthesized function") {
    const SynthesizedFunction f(Rational(2), Rational(3, 2), 4);
    const SmoothFunction s = f.as_smooth();
    std::vector<Vec> extra;
    for (const auto& x : f.knots()) extra.push_back({x.to_double()});
    const CriticalSample cs = critical_values_sample(s, 0, 64, extra);
    std::set<Point> imgs(cs.images.begin(), cs.images.end());
    for (const auto& y : f.knot_values()) CHECK(imgs.count(Point{y}) == 1);
  }

  TEST_CASE("single point target") {
    const SynthesizedFunction f = SynthesizedFunction::single_point(D("3/8"));
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 0.375);
    CHECK(f.derivative(0.0) == 0.0);
    CHECK(f.derivative(1.0) == 0.0);
    CHECK(f.derivative(0.5) == doctest::Approx(0.375 * 15.0 / 8.0));
  }

  TEST_CASE("infeasible requests") {
    try {
      SynthesizedFunction(Rational(2), Rational(2), 4);
      FAIL("expected Infeasible");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Infeasible);
    }
    CHECK_THROWS_AS(SynthesizedFunction(Rational(2), Rational(1, 2), 4), Error);
    CHECK_THROWS_AS(SynthesizedFunction(Rational(2), Rational(3, 2), 0), Error);
  }

  TEST_CASE("sample csv") {
    const std::string csv = SynthesizedFunction(Rational(2), Rational(3, 2), 3).samples_csv(4);
    CHECK(csv.rfind("x,f,df\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17);
  }
}
