#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gen.hpp"
#include "outerdim/cantor.hpp"
#include "outerdim/error.hpp"

using namespace outerdim;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

CantorStage stage(const Rational& k, int depth) {
  CantorSpec s;
  s.k = k;
  s.depth = depth;
  return build_stage(s);
}

}  // namespace

TEST_SUITE("cantor") {
  TEST_CASE("first stages for k = 2") {
    const CantorStage st = stage(Rational(2), 3);
    REQUIRE(st.at(1).size() == 2);
    CHECK(st.at(1)[0].iv == DyadicInterval(D("1/8"), D("3/8")));
    CHECK(st.at(1)[1].iv == DyadicInterval(D("5/8"), D("7/8")));
    CHECK(st.at(2)[0].iv == DyadicInterval(D("2/16"), D("3/16")));
    CHECK(st.at(2)[1].iv == DyadicInterval(D("5/16"), D("6/16")));
    CHECK(st.sibling_gap(2, 0) == D("2/16"));
    CHECK(st.sibling_gap(3, 0) == D("1/32"));
    CHECK(st.at(2)[1].address() == "12");
  }

  TEST_CASE("inner gaps and measures are exact for dyadic lengths") {
    for (long k = 2; k <= 4; ++k) {
      const CantorStage st = stage(Rational(k), 8);
      for (int s = 2; s <= 8; ++s) {
        const Dyadic expect = Dyadic((1L << k) - 2).ldexp(-k * s);
        const auto& ivs = st.at(s);
        for (std::size_t j = 0; j + 1 < ivs.size(); j += 2) CHECK(ivs[j + 1].iv.lo - ivs[j].iv.hi == expect);
        Dyadic total(0);
        for (const auto& c : ivs) total += c.iv.length();
        CHECK(total == Dyadic(1).ldexp(s - k * s));
        CHECK(*measure_stage(st.spec, s).exact == total);
      }
    }
    // k = 3/2, s = 4: 2^4 2^-6
    CHECK(*measure_stage(stage(Rational(3, 2), 4).spec, 4).exact == D("1/4"));
  }

  TEST_CASE("non-dyadic lengths follow the rounding policy") {
    const Rational k(3, 2);
    const CantorStage st = stage(k, 5);
    for (int s = 1; s <= 5; ++s) {
      const double exact = std::pow(2.0, -1.5 * s);
      const Dyadic len = st.at(s).front().iv.length();
      CHECK(len.to_double() <= exact);
      CHECK(len.to_double() >= exact - std::ldexp(1.0, -static_cast<int>(std::ceil(3.0 * s)) - 8));
      CHECK(exact_length(k, s) == (s % 2 == 0));
    }
  }

  TEST_CASE("nesting and order") {
    gen::Gen g(51);
    const std::vector<Rational> ks = {Rational(3, 2), Rational(2), Rational(5, 2), Rational(3), Rational(9, 8)};
    for (const auto& k : ks) {
      const int depth = static_cast<int>(g.integer(2, 7));
      const CantorStage st = stage(k, depth);
      for (int s = 2; s <= depth; ++s) {
        const auto& up = st.at(s - 1);
        const auto& ivs = st.at(s);
        CHECK(ivs.size() == (std::size_t{1} << s));
        for (std::size_t j = 0; j < ivs.size(); ++j) {
          int parents = 0;
          for (const auto& p : up) parents += p.iv.lo <= ivs[j].iv.lo && ivs[j].iv.hi <= p.iv.hi;
          CHECK(parents == 1);
          if (j) CHECK(ivs[j - 1].iv.hi < ivs[j].iv.lo);
        }
      }
    }
  }

  TEST_CASE("measures decrease with depth") {
    for (const Rational& k : {Rational(3, 2), Rational(2), Rational(101, 100)}) {
      CantorSpec spec;
      spec.k = k;
      spec.depth = 12;
      for (int s = 1; s < 12; ++s) CHECK(measure_stage(spec, s + 1).value < measure_stage(spec, s).value);
    }
  }

  TEST_CASE("reference constant") {
    CHECK(reference_constant(Rational(2)) == doctest::Approx(2.0));
    CHECK(reference_constant(Rational(3)) == doctest::Approx(4.0 / 3.0));
    CHECK(reference_constant(Rational(101, 100)) > 100 * reference_constant(Rational(2)) / 2);
  }

  TEST_CASE("g is anchored, monotone and onto the cell endpoints") {
    const CantorStage st = stage(Rational(2), 4);
    CHECK(eval_g(st, st.last().front().iv.lo) == Dyadic(0));
    CHECK(eval_g(st, st.last().back().iv.hi) == Dyadic(1));
    const CantorStage s1 = stage(Rational(2), 1);
    CHECK(eval_g(s1, D("3/8")) == D("1/2"));
    const CantorStage s2 = stage(Rational(2), 2);
    CHECK(eval_g(s2, D("3/16")) == D("1/4"));

    for (const Rational& k : {Rational(3, 2), Rational(2), Rational(3)}) {
      const int depth = 6;
      const EvaluableMap g = cantor_map(stage(k, depth));
      std::set<Dyadic> image;
      for (std::size_t i = 0; i < g.size(); ++i) {
        image.insert(g.values()[i][0]);
        if (i) CHECK(g.values()[i - 1][0] <= g.values()[i][0]);
      }
      for (long j = 0; j <= (1L << depth); ++j) CHECK(image.count(Dyadic(j).ldexp(-depth)) == 1);
    }
    CHECK_THROWS_AS(eval_g(st, D("1/2")), Error);
  }

  TEST_CASE("worst ratio is nondecreasing in depth") {
    double prev = 0;
    for (int d = 1; d <= 8; ++d) {
      const EvaluableMap g = cantor_map(stage(Rational(2), d));
      const double w = verify_dk(g, Rational(2), Dyadic(2)).worst_ratio;
      CHECK(w >= prev);
      prev = w;
    }
    CHECK(prev == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("csv has one row per deepest interval") {
    const std::string csv = cantor_csv(stage(Rational(2), 3));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "address,lo,hi,gap");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.substr(line.rfind(',') + 1) == "1/2^5");
    }
    CHECK(rows == 8);
  }

  TEST_CASE("invalid specs") {
    CantorSpec s;
    s.k = 1;
    CHECK_THROWS_AS(build_stage(s), Error);
    s.k = 2;
    s.depth = 41;
    CHECK_THROWS_AS(build_stage(s), Error);
    s.depth = 2;
    s.base_cell = DyadicInterval(Dyadic(0), Dyadic(3));
    CHECK_THROWS_AS(build_stage(s), Error);
  }
}
