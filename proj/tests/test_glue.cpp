#include <doctest.h>

#include "gen.hpp"
#include "outerdim/cantor.hpp"
#include "outerdim/error.hpp"
#include "outerdim/glue.hpp"

using namespace outerdim;

namespace {

Dyadic D(const char* s) { return Dyadic::parse(s); }

GluePiece identity_piece(const Dyadic& lo, const Dyadic& hi, int bits, const Rational& k) {
  PiecewiseDomain dom;
  dom.intervals.emplace_back(lo, hi);
  for (Dyadic t = lo; t <= hi; t += Dyadic::pow2(-bits)) dom.sample_points.push_back(t);
  GluePiece p;
  p.f.map = identity_map(dom);
  p.f.cert = verify_dk(p.f.map, k, Dyadic(1));
  return p;
}

GluePiece cantor_piece(const Rational& k, int depth) {
  CantorSpec s;
  s.k = k;
  s.depth = depth;
  GluePiece p;
  p.f.map = cantor_map(build_stage(s));
  p.f.cert = estimate_constant(p.f.map, k);
  return p;
}

}  // namespace

TEST_SUITE("glue") {
  TEST_CASE("single constant-one piece is only relabeled") {
    const GluePiece p = identity_piece(Dyadic(0), Dyadic(1), 4, Rational(1));
    const GlueResult r = glue({p}, Rational(1));
    REQUIRE(r.layout.slots.size() == 1);
    CHECK(r.layout.slots[0] == DyadicInterval(Dyadic(0), Dyadic(1)));
    CHECK(r.layout.gaps.empty());
    CHECK(r.map.carrier() == p.f.map.carrier());
    CHECK(r.map.values() == p.f.map.values());
    CHECK(r.cert.pass);
  }

  TEST_CASE("two identity pieces at exponent one need a gap above one") {
    const GluePiece p = identity_piece(Dyadic(0), Dyadic(1), 3, Rational(1));
    const GlueLayout L = plan_layout({p, p}, Rational(1));
    REQUIRE(L.gaps.size() == 1);
    CHECK(L.gaps[0] > Dyadic(1));
    CHECK(L.slots[1].lo - L.slots[0].hi == L.gaps[0]);
    const GlueResult r = glue({p, p}, Rational(1));
    CHECK(r.cert.pass);
    CHECK(r.cert.worst_ratio <= 1.0);
  }

  TEST_CASE("cantor pieces with constant above one are stretched") {
    const GluePiece p = cantor_piece(Rational(2), 5);
    const Dyadic K = p.f.cert.K;
    REQUIRE(K > Dyadic(1));
    const GlueResult r = glue({p, p, p}, Rational(2));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(r.layout.slots[i].length() >= K * r.layout.sources[i].length());
      if (i) CHECK(r.layout.slots[i - 1].hi < r.layout.slots[i].lo);
    }
    // union box [0,1]: gap above 1^2
    for (const auto& g : r.layout.gaps) CHECK(g > Dyadic(1));
    CHECK(r.cert.pass);
    CHECK(r.cert.mode == VerifyMode::EndpointExhaustive);
    CHECK(verify_dk(r.map, Rational(2), Dyadic(1)).violations == 0);
  }

  TEST_CASE("random pieces glue to constant one and are covered") {
    gen::Gen g(71);
    for (int trial = 0; trial < 6; ++trial) {
      const Rational k = g.pick<Rational>({Rational(3, 2), Rational(2), Rational(3)});
      std::vector<GluePiece> pieces;
      const int count = static_cast<int>(g.integer(1, 4));
      for (int i = 0; i < count; ++i) {
        if (g.coin()) {
          pieces.push_back(cantor_piece(k, static_cast<int>(g.integer(2, 5))));
        } else {
          const Dyadic lo = Dyadic(g.integer(-4, 4)).ldexp(-2);
          GluePiece p = identity_piece(lo, lo + Dyadic(1).ldexp(-static_cast<int>(g.integer(0, 2))), 3, k);
          p.f.cert = estimate_constant(p.f.map, k);
          pieces.push_back(p);
        }
      }
      const GlueResult r = glue(pieces, k);
      CHECK(r.cert.pass);
      CHECK(r.cert.K == Dyadic(1));
      CHECK(covers_pieces(r.map, pieces));
      std::size_t total = 0;
      for (const auto& p : pieces) total += p.f.map.size();
      CHECK(r.map.size() == total);
      CHECK(r.layout.slots.front().lo == Dyadic(0));
    }
  }

  TEST_CASE("measure ledger for pieces of measure 1/8 and 1/4") {
    GluePiece a;
    a.f = affine_reparam(cantor_piece(Rational(2), 3).f, DyadicInterval(Dyadic(0), Dyadic(1)),
                         DyadicInterval(Dyadic(0), Dyadic(2)));  // measure 2 * 2^3 2^-6
    GluePiece b = identity_piece(Dyadic(0), D("1/8"), 5, Rational(2));
    REQUIRE(a.f.map.domain().measure() == D("1/4"));
    REQUIRE(a.f.cert.K <= Dyadic(1));
    REQUIRE(verify_dk(a.f.map, Rational(2), Dyadic(1)).pass);
    REQUIRE(b.f.cert.pass);

    const GlueMeasureResult r = glue_with_measure({a, b}, Rational(2));
    CHECK(r.ledger.total == D("3/8"));
    CHECK(r.ledger.bound == D("3/8"));
    CHECK(r.map.domain().measure() == D("3/8"));
    CHECK(r.cert.pass);
    for (std::size_t i = 0; i < 2; ++i) CHECK(r.layout.slots[i].length() == r.layout.sources[i].length());

    const GlueMeasureResult none = glue_with_measure({}, Rational(2));
    CHECK(none.ledger.total == Dyadic(0));
  }

  TEST_CASE("ledger equals the sum of slot measures") {
    gen::Gen g(72);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<GluePiece> pieces;
      for (int i = 0, n = static_cast<int>(g.integer(1, 5)); i < n; ++i) {
        const Dyadic lo = Dyadic(g.integer(0, 8)).ldexp(-3);
        pieces.push_back(identity_piece(lo, lo + Dyadic(1).ldexp(-static_cast<int>(g.integer(1, 3))), 4, Rational(1)));
      }
      const GlueMeasureResult r = glue_with_measure(pieces, Rational(1));
      Dyadic sum;
      for (const auto& m : r.ledger.slot_measures) sum += m;
      CHECK(r.ledger.total == sum);
      CHECK(r.ledger.total == r.ledger.bound);
      CHECK(r.cert.pass);
    }
  }

  TEST_CASE("errors") {
    const GluePiece p = cantor_piece(Rational(2), 4);
    CHECK_THROWS_AS(glue_with_measure({p}, Rational(2)), Error);
    try {
      glue_with_measure({p}, Rational(2));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConstantNotOne);
    }
    GluePiece empty;
    empty.f.cert.k = 2;
    try {
      plan_layout({empty}, Rational(2));
      FAIL("expected UnboundedPiece");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnboundedPiece);
    }
    CHECK_THROWS_AS(glue({p}, Rational(3)), Error);
  }

  TEST_CASE("layout csv") {
    const GluePiece p = identity_piece(Dyadic(0), Dyadic(1), 2, Rational(1));
    const std::string csv = layout_csv(plan_layout({p, p}, Rational(1)));
    CHECK(csv.rfind("i,x_i,y_i,gap_i\n1,0/2^0,1/2^0,", 0) == 0);
    CHECK(csv.substr(csv.size() - 2) == ",\n");
  }
}
