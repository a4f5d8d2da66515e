#include "outerdim/glue.hpp"

#include <algorithm>
#include <set>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

constexpr long kSlotBits = 24;
constexpr long kGapBits = 30;

DyadicInterval source_of(const GluePiece& p) {
  DyadicInterval s = p.source ? *p.source : p.f.map.domain().hull();
  if (s.degenerate()) s = DyadicInterval(s.lo, s.lo + Dyadic(1));
  return s;
}

std::pair<Point, Point> box_of(const GluePiece& p) {
  if (p.range_box) return *p.range_box;
  if (p.f.map.size() == 0) fail(ErrorCode::UnboundedPiece, "piece has no range box");
  return p.f.map.range_box();
}

// Squared diameter of the union of two boxes.
Dyadic union_diam2(const std::pair<Point, Point>& a, const std::pair<Point, Point>& b) {
  if (a.first.size() != b.first.size()) fail(ErrorCode::InvalidArgument, "pieces map into different dimensions");
  Dyadic total;
  for (std::size_t i = 0; i < a.first.size(); ++i) {
    Dyadic w = max(a.second[i], b.second[i]) - min(a.first[i], b.first[i]);
    total += w * w;
  }
  return total;
}

GlueLayout plan(const std::vector<GluePiece>& pieces, const Rational& k, bool stretch) {
  if (k <= 0) fail(ErrorCode::InvalidK, "exponent must be positive");
  GlueLayout L;
  L.k = k;
  std::vector<std::pair<Point, Point>> boxes;
  for (const auto& p : pieces) {
    if (p.f.cert.k != k) fail(ErrorCode::InvalidArgument, "all pieces need a certificate at the common exponent");
    boxes.push_back(box_of(p));
  }
  Dyadic x;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) {
      Dyadic d2;
      for (std::size_t j = 0; j < i; ++j) d2 = max(d2, union_diam2(boxes[j], boxes[i]));
      Dyadic gap = (d2.is_zero() ? Dyadic() : pow_ceil(d2, k / 2, kGapBits)) + Dyadic::pow2(-kGapBits);
      L.gaps.push_back(gap);
      x = L.slots.back().hi + gap;
    }
    DyadicInterval src = source_of(pieces[i]);
    Dyadic r(1);
    if (stretch) {
      r = max(pieces[i].f.cert.K, Dyadic(1)).ceil_to(kSlotBits);
    } else if (Dyadic(1) < pieces[i].f.cert.K) {
      fail(ErrorCode::ConstantNotOne, "piece " + std::to_string(i) + " has constant " +
                                          pieces[i].f.cert.K.str() + " > 1");
    }
    L.sources.push_back(src);
    L.scales.push_back(r);
    L.slots.emplace_back(x, x + src.length() * r);
  }
  return L;
}

EvaluableMap assemble(const std::vector<GluePiece>& pieces, const GlueLayout& L, std::vector<CertifiedMap>& placed) {
  PiecewiseDomain dom;
  std::vector<Point> values;
  int n = pieces.empty() ? 1 : pieces.front().f.map.codomain_dim();
  bool all_rules = true;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].f.map.codomain_dim() != n) fail(ErrorCode::InvalidArgument, "pieces map into different dimensions");
    placed.push_back(affine_reparam(pieces[i].f, L.sources[i], L.slots[i]));
    const auto& m = placed.back().map;
    dom.intervals.insert(dom.intervals.end(), m.domain().intervals.begin(), m.domain().intervals.end());
    dom.sample_points.insert(dom.sample_points.end(), m.carrier().begin(), m.carrier().end());
    values.insert(values.end(), m.values().begin(), m.values().end());
    all_rules = all_rules && !m.carrier_only();
  }
  EvaluableMap::Rule rule;
  if (all_rules && !placed.empty()) {
    std::vector<EvaluableMap> maps;
    for (const auto& p : placed) maps.push_back(p.map);
    std::vector<DyadicInterval> slots = L.slots;
    rule = [maps, slots](const Dyadic& t) -> std::optional<Point> {
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].contains(t)) return maps[i].try_eval(t);
      return std::nullopt;
    };
  }
  return EvaluableMap(n, std::move(dom), std::move(values), "glue(" + std::to_string(pieces.size()) + " pieces)",
                      std::move(rule));
}

HolderCertificate finish_cert(const EvaluableMap& map, const Rational& k, bool verify, std::size_t count) {
  HolderCertificate cert;
  if (verify && map.size() >= 2) {
    cert = verify_dk(map, k, Dyadic(1));
  } else {
    cert.k = k;
    cert.K = Dyadic(1);
  }
  cert.note = "finite prefix of " + std::to_string(count) + " pieces";
  return cert;
}

}  // namespace

GlueLayout plan_layout(const std::vector<GluePiece>& pieces, const Rational& k) { return plan(pieces, k, true); }

GlueResult glue(const std::vector<GluePiece>& pieces, const Rational& k, bool verify) {
  GlueLayout L = plan(pieces, k, true);
  std::vector<CertifiedMap> placed;
  EvaluableMap map = assemble(pieces, L, placed);
  HolderCertificate cert = finish_cert(map, k, verify, pieces.size());
  return {std::move(map), std::move(cert), std::move(L)};
}

GlueMeasureResult glue_with_measure(const std::vector<GluePiece>& pieces, const Rational& k, bool verify) {
  GlueLayout L = plan(pieces, k, false);
  std::vector<CertifiedMap> placed;
  EvaluableMap map = assemble(pieces, L, placed);
  MeasureLedger ledger;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    ledger.piece_measures.push_back(pieces[i].f.map.domain().measure());
    ledger.slot_measures.push_back(placed[i].map.domain().measure());
    ledger.bound += ledger.piece_measures.back();
    ledger.total += ledger.slot_measures.back();
  }
  HolderCertificate cert = finish_cert(map, k, verify, pieces.size());
  return {std::move(map), std::move(cert), std::move(L), std::move(ledger)};
}

bool covers_pieces(const EvaluableMap& g, const std::vector<GluePiece>& pieces) {
  std::set<Point> image(g.values().begin(), g.values().end());
  for (const auto& p : pieces)
    for (const auto& v : p.f.map.values())
      if (!image.count(v)) return false;
  return true;
}

std::string layout_csv(const GlueLayout& layout) {
  std::string out = "i,x_i,y_i,gap_i\n";
  for (std::size_t i = 0; i < layout.slots.size(); ++i) {
    out += std::to_string(i + 1) + "," + layout.slots[i].lo.str() + "," + layout.slots[i].hi.str() + ",";
    if (i < layout.gaps.size()) out += layout.gaps[i].str();
    out += "\n";
  }
  return out;
}

}  // namespace outerdim
