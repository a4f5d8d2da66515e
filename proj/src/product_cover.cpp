#include "outerdim/product_cover.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "outerdim/cube.hpp"
#include "outerdim/error.hpp"

namespace outerdim {

namespace {

struct Entry {
  Dyadic tau;
  Point value;
};

}  // namespace

ProductCoverResult product_cover(const CertifiedMap& A, const CertifiedMap& B) {
  if (A.map.size() == 0 || B.map.size() == 0) fail(ErrorCode::EmptyDomain, "product cover needs non-empty carriers");
  ProductCoverResult R;
  R.k = A.cert.k;
  R.t = B.cert.k;
  R.exponent = R.k + R.t;
  R.swapped = R.k < R.t;
  const CertifiedMap& F = R.swapped ? B : A;  // larger exponent, axis 0
  const CertifiedMap& S = R.swapped ? A : B;
  auto [a, b] = ratio_for(F.cert.k / S.cert.k);
  R.a = a;
  R.b = b;

  CurveSpec spec;
  spec.n = 2;
  spec.p = 1;
  spec.a = a;
  spec.b = b;
  spec.k_requested = F.cert.k / S.cert.k;
  const Curve base(spec);

  std::vector<Curve> variants;
  for (unsigned m = 0; m < 4; ++m)
    for (int g = 0; g < 2; ++g) variants.push_back(base.with_root({m, g}));

  // (delta, variant) -> entries
  std::map<std::pair<std::vector<long>, std::size_t>, std::vector<Entry>> groups;
  std::vector<Point> grid_values;
  const int max_levels = 62 / spec.step_bits();
  int deepest = 0;
  for (std::size_t i = 0; i < F.map.size(); ++i) {
    for (std::size_t j = 0; j < S.map.size(); ++j) {
      const Dyadic& x = F.map.carrier()[i];
      const Dyadic& y = S.map.carrier()[j];
      CubeAddress delta = address_of_point({x, y}, 0);
      Point u{x - Dyadic(delta.base[0]), y - Dyadic(delta.base[1])};
      int need = static_cast<int>(std::max((u[0].exponent() + a - 1) / a, (u[1].exponent() + b - 1) / b));
      int max_depth = std::min(need + 8, max_levels);
      std::optional<Dyadic> tau;
      std::size_t v = 0;
      for (; v < variants.size(); ++v)
        if ((tau = variants[v].preimage(u, max_depth))) break;
      if (!tau) fail(ErrorCode::UncoveredPoint, "no dyadic curve parameter reaches (" + x.str() + ", " + y.str() + ")");
      deepest = std::max<int>(deepest, static_cast<int>((tau->exponent() + spec.step_bits() - 1) / spec.step_bits()));
      const Point& fa = F.map.values()[i];
      const Point& sb = S.map.values()[j];
      Point value;
      const Point& first = R.swapped ? sb : fa;
      const Point& second = R.swapped ? fa : sb;
      value.insert(value.end(), first.begin(), first.end());
      value.insert(value.end(), second.begin(), second.end());
      grid_values.push_back(value);
      groups[{delta.base, v}].push_back({*tau, std::move(value)});
    }
  }
  R.grid_points = grid_values.size();
  R.curve_depth = std::max(deepest, 1);
  R.pi1 = component_constant(base, {0}, spec.exponent_first(), R.curve_depth);
  R.pi2 = component_constant(base, {1}, spec.exponent_second(), R.curve_depth);

  // 2^(e-1) (K_F^k1 K_pi1 + K_S^k2 K_pi2)
  const Dyadic c1 = pow_ceil(F.cert.K, spec.exponent_first(), 40) * safe_constant(R.pi1.constant);
  const Dyadic c2 = pow_ceil(S.cert.K, spec.exponent_second(), 40) * safe_constant(R.pi2.constant);
  const Dyadic lead = pow_ceil(Dyadic(2), R.exponent - 1, 40);

  const int codim = F.map.codomain_dim() + S.map.codomain_dim();
  std::vector<GluePiece> glue_pieces;
  for (auto& [key, entries] : groups) {
    std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.tau < r.tau; });
    PiecewiseDomain dom;
    dom.intervals.emplace_back(entries.front().tau, entries.back().tau);
    std::vector<Point> values;
    for (auto& e : entries) {
      dom.sample_points.push_back(e.tau);
      values.push_back(e.value);
    }
    const CurveState vs = variants[key.second].root();
    std::string name = "product-piece(delta=(" + std::to_string(key.first[0]) + "," + std::to_string(key.first[1]) +
                       "),variant=(" + std::to_string(vs.mask) + "," + std::to_string(vs.g) + "))";
    EvaluableMap m(codim, std::move(dom), std::move(values), name);
    HolderCertificate cert;
    if (m.size() >= 2) {
      cert = estimate_constant(m, R.exponent, R.curve_depth);
    } else {
      cert.k = R.exponent;
      cert.K = Dyadic(1);
    }
    ProductPiece piece{key.first, vs, {std::move(m), cert}, lead * (c1 + c2)};
    if (piece.predicted < piece.f.cert.K && !(piece.f.cert.worst_ratio <= piece.predicted.to_double()))
      R.predictions_hold = false;
    glue_pieces.push_back({piece.f, std::nullopt, std::nullopt});
    R.pieces.push_back(std::move(piece));
  }

  R.glued = glue(glue_pieces, R.exponent, true);
  std::set<Point> image(R.glued.map.values().begin(), R.glued.map.values().end());
  R.image_contains_grid = std::all_of(grid_values.begin(), grid_values.end(),
                                      [&](const Point& v) { return image.count(v) > 0; });
  return R;
}

}  // namespace outerdim
