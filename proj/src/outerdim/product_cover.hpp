#pragma once

#include <vector>

#include "outerdim/glue.hpp"
#include "outerdim/spacefill.hpp"

namespace outerdim {

struct ProductPiece {
  std::vector<long> delta;  // unit cell of the parameter plane
  CurveState variant;       // root state of the curve used for this piece
  CertifiedMap f;
  Dyadic predicted;         // 2^(e-1) (C1 + C2)
};

struct ProductCoverResult {
  Rational k, t, exponent;  // exponent = k + t
  bool swapped = false;     // the cover with the larger exponent is placed on axis 0
  int a = 1, b = 1;         // curve ratio approximating max(k,t) / min(k,t)
  int curve_depth = 0;
  ComponentCert pi1, pi2;
  std::vector<ProductPiece> pieces;
  GlueResult glued;
  std::size_t grid_points = 0;
  bool image_contains_grid = false;
  bool predictions_hold = true;  // every piece constant <= its predicted constant
};

// Cover of (carrier image of A) x (carrier image of B) at exponent k + t:
// psi(x, y) = (psi_A(x), psi_B(y)) composed with a curve whose components
// have exponents (a+b)/a and (a+b)/b, split over unit cells and curve
// variants, then glued to constant 1.
ProductCoverResult product_cover(const CertifiedMap& A, const CertifiedMap& B);

}  // namespace outerdim
