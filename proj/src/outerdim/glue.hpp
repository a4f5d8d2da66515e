#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outerdim/holder.hpp"

namespace outerdim {

struct GluePiece {
  CertifiedMap f;                                  // certificate at the common exponent
  std::optional<DyadicInterval> source;            // [a_i, b_i]; defaults to the domain hull
  std::optional<std::pair<Point, Point>> range_box;  // defaults to the carrier image box
};

struct GlueLayout {
  Rational k;
  std::vector<DyadicInterval> sources;  // [a_i, b_i]
  std::vector<DyadicInterval> slots;    // [x_i, y_i]
  std::vector<Dyadic> scales;           // (y_i - x_i) / (b_i - a_i)
  std::vector<Dyadic> gaps;             // x_{i+1} - y_i
};

// Slot i has length r_i (b_i - a_i) with r_i = max(K_i, 1) rounded up on the
// 2^-24 grid; the gap before slot i+1 is (max_{j<=i} diam(box_j u box_{i+1}))^k
// rounded up on the 2^-30 grid, plus 2^-30.
GlueLayout plan_layout(const std::vector<GluePiece>& pieces, const Rational& k);

struct GlueResult {
  EvaluableMap map;
  HolderCertificate cert;
  GlueLayout layout;
};

// One map with constant 1 at exponent k. When `verify` is set the result is
// checked on every carrier pair.
GlueResult glue(const std::vector<GluePiece>& pieces, const Rational& k, bool verify = true);

struct MeasureLedger {
  std::vector<Dyadic> piece_measures;  // meas(B_i)
  std::vector<Dyadic> slot_measures;   // measure of the placed domain in slot i
  Dyadic total;                        // sum of slot measures
  Dyadic bound;                        // sum of piece measures
};

struct GlueMeasureResult {
  EvaluableMap map;
  HolderCertificate cert;
  GlueLayout layout;
  MeasureLedger ledger;
};

// Pieces must have constant <= 1; slots are not stretched.
GlueMeasureResult glue_with_measure(const std::vector<GluePiece>& pieces, const Rational& k, bool verify = true);

// Every carrier image of every piece appears among the carrier images of g.
bool covers_pieces(const EvaluableMap& g, const std::vector<GluePiece>& pieces);

// "i,x_i,y_i,gap_i" rows; the last gap is empty.
std::string layout_csv(const GlueLayout& layout);

}  // namespace outerdim
