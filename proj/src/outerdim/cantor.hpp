#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "outerdim/dyadic.hpp"
#include "outerdim/holder.hpp"
#include "outerdim/realcmp.hpp"

namespace outerdim {

struct CantorSpec {
  Rational k{2};
  int depth = 1;
  DyadicInterval base_cell{Dyadic(0), Dyadic(1)};  // length must be a power of two

  void validate() const;
};

struct CantorInterval {
  std::vector<std::uint8_t> digits;  // i_1..i_s, each 1 or 2
  DyadicInterval iv;
  std::string address() const;       // "121"
};

// All stages 1..depth of the construction. Stage s has 2^s intervals of
// length 2^(-ks) (times the base length); non-dyadic lengths are rounded down
// on a 2^-(ceil(2ks) + 8) grid.
struct CantorStage {
  CantorSpec spec;
  std::vector<std::vector<CantorInterval>> stages;  // stages[s - 1]

  const std::vector<CantorInterval>& last() const { return stages.back(); }
  const std::vector<CantorInterval>& at(int s) const;
  // Gap between the two children of one parent at stage s (s >= 2), or
  // between the two stage-1 intervals.
  Dyadic sibling_gap(int s, std::size_t index) const;
  // Sorted endpoints of the deepest stage.
  std::vector<Dyadic> carrier() const;
  PiecewiseDomain domain() const;
};

// Interval length at stage s on the unit base cell.
Dyadic stage_length(const Rational& k, int s);
// True when 2^(-ks) is exactly dyadic.
bool exact_length(const Rational& k, int s);

CantorStage build_stage(const CantorSpec& spec);

struct StageMeasure {
  std::optional<Dyadic> exact;  // present when ks is an integer
  double value = 0.0;
};
// 2^s * 2^(-ks) times the base length.
StageMeasure measure_stage(const CantorSpec& spec, int s);

// 2^k / (2^k - 2).
double reference_constant(const Rational& k);

// Endpoint of the image cell Q matching the carrier point x.
Dyadic eval_g(const CantorStage& stage, const Dyadic& x);

// g as a carrier-only map on the deepest stage.
EvaluableMap cantor_map(const CantorStage& stage);

// CSV rows "address,lo,hi,gap" for the deepest stage.
std::string cantor_csv(const CantorStage& stage);

}  // namespace outerdim
