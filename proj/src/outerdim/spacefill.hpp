#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outerdim/holder.hpp"

namespace outerdim {

inline Rational reduced(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Per refinement step the first p axes split into 2^a parts, the remaining
// n - p axes into 2^b parts, and the parameter into 2^(pa + (n-p)b) parts.
struct CurveSpec {
  int n = 2;
  int p = 1;
  int a = 1;
  int b = 1;
  Rational k_requested{1};  // the ratio a:b approximates this value

  int bits(int axis) const { return axis < p ? a : b; }
  int step_bits() const { return p * a + (n - p) * b; }
  Rational exponent_first() const { return reduced(step_bits(), a); }   // (pk + n - p) / k
  Rational exponent_second() const { return reduced(step_bits(), b); }  // pk + n - p
  void validate() const;
};

// a:b for k: exact when k = a/b with a + b <= 10, otherwise the coprime ratio
// with the smallest denominator in [k, k + 1e-3).
std::pair<int, int> ratio_for(const Rational& k);

// A mask has bit i set for the upper side along axis i. The curve of state
// (mask, g) enters its cell at corner `mask` and leaves at corner
// mask ^ (1 << g).
struct CurveState {
  unsigned mask = 0;
  int g = 0;
  friend bool operator==(const CurveState&, const CurveState&) = default;
};

struct PatternChild {
  std::vector<int> cell;  // child cell coordinates in the canonical frame
  unsigned entry = 0;     // entry corner of the child
  int g = 0;              // exit axis of the child
};

struct CurveCarrier {
  std::vector<std::int64_t> coords;  // (count x n), integer lattice coordinates
  std::size_t count = 0;
};

class Curve {
 public:
  Curve(const CurveSpec& spec, CurveState root = {});

  const CurveSpec& spec() const { return spec_; }
  CurveState root() const { return root_; }
  Curve with_root(CurveState root) const;
  const std::vector<PatternChild>& pattern(int g) const { return patterns_[g]; }
  std::uint64_t children() const { return std::uint64_t{1} << spec_.step_bits(); }

  // Child i of a cell in state s: reflected cell offset and child state.
  void child(const CurveState& s, std::size_t i, std::vector<int>& cell, CurveState& out) const;

  // Entry corners of the N^d depth-d cells followed by the exit corner, in
  // lattice units 2^-(bits(i) d) per axis.
  CurveCarrier carrier(int depth) const;
  // Lower corners of the depth-d cells in visiting order.
  CurveCarrier cells(int depth) const;
  // Exact image of t = index / N^depth.
  Point eval_index(std::uint64_t index, int depth) const;
  // Corner of the depth-d box containing t (the entry corner, or the exit
  // corner at t = 1) and the box diameter.
  std::pair<Point, double> eval(const Dyadic& t, int depth) const;

  // Dyadic t with f(t) = u, searched down to `max_depth`; u in [0,1]^n.
  std::optional<Dyadic> preimage(const Point& u, int max_depth) const;

  EvaluableMap as_map(int depth, const std::vector<int>& axes) const;

 private:
  CurveSpec spec_;
  CurveState root_;
  std::vector<std::vector<PatternChild>> patterns_;
};

struct VisitReport {
  bool onto = true;       // every depth-d cell exactly once
  bool adjacent = true;   // consecutive cells share a face
  std::uint64_t cells = 0;
};
VisitReport check_visits(const Curve& curve, int depth);

struct ComponentCert {
  std::vector<int> axes;
  Rational exponent;
  int depth = 0;
  double constant = 0.0;                 // max over depth-d carrier pairs
  std::pair<Dyadic, Dyadic> worst_pair;  // parameters of a maximizing pair
  std::uint64_t nodes = 0;               // pair classes expanded
};

// Exact carrier maximum of |pi(t)-pi(t')|^exponent / |t - t'| at depth d by
// branch and bound over pair classes, reusing the per-state maxima of
// shallower depths (the ratio is invariant under the curve's self-similarity).
ComponentCert component_constant(const Curve& curve, const std::vector<int>& axes, const Rational& exponent,
                                 int depth);

// Same quantity by enumerating all carrier pairs (small depths only).
double component_constant_bruteforce(const Curve& curve, const std::vector<int>& axes, const Rational& exponent,
                                     int depth);

// "t,x_1,..,x_n" rows for the depth-d polyline.
std::string polyline_csv(const Curve& curve, int depth);

}  // namespace outerdim
