#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "outerdim/dyadic.hpp"

namespace outerdim {

// Address of a cube in the nested dyadic grid: a unit cube with integer
// corner `base`, refined by `digits` (each in 1..2^n). Digit order within a
// parent is lexicographic by corner: digit - 1 = sum_i bit_i * 2^(n-1-i),
// where bit_i selects the upper half along axis i (axis 0 most significant).
struct CubeAddress {
  int n = 1;
  std::vector<long> base;
  std::vector<std::uint32_t> digits;

  int stage() const { return static_cast<int>(digits.size()); }
  // "n:(b1,...,bn):(d1,...,ds)"
  std::string str() const;
  static CubeAddress parse(std::string_view text);
  friend bool operator==(const CubeAddress&, const CubeAddress&) = default;
};

struct DyadicCube {
  CubeAddress address;
  Point corner;
  Dyadic side;

  int dim() const { return address.n; }
  bool contains(const Point& x) const;
  Point upper_corner() const;
  Point center() const;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

DyadicCube decode(const CubeAddress& address);

// The 2^n children of c, of side c.side / 2, in digit order.
std::vector<DyadicCube> cube_children(const DyadicCube& c);

// Address of a stage-s cube containing x. A point on a cell boundary belongs
// to the containing cube with the smallest corner (chosen per axis, which is
// also the lexicographically smallest candidate).
CubeAddress address_of_point(const Point& x, int stage);

// Per-axis integer cell index at stage s under the same tie-break:
// ceil(x * 2^s) - 1.
mpz_class cell_index(const Dyadic& x, int stage);

}  // namespace outerdim
