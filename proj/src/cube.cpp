#include "outerdim/cube.hpp"

#include <sstream>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

std::vector<long> parse_list(std::string_view text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    fail(ErrorCode::Parse, "expected parenthesised list: '" + std::string(text) + "'");
  std::vector<long> out;
  std::string body(text.substr(1, text.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad list entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

std::string CubeAddress::str() const {
  std::string out = std::to_string(n) + ":(";
  for (size_t i = 0; i < base.size(); ++i) out += (i ? "," : "") + std::to_string(base[i]);
  out += "):(";
  for (size_t i = 0; i < digits.size(); ++i) out += (i ? "," : "") + std::to_string(digits[i]);
  return out + ")";
}

CubeAddress CubeAddress::parse(std::string_view text) {
  auto c1 = text.find(':');
  auto c2 = text.find(':', c1 == std::string_view::npos ? 0 : c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos)
    fail(ErrorCode::Parse, "cube address needs 'n:(base):(digits)': '" + std::string(text) + "'");
  CubeAddress a;
  try {
    a.n = std::stoi(std::string(text.substr(0, c1)));
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad dimension in '" + std::string(text) + "'");
  }
  if (a.n < 1 || a.n > 30) fail(ErrorCode::Parse, "dimension out of range");
  a.base = parse_list(text.substr(c1 + 1, c2 - c1 - 1));
  if (static_cast<int>(a.base.size()) != a.n) fail(ErrorCode::Parse, "base has wrong arity");
  for (long d : parse_list(text.substr(c2 + 1))) {
    if (d < 1 || d > (1L << a.n)) fail(ErrorCode::Parse, "digit out of range");
    a.digits.push_back(static_cast<std::uint32_t>(d));
  }
  return a;
}

bool DyadicCube::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] < corner[i] || corner[i] + side < x[i]) return false;
  return true;
}

Point DyadicCube::upper_corner() const {
  Point out = corner;
  for (auto& c : out) c += side;
  return out;
}

Point DyadicCube::center() const {
  Point out = corner;
  Dyadic half = side.ldexp(-1);
  for (auto& c : out) c += half;
  return out;
}

DyadicCube decode(const CubeAddress& address) {
  if (address.n < 1 || static_cast<int>(address.base.size()) != address.n)
    fail(ErrorCode::InvalidArgument, "malformed cube address");
  DyadicCube c;
  c.address = address;
  c.corner.reserve(address.n);
  for (long b : address.base) c.corner.emplace_back(b);
  c.side = Dyadic(1);
  for (std::uint32_t d : address.digits) {
    if (d < 1 || d > (1u << address.n)) fail(ErrorCode::InvalidArgument, "digit out of range");
    c.side = c.side.ldexp(-1);
    std::uint32_t bits = d - 1;
    for (int i = 0; i < address.n; ++i)
      if ((bits >> (address.n - 1 - i)) & 1u) c.corner[i] += c.side;
  }
  return c;
}

std::vector<DyadicCube> cube_children(const DyadicCube& c) {
  const int n = c.dim();
  std::vector<DyadicCube> out;
  out.reserve(std::size_t{1} << n);
  Dyadic half = c.side.ldexp(-1);
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    DyadicCube child;
    child.address = c.address;
    child.address.digits.push_back(bits + 1);
    child.corner = c.corner;
    for (int i = 0; i < n; ++i)
      if ((bits >> (n - 1 - i)) & 1u) child.corner[i] += half;
    child.side = half;
    out.push_back(std::move(child));
  }
  return out;
}

mpz_class cell_index(const Dyadic& x, int stage) {
  Dyadic scaled = x.ldexp(stage);
  mpz_class fl = scaled.floor_scaled(0);
  if (scaled.is_integer()) return fl - 1;
  return fl;
}

CubeAddress address_of_point(const Point& x, int stage) {
  if (stage < 0) fail(ErrorCode::InvalidArgument, "stage must be non-negative");
  if (x.empty()) fail(ErrorCode::InvalidArgument, "point has no coordinates");
  CubeAddress a;
  a.n = static_cast<int>(x.size());
  std::vector<mpz_class> idx;
  idx.reserve(x.size());
  for (const auto& xi : x) idx.push_back(cell_index(xi, stage));
  for (const auto& v : idx) {
    mpz_class b;
    mpz_fdiv_q_2exp(b.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(stage));
    if (!b.fits_slong_p()) fail(ErrorCode::InvalidArgument, "point too far from origin");
    a.base.push_back(b.get_si());
  }
  for (int level = 1; level <= stage; ++level) {
    std::uint32_t bits = 0;
    for (int i = 0; i < a.n; ++i) {
      unsigned long bit = mpz_tstbit(idx[i].get_mpz_t(), static_cast<mp_bitcnt_t>(stage - level));
      bits |= static_cast<std::uint32_t>(bit) << (a.n - 1 - i);
    }
    a.digits.push_back(bits + 1);
  }
  return a;
}

}  // namespace outerdim
