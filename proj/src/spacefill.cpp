#include "outerdim/spacefill.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "outerdim/error.hpp"

namespace outerdim {

namespace {

constexpr int kMaxDim = 8;
constexpr int kMaxStepBits = 12;
constexpr std::uint64_t kSearchBudget = 2'000'000;

using Coords = std::array<std::int64_t, kMaxDim>;

}  // namespace

void CurveSpec::validate() const {
  if (n < 1 || n > kMaxDim) fail(ErrorCode::InvalidArgument, "curve dimension must be in 1..8");
  if (a < 1 || b < 1) fail(ErrorCode::InvalidRatio, "ratio parts must be positive");
  if (std::gcd(a, b) != 1) fail(ErrorCode::InvalidRatio, "ratio parts must be coprime");
  if (n == 1) {
    if (p != 1) fail(ErrorCode::InvalidArgument, "split index must be 1 for n = 1");
  } else if (p < 1 || p > n) {
    fail(ErrorCode::InvalidArgument, "split index must satisfy 1 <= p <= n");
  }
  if (step_bits() > kMaxStepBits) fail(ErrorCode::InvalidRatio, "ratio too fine: refinement step exceeds 2^12 cells");
}

std::pair<int, int> ratio_for(const Rational& k) {
  if (k <= 0) fail(ErrorCode::InvalidRatio, "ratio must be positive");
  if (k.get_num() + k.get_den() <= 10) return {static_cast<int>(k.get_num().get_si()), static_cast<int>(k.get_den().get_si())};
  const Rational hi = k + Rational(1, 1000);
  for (long den = 1; den <= 1000; ++den) {
    mpz_class num;
    Rational scaled = k * den;
    mpz_cdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Rational cand(num, den);
    cand.canonicalize();
    if (cand < hi && cand >= k && cand.get_den() == den && num.fits_sint_p())
      return {static_cast<int>(num.get_si()), static_cast<int>(den)};
  }
  fail(ErrorCode::InvalidRatio, "no ratio a:b found in [k, k + 1e-3)");
}

namespace {

// Hamiltonian path over the child grid from the origin corner to the corner
// 2^bits(g) e_g, entering and leaving every child at adjacent corners.
std::vector<PatternChild> find_pattern(const CurveSpec& spec, int g) {
  const int n = spec.n;
  std::vector<int> dims(n);
  for (int i = 0; i < n; ++i) dims[i] = 1 << spec.bits(i);
  const std::size_t total = std::size_t{1} << spec.step_bits();
  auto flat = [&](const std::vector<int>& c) {
    std::size_t f = 0;
    for (int i = 0; i < n; ++i) f = f * dims[i] + c[i];
    return f;
  };
  std::vector<int> target(n, 0);
  target[g] = dims[g];

  std::vector<char> used(total, 0);
  std::vector<PatternChild> path;
  std::uint64_t budget = kSearchBudget;

  std::function<bool(const std::vector<int>&, unsigned)> rec = [&](const std::vector<int>& cell, unsigned entry) {
    if (budget == 0) return false;
    --budget;
    for (int ax = 0; ax < n; ++ax) {
      unsigned exit_mask = entry ^ (1u << ax);
      std::vector<int> ex(n);
      for (int i = 0; i < n; ++i) ex[i] = cell[i] + static_cast<int>((exit_mask >> i) & 1u);
      if (path.size() + 1 == total) {
        if (ex == target) {
          path.push_back({cell, entry, ax});
          return true;
        }
        continue;
      }
      for (int d = 0; d < n; ++d) {
        for (int sgn : {-1, 1}) {
          std::vector<int> nc = cell;
          nc[d] += sgn;
          if (nc[d] < 0 || nc[d] >= dims[d]) continue;
          if (used[flat(nc)]) continue;
          unsigned ne = 0;
          bool corner = true;
          for (int i = 0; i < n; ++i) {
            int off = ex[i] - nc[i];
            if (off != 0 && off != 1) corner = false;
            ne |= static_cast<unsigned>(off & 1) << i;
          }
          if (!corner) continue;
          used[flat(nc)] = 1;
          path.push_back({cell, entry, ax});
          if (rec(nc, ne)) return true;
          path.pop_back();
          used[flat(nc)] = 0;
        }
      }
    }
    return false;
  };
  std::vector<int> start(n, 0);
  used[0] = 1;
  if (!rec(start, 0u))
    fail(ErrorCode::InvalidRatio, "no face-adjacent child ordering found for this ratio");
  return path;
}

}  // namespace

Curve::Curve(const CurveSpec& spec, CurveState root) : spec_(spec), root_(root) {
  spec_.validate();
  if (root_.g < 0 || root_.g >= spec_.n || root_.mask >= (1u << spec_.n))
    fail(ErrorCode::InvalidArgument, "bad root state");
  for (int g = 0; g < spec_.n; ++g) patterns_.push_back(find_pattern(spec_, g));
}

Curve Curve::with_root(CurveState root) const {
  Curve c = *this;
  if (root.g < 0 || root.g >= spec_.n || root.mask >= (1u << spec_.n))
    fail(ErrorCode::InvalidArgument, "bad root state");
  c.root_ = root;
  return c;
}

void Curve::child(const CurveState& s, std::size_t i, std::vector<int>& cell, CurveState& out) const {
  const PatternChild& pc = patterns_[s.g][i];
  cell.resize(spec_.n);
  for (int ax = 0; ax < spec_.n; ++ax) {
    int size = 1 << spec_.bits(ax);
    cell[ax] = ((s.mask >> ax) & 1u) ? size - 1 - pc.cell[ax] : pc.cell[ax];
  }
  out.mask = pc.entry ^ s.mask;
  out.g = pc.g;
}

namespace {

// Flattened child table: for each state, child offsets and child states.
struct ChildTable {
  int n = 0;
  std::size_t N = 0;
  std::vector<std::int64_t> offset;  // [(mask * n + g) * N + i] * n + axis
  std::vector<CurveState> next;      // [(mask * n + g) * N + i]

  explicit ChildTable(const Curve& c) {
    n = c.spec().n;
    N = static_cast<std::size_t>(c.children());
    const std::size_t states = (std::size_t{1} << n) * n;
    offset.resize(states * N * n);
    next.resize(states * N);
    std::vector<int> cell;
    for (unsigned m = 0; m < (1u << n); ++m)
      for (int g = 0; g < n; ++g)
        for (std::size_t i = 0; i < N; ++i) {
          CurveState out;
          c.child({m, g}, i, cell, out);
          std::size_t slot = (m * n + g) * N + i;
          next[slot] = out;
          for (int ax = 0; ax < n; ++ax) offset[slot * n + ax] = cell[ax];
        }
  }
  std::size_t slot(const CurveState& s, std::size_t i) const { return (s.mask * n + s.g) * N + i; }
};

void walk(const Curve& c, const ChildTable& T, int depth,
          const std::function<void(const Coords&, const CurveState&)>& leaf) {
  const int n = c.spec().n;
  std::function<void(Coords, CurveState, int)> rec = [&](Coords lo, CurveState s, int l) {
    if (l == depth) {
      leaf(lo, s);
      return;
    }
    for (std::size_t i = 0; i < T.N; ++i) {
      std::size_t sl = T.slot(s, i);
      Coords child = lo;
      for (int ax = 0; ax < n; ++ax) child[ax] = (lo[ax] << c.spec().bits(ax)) + T.offset[sl * n + ax];
      rec(child, T.next[sl], l + 1);
    }
  };
  rec(Coords{}, c.root(), 0);
}

void check_depth(const CurveSpec& s, int depth) {
  if (depth < 0) fail(ErrorCode::InvalidArgument, "depth must be non-negative");
  if (static_cast<long>(s.step_bits()) * depth > 62) fail(ErrorCode::InvalidArgument, "depth too large for this curve");
}

}  // namespace

CurveCarrier Curve::cells(int depth) const {
  check_depth(spec_, depth);
  ChildTable T(*this);
  CurveCarrier out;
  const int n = spec_.n;
  walk(*this, T, depth, [&](const Coords& lo, const CurveState&) {
    out.coords.insert(out.coords.end(), lo.begin(), lo.begin() + n);
    ++out.count;
  });
  return out;
}

CurveCarrier Curve::carrier(int depth) const {
  check_depth(spec_, depth);
  ChildTable T(*this);
  CurveCarrier out;
  const int n = spec_.n;
  walk(*this, T, depth, [&](const Coords& lo, const CurveState& s) {
    for (int ax = 0; ax < n; ++ax) out.coords.push_back(lo[ax] + ((s.mask >> ax) & 1u));
    ++out.count;
  });
  unsigned exit_mask = root_.mask ^ (1u << root_.g);
  for (int ax = 0; ax < n; ++ax)
    out.coords.push_back(((exit_mask >> ax) & 1u) ? (std::int64_t{1} << (spec_.bits(ax) * depth)) : 0);
  ++out.count;
  return out;
}

Point Curve::eval_index(std::uint64_t index, int depth) const {
  check_depth(spec_, depth);
  const int n = spec_.n;
  const int B = spec_.step_bits();
  const std::uint64_t total = std::uint64_t{1} << (B * depth);
  if (index > total) fail(ErrorCode::InvalidArgument, "curve index out of range");
  Point out(n);
  if (index == total) {
    unsigned exit_mask = root_.mask ^ (1u << root_.g);
    for (int ax = 0; ax < n; ++ax) out[ax] = Dyadic(static_cast<long>((exit_mask >> ax) & 1u));
    return out;
  }
  std::vector<int> cell;
  CurveState s = root_;
  Coords lo{};
  for (int l = 0; l < depth; ++l) {
    std::size_t digit = static_cast<std::size_t>((index >> (B * (depth - 1 - l))) & ((std::uint64_t{1} << B) - 1));
    CurveState next;
    child(s, digit, cell, next);
    for (int ax = 0; ax < n; ++ax) lo[ax] = (lo[ax] << spec_.bits(ax)) + cell[ax];
    s = next;
  }
  for (int ax = 0; ax < n; ++ax)
    out[ax] = Dyadic(static_cast<long>(lo[ax] + ((s.mask >> ax) & 1u))).ldexp(-spec_.bits(ax) * depth);
  return out;
}

std::pair<Point, double> Curve::eval(const Dyadic& t, int depth) const {
  if (t < Dyadic(0) || Dyadic(1) < t) fail(ErrorCode::InvalidArgument, "curve parameter must lie in [0,1]");
  check_depth(spec_, depth);
  const int B = spec_.step_bits();
  mpz_class idx = t.floor_scaled(static_cast<long>(B) * depth);
  double diam2 = 0.0;
  for (int ax = 0; ax < spec_.n; ++ax) diam2 += std::ldexp(1.0, -2 * spec_.bits(ax) * depth);
  return {eval_index(idx.get_ui(), depth), std::sqrt(diam2)};
}

std::optional<Dyadic> Curve::preimage(const Point& u, int max_depth) const {
  const int n = spec_.n;
  if (static_cast<int>(u.size()) != n) fail(ErrorCode::InvalidArgument, "point has wrong dimension");
  for (const auto& x : u)
    if (x < Dyadic(0) || Dyadic(1) < x) return std::nullopt;
  check_depth(spec_, max_depth);
  const int B = spec_.step_bits();
  std::vector<int> cell;

  // Lattice coordinates of u at level l, or nullopt when u is off-lattice.
  auto corner_match = [&](const Coords& lo, unsigned mask, int l) {
    for (int ax = 0; ax < n; ++ax) {
      Dyadic c(static_cast<long>(lo[ax] + ((mask >> ax) & 1u)));
      if (c.ldexp(-spec_.bits(ax) * l) != u[ax]) return false;
    }
    return true;
  };
  auto inside = [&](const Coords& lo, int l) {
    for (int ax = 0; ax < n; ++ax) {
      Dyadic scaled = u[ax].ldexp(spec_.bits(ax) * l);
      if (scaled < Dyadic(static_cast<long>(lo[ax])) || Dyadic(static_cast<long>(lo[ax] + 1)) < scaled) return false;
    }
    return true;
  };

  std::function<std::optional<Dyadic>(Coords, CurveState, std::uint64_t, int)> rec =
      [&](Coords lo, CurveState s, std::uint64_t index, int l) -> std::optional<Dyadic> {
    if (corner_match(lo, s.mask, l)) return Dyadic(static_cast<long>(index)).ldexp(-static_cast<long>(B) * l);
    if (corner_match(lo, s.mask ^ (1u << s.g), l))
      return Dyadic(static_cast<long>(index + 1)).ldexp(-static_cast<long>(B) * l);
    if (l == max_depth) return std::nullopt;
    for (std::size_t i = 0; i < children(); ++i) {
      CurveState next;
      child(s, i, cell, next);
      Coords c = lo;
      for (int ax = 0; ax < n; ++ax) c[ax] = (lo[ax] << spec_.bits(ax)) + cell[ax];
      if (!inside(c, l + 1)) continue;
      if (auto r = rec(c, next, (index << B) + i, l + 1)) return r;
    }
    return std::nullopt;
  };
  return rec(Coords{}, root_, 0, 0);
}

EvaluableMap Curve::as_map(int depth, const std::vector<int>& axes) const {
  CurveCarrier car = carrier(depth);
  const int n = spec_.n;
  const long B = spec_.step_bits();
  PiecewiseDomain dom;
  dom.intervals.emplace_back(Dyadic(0), Dyadic(1));
  std::vector<Point> values;
  values.reserve(car.count);
  for (std::size_t i = 0; i < car.count; ++i) {
    dom.sample_points.push_back(Dyadic(static_cast<long>(i)).ldexp(-B * depth));
    Point v;
    for (int ax : axes) v.push_back(Dyadic(static_cast<long>(car.coords[i * n + ax])).ldexp(-spec_.bits(ax) * depth));
    values.push_back(std::move(v));
  }
  return EvaluableMap(static_cast<int>(axes.size()), std::move(dom), std::move(values),
                      "curve(n=" + std::to_string(n) + ",p=" + std::to_string(spec_.p) + ",a:b=" +
                          std::to_string(spec_.a) + ":" + std::to_string(spec_.b) + ",depth=" + std::to_string(depth) + ")");
}

VisitReport check_visits(const Curve& curve, int depth) {
  const CurveSpec& s = curve.spec();
  const int n = s.n;
  CurveCarrier cells = curve.cells(depth);
  VisitReport r;
  r.cells = cells.count;
  std::uint64_t expected = std::uint64_t{1} << (s.step_bits() * depth);
  if (cells.count != expected) r.onto = false;
  std::vector<char> seen(expected, 0);
  for (std::size_t i = 0; i < cells.count; ++i) {
    std::uint64_t flat = 0;
    for (int ax = 0; ax < n; ++ax) {
      std::int64_t c = cells.coords[i * n + ax];
      std::int64_t size = std::int64_t{1} << (s.bits(ax) * depth);
      if (c < 0 || c >= size) {
        r.onto = false;
        continue;
      }
      flat = (flat << (s.bits(ax) * depth)) | static_cast<std::uint64_t>(c);
    }
    if (flat < expected) {
      if (seen[flat]) r.onto = false;
      seen[flat] = 1;
    }
    if (i > 0) {
      std::int64_t manhattan = 0;
      int moved = 0;
      for (int ax = 0; ax < n; ++ax) {
        std::int64_t d = std::llabs(cells.coords[i * n + ax] - cells.coords[(i - 1) * n + ax]);
        manhattan += d;
        moved += d != 0;
      }
      if (manhattan != 1 || moved != 1) r.adjacent = false;
    }
  }
  return r;
}

namespace {

struct Best {
  double value = -1.0;
  std::uint64_t i = 0, j = 0;
  void offer(double v, std::uint64_t a, std::uint64_t b) {
    if (v > value || (v == value && std::pair{a, b} < std::pair{i, j})) {
      value = v;
      i = a;
      j = b;
    }
  }
};

class PairSearch {
 public:
  PairSearch(const Curve& c, const std::vector<int>& axes, const Rational& exponent)
      : c_(c), T_(c), n_(c.spec().n), half_k_(0.5 * to_double(exponent)) {
    for (int ax : axes) {
      if (ax < 0 || ax >= n_) fail(ErrorCode::InvalidArgument, "component axis out of range");
      in_[ax] = true;
      // reuse of sub-cell maxima needs |dx|^e to scale like dt on every axis
      invariant_ = invariant_ && exponent * c.spec().bits(ax) == c.spec().step_bits();
    }
  }

  // Max ratio over carrier pairs of a state-g cell refined r times, in the
  // cell's own frame.
  const Best& solve(int g, int r) {
    auto key = std::pair{g, r};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Best best;
    if (!invariant_) {
      for (int ax = 0; ax < n_; ++ax) scale_[ax] = std::ldexp(1.0, -c_.spec().bits(ax) * r);
      param_unit_ = std::ldexp(1.0, -c_.spec().step_bits() * r);
      within(Node{Coords{}, CurveState{0, g}, 0}, 0, r, best);
    } else if (r == 0) {
      best.offer(in_[g] ? 1.0 : 0.0, 0, 1);
    } else {
      const std::uint64_t sub = std::uint64_t{1} << (c_.spec().step_bits() * (r - 1));
      const auto& pat = c_.pattern(g);
      for (std::size_t i = 0; i < pat.size(); ++i) {
        const Best& b = solve(pat[i].g, r - 1);
        best.offer(b.value, i * sub + b.i, i * sub + b.j);
      }
      cross(g, r, best);
    }
    return memo_.emplace(key, best).first->second;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Node {
    Coords lo;
    CurveState s;
    std::uint64_t index;
  };

  void children_of(const Node& p, std::vector<Node>& out) const {
    out.clear();
    for (std::size_t i = 0; i < T_.N; ++i) {
      std::size_t sl = T_.slot(p.s, i);
      Node ch;
      for (int ax = 0; ax < n_; ++ax) ch.lo[ax] = (p.lo[ax] << c_.spec().bits(ax)) + T_.offset[sl * n_ + ax];
      ch.s = T_.next[sl];
      ch.index = p.index * T_.N + i;
      out.push_back(ch);
    }
  }

  double point_ratio(const Node& A, unsigned ma, std::uint64_t ia, const Node& B, unsigned mb, std::uint64_t ib) const {
    double d2 = 0.0;
    for (int ax = 0; ax < n_; ++ax) {
      if (!in_[ax]) continue;
      double d = static_cast<double>((B.lo[ax] + ((mb >> ax) & 1u)) - (A.lo[ax] + ((ma >> ax) & 1u)));
      d *= scale_[ax];
      d2 += d * d;
    }
    if (d2 == 0.0) return 0.0;
    double dt = static_cast<double>(ib - ia) * param_unit_;
    return std::pow(d2, half_k_) / dt;
  }

  void leaf(const Node& A, const Node& B, Best& best) const {
    const unsigned ea = A.s.mask, xa = A.s.mask ^ (1u << A.s.g);
    const unsigned eb = B.s.mask, xb = B.s.mask ^ (1u << B.s.g);
    const std::uint64_t pa[2] = {A.index, A.index + 1};
    const std::uint64_t pb[2] = {B.index, B.index + 1};
    const unsigned ma[2] = {ea, xa};
    const unsigned mb[2] = {eb, xb};
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v) {
        if (pa[u] >= pb[v]) continue;
        best.offer(point_ratio(A, ma[u], pa[u], B, mb[v], pb[v]), pa[u], pb[v]);
      }
  }

  double upper_bound(const Node& A, const Node& B, int level) const {
    double d2 = 0.0;
    for (int ax = 0; ax < n_; ++ax) {
      if (!in_[ax]) continue;
      std::int64_t w = std::max(std::llabs(B.lo[ax] + 1 - A.lo[ax]), std::llabs(A.lo[ax] + 1 - B.lo[ax]));
      double d = std::ldexp(static_cast<double>(w), -c_.spec().bits(ax) * level);
      d2 += d * d;
    }
    if (d2 == 0.0) return 0.0;
    double dt = std::ldexp(static_cast<double>(B.index - A.index - 1), -c_.spec().step_bits() * level);
    return std::pow(d2, half_k_) / dt * (1.0 + 1e-9);
  }

  void pair(const Node& A, const Node& B, int level, int r, Best& best) {
    ++nodes_;
    if (level == r) {
      leaf(A, B, best);
      return;
    }
    if (B.index > A.index + 1 && upper_bound(A, B, level) < best.value) return;
    std::vector<Node> ca, cb;
    children_of(A, ca);
    children_of(B, cb);
    // Pairs nearest in parameter first: they carry the largest ratios.
    for (std::size_t i = ca.size(); i-- > 0;)
      for (std::size_t j = 0; j < cb.size(); ++j) pair(ca[i], cb[j], level + 1, r, best);
  }

  // Every carrier pair inside P, without reuse.
  void within(const Node& P, int level, int r, Best& best) {
    if (level == r) {
      best.offer(point_ratio(P, P.s.mask, P.index, P, P.s.mask ^ (1u << P.s.g), P.index + 1), P.index, P.index + 1);
      return;
    }
    std::vector<Node> ch;
    children_of(P, ch);
    for (const auto& c : ch) within(c, level + 1, r, best);
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (std::size_t j = i + 1; j < ch.size(); ++j) pair(ch[i], ch[j], level + 1, r, best);
  }

  void cross(int g, int r, Best& best) {
    for (int ax = 0; ax < n_; ++ax) scale_[ax] = std::ldexp(1.0, -c_.spec().bits(ax) * r);
    param_unit_ = std::ldexp(1.0, -c_.spec().step_bits() * r);
    Node root{Coords{}, CurveState{0, g}, 0};
    std::vector<Node> top;
    children_of(root, top);
    for (std::size_t i = 0; i < top.size(); ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j) pair(top[i], top[j], 1, r, best);
  }

  const Curve& c_;
  ChildTable T_;
  int n_;
  double half_k_;
  bool invariant_ = true;
  std::array<bool, kMaxDim> in_{};
  std::array<double, kMaxDim> scale_{};
  double param_unit_ = 1.0;
  std::map<std::pair<int, int>, Best> memo_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ComponentCert component_constant(const Curve& curve, const std::vector<int>& axes, const Rational& exponent,
                                 int depth) {
  check_depth(curve.spec(), depth);
  PairSearch search(curve, axes, exponent);
  Best b = search.solve(curve.root().g, depth);
  ComponentCert cert;
  cert.axes = axes;
  cert.exponent = exponent;
  cert.depth = depth;
  cert.constant = std::max(0.0, b.value);
  const long B = curve.spec().step_bits();
  cert.worst_pair = {Dyadic(static_cast<long>(b.i)).ldexp(-B * depth), Dyadic(static_cast<long>(b.j)).ldexp(-B * depth)};
  cert.nodes = search.nodes();
  return cert;
}

double component_constant_bruteforce(const Curve& curve, const std::vector<int>& axes, const Rational& exponent,
                                     int depth) {
  CurveCarrier car = curve.carrier(depth);
  const int n = curve.spec().n;
  const double half_k = 0.5 * to_double(exponent);
  const double unit = std::ldexp(1.0, -curve.spec().step_bits() * depth);
  double best = 0.0;
  for (std::size_t i = 0; i < car.count; ++i)
    for (std::size_t j = i + 1; j < car.count; ++j) {
      double d2 = 0.0;
      for (int ax : axes) {
        double d = std::ldexp(static_cast<double>(car.coords[j * n + ax] - car.coords[i * n + ax]),
                              -curve.spec().bits(ax) * depth);
        d2 += d * d;
      }
      if (d2 == 0.0) continue;
      best = std::max(best, std::pow(d2, half_k) / (static_cast<double>(j - i) * unit));
    }
  return best;
}

std::string polyline_csv(const Curve& curve, int depth) {
  CurveCarrier car = curve.carrier(depth);
  const int n = curve.spec().n;
  std::string out = "t";
  for (int ax = 0; ax < n; ++ax) out += ",x_" + std::to_string(ax + 1);
  out += "\n";
  auto num = [](double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  const double unit = std::ldexp(1.0, -curve.spec().step_bits() * depth);
  for (std::size_t i = 0; i < car.count; ++i) {
    out += num(static_cast<double>(i) * unit);
    for (int ax = 0; ax < n; ++ax)
      out += "," + num(std::ldexp(static_cast<double>(car.coords[i * n + ax]), -curve.spec().bits(ax) * depth));
    out += "\n";
  }
  return out;
}

}  // namespace outerdim
