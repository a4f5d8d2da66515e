#include "outerdim/morse_sard.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <memory>
#include <set>

#include "outerdim/error.hpp"
#include "outerdim/parallel.hpp"

namespace outerdim {

namespace {

double poly_deriv(const std::vector<double>& c, double x, int order) {
  // c[i] is the coefficient of x^i
  double sum = 0.0;
  for (std::size_t i = static_cast<std::size_t>(order); i < c.size(); ++i) {
    double f = c[i];
    for (int r = 0; r < order; ++r) f *= static_cast<double>(i - r);
    sum += f * std::pow(x, static_cast<double>(i - order));
  }
  return sum;
}

SmoothFunction scalar_poly(std::string name, std::vector<double> coeffs, int k, double lambda) {
  SmoothFunction f;
  f.name = std::move(name);
  f.n = f.m = 1;
  f.k = k;
  f.lambda = lambda;
  f.F = [coeffs](const Vec& x) { return Vec{poly_deriv(coeffs, x[0], 0)}; };
  f.DF = [coeffs](const Vec& x) { return Mat{{poly_deriv(coeffs, x[0], 1)}}; };
  f.deriv = [coeffs](double x, int j) { return poly_deriv(coeffs, x, j); };
  return f;
}

std::vector<SmoothFunction> make_zoo() {
  std::vector<SmoothFunction> z;
  SmoothFunction p;
  p.name = "paraboloid";
  p.n = 2;
  p.k = 2;
  p.F = [](const Vec& x) { return Vec{x[0] * x[0] + x[1] * x[1]}; };
  p.DF = [](const Vec& x) { return Mat{{2 * x[0], 2 * x[1]}}; };
  z.push_back(p);

  SmoothFunction c;
  c.name = "cylinder";
  c.n = 2;
  c.k = 2;
  c.F = [](const Vec& x) { return Vec{x[0] * x[0]}; };
  c.DF = [](const Vec& x) { return Mat{{2 * x[0], 0.0}}; };
  z.push_back(c);

  SmoothFunction s;
  s.name = "saddle";
  s.n = 2;
  s.k = 2;
  s.F = [](const Vec& x) { return Vec{x[0] * x[0] - x[1] * x[1]}; };
  s.DF = [](const Vec& x) { return Mat{{2 * x[0], -2 * x[1]}}; };
  z.push_back(s);

  z.push_back(scalar_poly("cubic", {0, 0, 0, 1}, 3, 0.0));
  z.push_back(scalar_poly("square", {0, 0, 1}, 1, 1.0));

  SmoothFunction fold;
  fold.name = "fold";
  fold.n = fold.m = 2;
  fold.k = 2;
  fold.F = [](const Vec& x) { return Vec{x[0], x[1] * x[1]}; };
  fold.DF = [](const Vec& x) { return Mat{{1.0, 0.0}, {0.0, 2 * x[1]}}; };
  z.push_back(fold);
  return z;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
Vec symmetric_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          double apr = a[p][r], aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
      }
    }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

// Quintic smoothstep and its derivatives.
double smoothstep(double u, int order) {
  switch (order) {
    case 0: return u * u * u * (u * (6 * u - 15) + 10);
    case 1: return 30 * u * u * (1 - u) * (1 - u);
    case 2: return 60 * u * (1 - u) * (1 - 2 * u);
    case 3: return 60 * (1 - 6 * u + 6 * u * u);
    case 4: return 60 * (12 * u - 6);
    case 5: return 720;
    default: return 0;
  }
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double rdouble(const Rational& q) { return to_double(q); }

// Sliding-window oscillation max - min over windows of w + 1 samples.
double oscillation(const std::vector<double>& v, std::size_t w) {
  std::deque<std::size_t> mx, mn;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (!mx.empty() && v[mx.back()] <= v[i]) mx.pop_back();
    while (!mn.empty() && v[mn.back()] >= v[i]) mn.pop_back();
    mx.push_back(i);
    mn.push_back(i);
    if (mx.front() + w < i) mx.pop_front();
    if (mn.front() + w < i) mn.pop_front();
    if (i >= w) best = std::max(best, v[mx.front()] - v[mn.front()]);
  }
  return best;
}

}  // namespace

const std::vector<SmoothFunction>& zoo() {
  static const std::vector<SmoothFunction> z = make_zoo();
  return z;
}

const SmoothFunction& zoo_function(const std::string& name) {
  for (const auto& f : zoo())
    if (f.name == name) return f;
  fail(ErrorCode::InvalidArgument, "unknown test function '" + name + "'");
}

bool jacobian_consistent(const SmoothFunction& f, const Vec& x, double rel_tol) {
  const Mat J = f.DF(x);
  double scale = 1.0;
  for (const auto& row : J)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < f.n; ++j) {
    double best = INFINITY;
    for (int e = 8; e <= 16; ++e) {
      const double h = std::ldexp(1.0, -e);
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vec fp = f.F(xp), fm = f.F(xm);
      double err = 0.0;
      for (int i = 0; i < f.m; ++i) err = std::max(err, std::abs((fp[i] - fm[i]) / (2 * h) - J[i][j]));
      best = std::min(best, err);
    }
    if (best > rel_tol * scale) return false;
  }
  return true;
}

Vec singular_values(const Mat& A) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  if (m == 0 || n == 0) return {};
  const bool rows = m <= n;  // Gram matrix of the smaller side
  const std::size_t d = rows ? m : n;
  Mat G(d, Vec(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      if (rows)
        for (std::size_t r = 0; r < n; ++r) s += A[i][r] * A[j][r];
      else
        for (std::size_t r = 0; r < m; ++r) s += A[r][i] * A[r][j];
      G[i][j] = s;
    }
  Vec ev = symmetric_eigenvalues(std::move(G));
  for (double& e : ev) e = std::sqrt(std::max(0.0, e));
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

CriticalSample critical_values_sample(const SmoothFunction& f, int p, int grid, const std::vector<Vec>& extra) {
  if (grid < 64) fail(ErrorCode::InvalidArgument, "grid needs at least 64 intervals per axis");
  if (f.n < 1 || f.n > 2) fail(ErrorCode::InvalidArgument, "grid sampling supports n = 1 or 2");
  if (p < 0) fail(ErrorCode::InvalidArgument, "p must be non-negative");
  std::vector<Vec> pts;
  const int side = grid + 1;
  auto coord = [&](int i) { return -1.0 + 2.0 * i / grid; };
  if (f.n == 1) {
    for (int i = 0; i < side; ++i) pts.push_back({coord(i)});
  } else {
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) pts.push_back({coord(i), coord(j)});
  }
  for (const auto& e : extra) {
    if (static_cast<int>(e.size()) != f.n) fail(ErrorCode::InvalidArgument, "extra point has the wrong dimension");
    pts.push_back(e);
  }

  auto sv = parallel_blocks<std::vector<Vec>>(pts.size(), 16, [&](std::size_t lo, std::size_t hi) {
    std::vector<Vec> out;
    for (std::size_t i = lo; i < hi; ++i) out.push_back(singular_values(f.DF(pts[i])));
    return out;
  });
  std::vector<Vec> sigma;
  for (auto& part : sv) std::move(part.begin(), part.end(), std::back_inserter(sigma));
  double top = 0.0;
  for (const auto& s : sigma)
    if (!s.empty()) top = std::max(top, s.front());

  CriticalSample out;
  out.grid = grid;
  out.p = p;
  out.tau = 1e-8 * top;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int rank = 0;
    for (double s : sigma[i]) rank += s > out.tau;
    if (rank > p) continue;
    Point img;
    for (double v : f.F(pts[i])) img.push_back(Dyadic::from_double(v));
    out.points.push_back(pts[i]);
    out.images.push_back(std::move(img));
  }
  return out;
}

double p9_bound(int n, int m, int p, double k_plus_lambda) {
  if (k_plus_lambda <= 0) fail(ErrorCode::InvalidArgument, "k + lambda must be positive");
  return std::min(p + (n - p) / k_plus_lambda, static_cast<double>(m));
}

BoundReport check_bound_p9(const CriticalSample& sample, int n, int m, int p, double k, double lambda,
                           const std::vector<int>& ladder) {
  BoundReport r;
  r.bound = p9_bound(n, m, p, k + lambda);
  if (sample.images.empty()) {
    r.trivial = true;
    return r;
  }
  std::vector<int> lad = ladder;
  if (lad.empty()) {
    int top = static_cast<int>(std::floor(std::log2(static_cast<double>(sample.grid))));
    for (int s = 1; s <= std::max(2, top - 1); ++s) lad.push_back(s);
  }
  r.box = box_dimension(sample.images, lad);
  r.estimate = r.box.slope;
  r.pass = r.estimate <= r.bound + 0.05;
  return r;
}

FlatReport flat_set_image_check(const SmoothFunction& f, double k, double lambda, const std::vector<Dyadic>& candidates,
                                const std::vector<Dyadic>& fit, double tau_flat, const std::vector<int>& flat_ladder,
                                const std::vector<int>& image_ladder) {
  if (f.n != 1 || f.m != 1 || !f.deriv) fail(ErrorCode::InvalidArgument, "flat-set check needs a scalar function with derivatives");
  FlatReport r;
  r.order = k + lambda;
  std::vector<double> xs;
  std::vector<Dyadic> flat;
  for (const auto& c : candidates) {
    const double x = c.to_double();
    bool ok = true;
    for (int j = 1; j < r.order && ok; ++j) ok = std::abs(f.deriv(x, j)) <= tau_flat;
    if (ok) {
      flat.push_back(c);
      xs.push_back(x);
    }
  }
  r.flat_points = flat.size();
  if (flat.empty()) return r;

  std::vector<double> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f.F({xs[i]})[0];
  const std::set<Dyadic> fit_set(fit.begin(), fit.end());
  std::vector<char> in_fit(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) in_fit[i] = fit_set.empty() || fit_set.count(flat[i]) > 0;

  auto ratio = [&](std::size_t i, std::size_t j) {
    return std::abs(fx[i] - fx[j]) / std::pow(std::abs(xs[i] - xs[j]), r.order);
  };
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = i + 1; j < flat.size(); ++j)
      if (in_fit[i] && in_fit[j] && xs[i] != xs[j]) r.M = std::max(r.M, ratio(i, j));

  struct Tally {
    std::uint64_t pairs = 0, bad = 0;
  };
  const double limit = r.M * (1 + 1e-9);
  auto parts = parallel_blocks<Tally>(flat.size(), 64, [&](std::size_t lo, std::size_t hi) {
    Tally t;
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < flat.size(); ++j) {
        if (xs[i] == xs[j]) continue;
        ++t.pairs;
        if (ratio(i, j) > limit) ++t.bad;
      }
    return t;
  });
  for (const auto& t : parts) {
    r.pairs += t.pairs;
    r.violations += t.bad;
  }

  if (flat.size() >= 2) {
    std::vector<Point> images;
    for (double v : fx) images.push_back({Dyadic::from_double(v)});
    r.flat_dim = box_dimension(as_points(flat), flat_ladder).slope;
    r.image_dim = box_dimension(images, image_ladder).slope;
    r.dim_ok = r.image_dim <= r.flat_dim / r.order + 0.05;
  }
  r.pass = r.violations == 0 && r.dim_ok;
  return r;
}

// ---------------------------------------------------------------------------

SynthesizedFunction::SynthesizedFunction(const Rational& k_val, const Rational& k, int depth)
    : k_val_(k_val), k_(k), depth_(depth) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "target k must be at least 1");
  if (k >= k_val) fail(ErrorCode::Infeasible, "target k must be below the value exponent k_val");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be at least 1");
  k_dom_ = 1 + (k_val - k) / 2;
  k_dom_.canonicalize();
  CantorSpec ds, vs;
  ds.k = k_dom_;
  ds.depth = depth;
  vs.k = k_val;
  vs.depth = depth;
  set_knots(build_stage(ds).carrier(), build_stage(vs).carrier());
}

SynthesizedFunction SynthesizedFunction::single_point(const Dyadic& value) {
  SynthesizedFunction f;
  f.k_val_ = 0;
  f.k_ = 1;
  f.k_dom_ = 0;
  f.set_knots({Dyadic(0), Dyadic(1)}, {Dyadic(0), value});
  return f;
}

void SynthesizedFunction::set_knots(std::vector<Dyadic> x, std::vector<Dyadic> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::Internal, "knot count mismatch");
  x_ = std::move(x);
  y_ = std::move(y);
  xd_.clear();
  yd_.clear();
  for (const auto& v : x_) xd_.push_back(v.to_double());
  for (const auto& v : y_) yd_.push_back(v.to_double());
}

std::size_t SynthesizedFunction::piece(double x) const {
  auto it = std::upper_bound(xd_.begin(), xd_.end(), x);
  return static_cast<std::size_t>(it - xd_.begin()) - 1;
}

double SynthesizedFunction::operator()(double x) const {
  if (x <= xd_.front()) return yd_.front();
  if (x >= xd_.back()) return yd_.back();
  const std::size_t i = piece(x);
  const double L = xd_[i + 1] - xd_[i];
  const double u = (x - xd_[i]) / L;
  if (u == 0.0) return yd_[i];
  return yd_[i] + (yd_[i + 1] - yd_[i]) * smoothstep(u, 0);
}

double SynthesizedFunction::derivative(double x, int order) const {
  if (order == 0) return (*this)(x);
  if (x <= xd_.front() || x >= xd_.back()) return 0.0;
  const std::size_t i = piece(x);
  if (x == xd_[i]) return 0.0;  // one-sided derivatives at knots are taken as 0
  const double L = xd_[i + 1] - xd_[i];
  const double u = (x - xd_[i]) / L;
  return (yd_[i + 1] - yd_[i]) * smoothstep(u, order) / std::pow(L, order);
}

SmoothFunction SynthesizedFunction::as_smooth() const {
  SmoothFunction s;
  s.name = "synthesized";
  s.n = s.m = 1;
  const double kd = rdouble(k_);
  s.k = static_cast<int>(std::floor(kd));
  s.lambda = kd - s.k;
  auto self = std::make_shared<SynthesizedFunction>(*this);
  s.F = [self](const Vec& x) { return Vec{(*self)(x[0])}; };
  s.DF = [self](const Vec& x) { return Mat{{self->derivative(x[0], 1)}}; };
  s.deriv = [self](double x, int j) { return self->derivative(x, j); };
  return s;
}

SynthReport SynthesizedFunction::verify() const {
  SynthReport r;
  r.k_val = k_val_;
  r.k = k_;
  r.k_dom = k_dom_;
  r.depth = depth_;

  r.exact_values = true;
  for (std::size_t i = 0; i < x_.size(); ++i)
    if (!(Dyadic::from_double((*this)(xd_[i])) == y_[i])) r.exact_values = false;
  for (std::size_t i = 1; i < y_.size(); ++i)
    if (y_[i] < y_[i - 1]) r.exact_values = false;

  double min_gap = INFINITY;
  for (std::size_t i = 1; i < xd_.size(); ++i) min_gap = std::min(min_gap, xd_[i] - xd_[i - 1]);
  const double h = std::ldexp(min_gap, -(depth_ + 6));
  const double range = yd_.back() - yd_.front();
  r.flat_tolerance = 1e-6 * std::abs(range);
  for (double x : xd_) {
    double d = std::abs(((*this)(x + h) - (*this)(x - h)) / (2 * h));
    r.max_flat_derivative = std::max(r.max_flat_derivative, d);
  }
  r.flat_ok = r.max_flat_derivative <= r.flat_tolerance;

  // Oscillation of the finite-difference derivative on a 2^16 grid of the hull.
  constexpr int kBits = 16;
  const std::size_t N = std::size_t{1} << kBits;
  const double lo = xd_.front(), span = xd_.back() - xd_.front();
  const double fd = std::ldexp(span, -(kBits + 4));
  auto parts = parallel_blocks<std::vector<double>>(N + 1, 16, [&](std::size_t a, std::size_t b) {
    std::vector<double> out;
    for (std::size_t i = a; i < b; ++i) {
      const double x = lo + span * std::ldexp(static_cast<double>(i), -kBits);
      out.push_back(((*this)(x + fd) - (*this)(x - fd)) / (2 * fd));
    }
    return out;
  });
  std::vector<double> dv;
  for (auto& p : parts) dv.insert(dv.end(), p.begin(), p.end());

  std::vector<double> lx, ly;
  for (int j = kBits; j >= 1; --j) {
    const double delta = std::ldexp(span, -j);
    if (delta < min_gap) continue;
    const double w = oscillation(dv, std::size_t{1} << (kBits - j));
    r.holder_scales.push_back(delta);
    r.holder_omegas.push_back(w);
    if (lx.size() < 5 && w > 0) {
      lx.push_back(std::log2(delta));
      ly.push_back(std::log2(w));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    r.holder_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    r.holder_exponent = 1.0;  // a single smoothstep: f' is Lipschitz
  }
  r.holder_ok = r.holder_exponent >= rdouble(k_) - 1 - 0.05;
  return r;
}

std::string SynthesizedFunction::samples_csv(int bits) const {
  if (bits < 0 || bits > 24) fail(ErrorCode::InvalidArgument, "sample bits must lie in 0..24");
  const double h = std::ldexp(1.0, -(bits + 8));
  std::string out = "x,f,df\n";
  const std::size_t n = std::size_t{1} << bits;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = std::ldexp(static_cast<double>(i), -bits);
    out += fmt(x) + "," + fmt((*this)(x)) + "," + fmt(((*this)(x + h) - (*this)(x - h)) / (2 * h)) + "\n";
  }
  return out;
}

}  // namespace outerdim
