#pragma once

#include <functional>
#include <string>
#include <vector>

#include "outerdim/cantor.hpp"
#include "outerdim/dimension.hpp"

namespace outerdim {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, m rows of n entries

// Closed-form F: R^n -> R^m with its exact Jacobian and a class label C^{k,lambda}.
struct SmoothFunction {
  std::string name;
  int n = 1, m = 1;
  int k = 1;
  double lambda = 0.0;
  std::function<Vec(const Vec&)> F;
  std::function<Mat(const Vec&)> DF;
  // Derivatives of order j >= 1 for n = m = 1, when available.
  std::function<double(double, int)> deriv;
};

// paraboloid, cylinder, saddle, cubic, square, fold.
const std::vector<SmoothFunction>& zoo();
const SmoothFunction& zoo_function(const std::string& name);

// Central differences with steps 2^-8 .. 2^-16 against DF at x; passes when
// the best step is within rel_tol relative error.
bool jacobian_consistent(const SmoothFunction& f, const Vec& x, double rel_tol = 1e-4);

// Singular values of an m x n matrix, descending.
Vec singular_values(const Mat& A);

struct CriticalSample {
  int grid = 0;                 // intervals per axis on [-1, 1]^n
  int p = 0;
  double tau = 0.0;             // 1e-8 times the largest singular value seen
  std::vector<Vec> points;
  std::vector<Point> images;    // exact dyadic images of the critical points
};

// Grid points (and extra candidates) where rank DF <= p.
CriticalSample critical_values_sample(const SmoothFunction& f, int p, int grid, const std::vector<Vec>& extra = {});

struct BoundReport {
  double bound = 0.0;           // min{p + (n-p)/(k+lambda), m}
  double estimate = 0.0;        // box-counting slope of the image sample
  bool pass = true;
  bool trivial = false;         // empty sample
  BoxCountEstimate box;
};
double p9_bound(int n, int m, int p, double k_plus_lambda);
BoundReport check_bound_p9(const CriticalSample& sample, int n, int m, int p, double k, double lambda,
                           const std::vector<int>& ladder = {});

struct FlatReport {
  double order = 0.0;           // k + lambda
  std::size_t flat_points = 0;
  double M = 0.0;               // fitted on the fit subset
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  double flat_dim = 0.0, image_dim = 0.0;
  bool dim_ok = true;           // image_dim <= flat_dim / order + 0.05
  bool pass = true;
};

// Flat points: candidates where every derivative of order 1 <= j < k+lambda is
// at most tau_flat in magnitude. M is the largest |f(x)-f(y)| / |x-y|^(k+lambda)
// over flat pairs inside `fit`, then every flat pair is checked against it.
FlatReport flat_set_image_check(const SmoothFunction& f, double k, double lambda, const std::vector<Dyadic>& candidates,
                                const std::vector<Dyadic>& fit, double tau_flat,
                                const std::vector<int>& flat_ladder = {}, const std::vector<int>& image_ladder = {});

struct SynthReport {
  Rational k_val, k, k_dom;
  int depth = 0;
  bool exact_values = false;      // f(domain carrier) == value carrier, in order
  double max_flat_derivative = 0; // finite-difference f' at carrier points
  double flat_tolerance = 0;      // 1e-6 times the value range
  bool flat_ok = false;
  double holder_exponent = 0;     // fitted from the oscillation of f'
  std::vector<double> holder_scales, holder_omegas;
  bool holder_ok = false;
};

// Monotone C^1 function with f' = 0 on the domain Cantor carrier (exponent
// k_dom = 1 + (k_val - k)/2) mapping it onto the value Cantor carrier, with a
// quintic smoothstep across every gap; constant outside the hull.
class SynthesizedFunction {
 public:
  // Infeasible unless 1 <= k < k_val.
  SynthesizedFunction(const Rational& k_val, const Rational& k, int depth);
  // Smoothstep from 0 at x = 0 to `value` at x = 1; both ends are critical.
  static SynthesizedFunction single_point(const Dyadic& value);

  const std::vector<Dyadic>& knots() const { return x_; }
  const std::vector<Dyadic>& knot_values() const { return y_; }
  Rational k_dom() const { return k_dom_; }

  double operator()(double x) const;
  double derivative(double x, int order = 1) const;
  SmoothFunction as_smooth() const;

  SynthReport verify() const;
  // "x,f,df" rows on a uniform grid of 2^bits intervals of [0, 1].
  std::string samples_csv(int bits) const;

 private:
  SynthesizedFunction() = default;
  void set_knots(std::vector<Dyadic> x, std::vector<Dyadic> y);
  std::size_t piece(double x) const;

  Rational k_val_, k_, k_dom_;
  int depth_ = 0;
  std::vector<Dyadic> x_, y_;
  std::vector<double> xd_, yd_;
};

}  // namespace outerdim
