#pragma once

#include <optional>
#include <string>
#include <vector>

#include "outerdim/cantor.hpp"
#include "outerdim/holder.hpp"

namespace outerdim {

struct BoxCountEstimate {
  std::vector<int> scales;         // m, for side 2^-m
  std::vector<std::uint64_t> counts;
  std::vector<double> residuals;   // of the fitted scales
  int fitted = 0;                  // number of deepest scales in the fit
  double slope = 0.0;
  double intercept = 0.0;
  double fit_r2 = 1.0;
};

// Occupied-cell counts by exact address bucketing (ties go to the smaller
// cell), least-squares slope of log2 count against m over the deepest 5
// scales. With an empty ladder, m = 1..(largest exponent among the points).
BoxCountEstimate box_dimension(const std::vector<Point>& points, std::vector<int> ladder = {});

std::vector<Point> as_points(const std::vector<Dyadic>& values);

struct DmUpperCert {
  Rational k;
  CertifiedMap cover;
  std::vector<Point> covered;  // carrier of the covered set
  bool inclusion = false;      // covered subset of the cover's carrier image
};
DmUpperCert make_dm_cert(const CertifiedMap& cover, const std::vector<Point>& covered);

struct HausdorffPiece {
  Dyadic lo, hi;          // cell of K^1_{s0}
  std::size_t carrier_points = 0;
  Dyadic image_diam2;     // squared diameter of the carrier image in the cell
};

struct HausdorffExport {
  Rational k;
  Dyadic M;               // D^k constant of the cover
  Dyadic sigma;
  long window = 1;        // [-i, i]
  int s0 = 0;
  Dyadic diam_pow_k;      // M 2^-s0, bound on diam^k of every piece
  double diam_bound = 0;  // (M 2^-s0)^(1/k)
  std::vector<HausdorffPiece> pieces;
  Dyadic sum;             // pieces * M 2^-s0
  Dyadic limit;           // 2 M i
  bool diam_ok = false;   // diam_bound <= sigma, decided exactly
  bool sum_ok = false;    // sum <= limit
};

// Splits the cover domain along K^1_{s0}, s0 the smallest s with
// M 2^-s <= sigma^k. Cells are half-open on the right except that a domain
// interval's right end stays with the cell on its left.
HausdorffExport hausdorff_cover_export(const CertifiedMap& cover, const Dyadic& sigma, long window);

struct MaUpperBound {
  Rational a;
  Dyadic domain_measure;             // exact when measure_exact
  double domain_measure_value = 0.0;
  bool measure_exact = true;
  CertifiedMap cover;
};

MaUpperBound ma_upper(const std::vector<Point>& carrier, const Rational& a, const CertifiedMap& cover);

struct MaCombined {
  MaUpperBound bound;
  Dyadic sum_of_parts;
  double epsilon = 0.0;
  double slack_used = 0.0;  // sum of eps / 2^i over the parts
  bool within = false;      // combined measure <= sum_of_parts + slack
};
MaCombined ma_combine(const std::vector<MaUpperBound>& parts, double epsilon);

struct NullifyStage {
  int depth = 0;
  Dyadic K_star;
  Dyadic cantor_measure;           // 2^s 2^-(a/b)s times the base length
  double cantor_measure_value = 0;
  bool exact = true;
  Dyadic domain_measure;           // K* times the above
  double domain_measure_value = 0;
  HolderCertificate g_cert;        // g at exponent a/b against K*
  HolderCertificate h_cert;        // h at exponent a against 1
  std::size_t h_points = 0;
  bool coverage = false;           // image of h contains the image of f
};

struct NullifyPlan {
  Rational a, b;
  DyadicInterval base_cell;
  int min_depth = 0;
  std::vector<NullifyStage> stages;
  bool monotone = true;
  EvaluableMap h;                  // composite at the deepest stage
};

// h = f o q with q(z) = g(z / K*) on Q = K* G, g the Cantor map at exponent
// a/b over a dyadic base cell holding the domain of f. Depths below the
// precision needed to hit every carrier point of f are raised.
NullifyPlan nullify_measure(const CertifiedMap& f, const Rational& a, const std::vector<int>& depths,
                            std::uint64_t samples, std::uint64_t seed);

}  // namespace outerdim
