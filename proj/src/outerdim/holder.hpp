#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outerdim/dyadic.hpp"
#include "outerdim/realcmp.hpp"

namespace outerdim {

// Union of disjoint closed intervals plus the discrete carrier on which a
// finite-depth construction is evaluated exactly.
struct PiecewiseDomain {
  std::vector<DyadicInterval> intervals;  // sorted, pairwise disjoint
  std::vector<Dyadic> sample_points;      // sorted, strictly increasing

  bool contains(const Dyadic& t) const;
  DyadicInterval hull() const;
  Dyadic measure() const;  // exact total interval length
  void validate() const;
};

// A partial map B subset R -> R^n. Carrier images are stored exactly; an
// optional rule extends evaluation to other admissible domain points.
class EvaluableMap {
 public:
  using Rule = std::function<std::optional<Point>(const Dyadic&)>;

  EvaluableMap() = default;
  EvaluableMap(int codomain_dim, PiecewiseDomain domain, std::vector<Point> values,
               std::string provenance, Rule rule = {});

  int codomain_dim() const { return n_; }
  const PiecewiseDomain& domain() const { return domain_; }
  const std::vector<Dyadic>& carrier() const { return domain_.sample_points; }
  const std::vector<Point>& values() const { return values_; }
  const std::string& provenance() const { return provenance_; }
  bool carrier_only() const { return !rule_; }
  std::size_t size() const { return values_.size(); }

  // Exact image of t. Throws NotInCarrier when t is not admissible.
  Point eval(const Dyadic& t) const;
  std::optional<Point> try_eval(const Dyadic& t) const;

  // Axis-aligned bounding box of the carrier image (lo, hi per axis).
  std::pair<Point, Point> range_box() const;

 private:
  int n_ = 1;
  PiecewiseDomain domain_;
  std::vector<Point> values_;
  std::string provenance_;
  Rule rule_;
};

enum class VerifyMode { Claimed, EndpointExhaustive, Sampled };
const char* verify_mode_name(VerifyMode m);

struct HolderCertificate {
  Rational k{1};
  Dyadic K{1};
  VerifyMode mode = VerifyMode::Claimed;
  int verified_depth = 0;
  std::pair<Dyadic, Dyadic> worst_pair;
  double worst_ratio = 0.0;
  bool pass = true;
  std::uint64_t violations = 0;
  std::uint64_t pairs_tested = 0;
  std::string note;
};

struct VerifyStrategy {
  VerifyMode mode = VerifyMode::EndpointExhaustive;
  std::uint64_t count = 0;  // sampled pairs
  std::uint64_t seed = 0;
  int depth = 0;            // recorded as verified_depth
  LogCompare compare{};
};

// Maximum of |f(x)-f(y)|^k / |x-y| over carrier pairs, and the count of pairs
// violating the bound K (decided in log space, see LogCompare).
HolderCertificate verify_dk(const EvaluableMap& f, const Rational& k, const Dyadic& K,
                            const VerifyStrategy& strategy = {});

// Smallest safe constant for f at exponent k: the exhaustive worst ratio,
// rounded up. Returns the certificate checked against that constant.
HolderCertificate estimate_constant(const EvaluableMap& f, const Rational& k, int depth = 0);

struct CertifiedMap {
  EvaluableMap map;
  HolderCertificate cert;
};

// f after h: exponent k1*k2, constant K1^k2 * K2 (rounded up).
CertifiedMap compose(const CertifiedMap& outer, const CertifiedMap& inner);

// f composed with the affine bijection [x, y] -> [a, b]. The scale
// (y - x) / (b - a) must be dyadic. The constant becomes K (b - a) / (y - x).
CertifiedMap affine_reparam(const CertifiedMap& f, const DyadicInterval& source,
                            const DyadicInterval& target);

struct HolderPair {
  Rational exponent;  // 1/k
  Dyadic M;           // K^(1/k), rounded up
};
HolderPair dk_to_holder(const Rational& k, const Dyadic& K);
// A Hoelder bound |f(x)-f(y)| <= M |x-y|^h on one window, as a D^(1/h) pair.
std::pair<Rational, Dyadic> holder_to_dk(const Rational& h, const Dyadic& M, const DyadicInterval& window);

// Convenience constructors.
EvaluableMap identity_map(const PiecewiseDomain& domain);
EvaluableMap constant_map(const PiecewiseDomain& domain, const Point& value);

}  // namespace outerdim
