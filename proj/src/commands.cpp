#include "outerdim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "outerdim/error.hpp"
#include "outerdim/parallel.hpp"

#ifndef OUTERDIM_VERSION
#define OUTERDIM_VERSION "0.0.0"
#endif

namespace outerdim {

namespace {

constexpr int kDepthCap = 40;
constexpr double kLogCompareTol = 1e-12;
constexpr double kBoxSlopeTol = 0.05;
constexpr double kTauFlat = 1e-6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Typed access to the config object.
class Config {
 public:
  explicit Config(const Json& j) : j_(j) {}

  bool has(const std::string& key) const { return j_.contains(key) && !j_[key].is_null(); }

  std::string str(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    throw UsageError("'" + key + "' must be a scalar");
  }

  long integer(const std::string& key, long def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    if (v.is_number_integer()) return static_cast<long>(v.get<long long>());
    const std::string s = str(key, "");
    std::size_t used = 0;
    long out = 0;
    try {
      out = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("'" + key + "' must be an integer, got '" + s + "'");
    return out;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const std::string s = str(key, "");
    std::size_t used = 0;
    std::uint64_t out = 0;
    try {
      if (!s.empty() && s[0] != '-') out = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("'" + key + "' must be a non-negative integer");
    return out;
  }

  double real(const std::string& key, double def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    if (v.is_number()) return v.get<double>();
    return to_double(rational(key, "0"));
  }

  Rational rational(const std::string& key, const std::string& def) const {
    const std::string s = str(key, def);
    try {
      return parse_rational(s);
    } catch (const Error&) {
      throw UsageError("'" + key + "' must be a rational number, got '" + s + "'");
    }
  }

  Dyadic dyadic(const std::string& key, const std::string& def) const {
    const std::string s = str(key, def);
    try {
      return Dyadic::parse(s);
    } catch (const Error&) {
      throw UsageError("'" + key + "' must be a dyadic rational, got '" + s + "'");
    }
  }

  std::vector<std::string> list(const std::string& key, const std::vector<std::string>& def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    std::vector<std::string> out;
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      return out;
    }
    std::stringstream ss(str(key, ""));
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
    return out;
  }

  int depth(const std::string& key, int def, int lo = 1) const {
    long d = integer(key, def);
    if (d < lo || d > kDepthCap)
      throw UsageError("'" + key + "' must lie in " + std::to_string(lo) + ".." + std::to_string(kDepthCap));
    return static_cast<int>(d);
  }

 private:
  const Json& j_;
};

struct Outcome {
  Json result;
  std::string csv;
  bool ok = true;
};

CertifiedMap identity_cover(const CantorStage& st) {
  CertifiedMap c{identity_map(st.domain()), {}};
  c.cert = verify_dk(c.map, Rational(1), Dyadic(1), {VerifyMode::EndpointExhaustive, 0, 0, st.spec.depth, {}});
  return c;
}

CantorStage cantor_stage(const Config& c, const std::string& kkey, const std::string& dkey, int ddef) {
  CantorSpec spec;
  spec.k = c.rational(kkey, "2");
  spec.depth = c.depth(dkey, ddef);
  return build_stage(spec);
}

std::string relation(double worst, double reference) {
  if (worst < reference) return "below";
  if (worst > reference) return "above";
  return "equal";
}

// --- cantor -----------------------------------------------------------------

Outcome cmd_cantor(const Config& c) {
  CantorSpec spec;
  spec.k = c.rational("k", "2");
  spec.depth = c.depth("depth", 3);
  spec.base_cell = DyadicInterval(c.dyadic("base_lo", "0"), c.dyadic("base_hi", "1"));
  const CantorStage st = build_stage(spec);
  Outcome o;
  Json stages = Json::array();
  for (int s = 1; s <= spec.depth; ++s) {
    Json row;
    row["stage"] = s;
    row["intervals"] = st.at(s).size();
    row["length"] = st.at(s).front().iv.length().str();
    row["length_exact"] = exact_length(spec.k, s);
    row["sibling_gap"] = st.sibling_gap(s, 0).str();
    const StageMeasure m = measure_stage(spec, s);
    row["measure"] = m.exact ? Json(m.exact->str()) : Json(nullptr);
    row["measure_value"] = m.value;
    stages.push_back(std::move(row));
  }
  o.result["spec"] = {{"k", rational_json(spec.k)}, {"depth", spec.depth}, {"base_cell", to_json(spec.base_cell)}};
  o.result["stages"] = std::move(stages);
  const long verify_cap = c.integer("verify_depth_cap", 14);
  const EvaluableMap g = cantor_map(st);
  if (spec.depth <= verify_cap) {
    const HolderCertificate cert = estimate_constant(g, spec.k, spec.depth);
    const double ref = reference_constant(spec.k);
    o.result["certificate"] = to_json(cert);
    o.result["reference_constant"] = ref;
    o.result["relation_to_reference"] = relation(cert.worst_ratio, ref);
    o.result["map"] = to_json(g);
    o.ok = cert.pass;
  } else {
    o.result["certificate"] = nullptr;
    o.result["note"] = "carrier too large for exhaustive verification";
  }
  o.csv = cantor_csv(st);
  return o;
}

// --- verify-holder ----------------------------------------------------------

Outcome cmd_verify_holder(const Config& c) {
  if (!c.has("input")) throw UsageError("verify-holder needs --input");
  const EvaluableMap f = load_map_file(c.str("input", ""));
  const Rational k = c.rational("k", "1");
  const Dyadic K = c.dyadic("K", "1");
  const std::string mode = c.str("mode", "exhaustive");
  VerifyStrategy vs;
  if (mode == "exhaustive") {
    vs.mode = VerifyMode::EndpointExhaustive;
  } else if (mode == "sampled") {
    vs.mode = VerifyMode::Sampled;
    vs.count = c.u64("samples", 100000);
    vs.seed = c.u64("seed", 0);
  } else {
    throw UsageError("mode must be 'exhaustive' or 'sampled'");
  }
  vs.depth = static_cast<int>(c.integer("depth", 0));
  Outcome o;
  const HolderCertificate cert = verify_dk(f, k, K, vs);
  o.result["map"] = {{"provenance", f.provenance()}, {"points", f.size()}, {"codomain_dim", f.codomain_dim()}};
  o.result["certificate"] = to_json(cert);
  o.ok = cert.pass;
  return o;
}

// --- glue -------------------------------------------------------------------

std::vector<GluePiece> random_pieces(std::size_t count, const Rational& k, int depth, std::uint64_t seed,
                                     Json& described) {
  const CounterRng rng(seed);
  std::vector<GluePiece> pieces;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t base = 8 * i;
    CertifiedMap f;
    Json d;
    if (rng.below(base, 2) == 0) {
      CantorSpec spec;
      spec.k = k;
      spec.depth = depth;
      const Dyadic lo(static_cast<long>(rng.below(base + 1, 4)));
      spec.base_cell = DyadicInterval(lo, lo + Dyadic::pow2(static_cast<long>(rng.below(base + 2, 3)) - 1));
      f.map = cantor_map(build_stage(spec));
      d["kind"] = "cantor";
      d["base_cell"] = to_json(spec.base_cell);
    } else {
      const Dyadic slope = Dyadic::pow2(-static_cast<long>(rng.below(base + 3, 2)));
      const Dyadic shift = Dyadic(static_cast<long>(rng.below(base + 4, 8))).ldexp(-2);
      PiecewiseDomain dom;
      dom.intervals.emplace_back(Dyadic(0), Dyadic(1));
      std::vector<Point> values;
      for (long j = 0; j <= 8; ++j) {
        const Dyadic t = Dyadic(j).ldexp(-3);
        dom.sample_points.push_back(t);
        values.push_back({slope * t + shift});
      }
      f.map = EvaluableMap(1, std::move(dom), std::move(values), "affine(" + slope.str() + ", " + shift.str() + ")",
                           [slope, shift](const Dyadic& t) -> std::optional<Point> {
                             if (t < Dyadic(0) || Dyadic(1) < t) return std::nullopt;
                             return Point{slope * t + shift};
                           });
      d["kind"] = "affine";
      d["slope"] = slope.str();
      d["shift"] = shift.str();
    }
    f.cert = estimate_constant(f.map, k, depth);
    d["certificate"] = to_json(f.cert);
    described.push_back(std::move(d));
    pieces.push_back({std::move(f), std::nullopt, std::nullopt});
  }
  return pieces;
}

// Stretches the domain by a power of two so the constant drops to <= 1.
GluePiece normalized(const GluePiece& p) {
  const DyadicInterval hull = p.f.map.domain().hull();
  long e = 0;
  while (Dyadic::pow2(e) < p.f.cert.K) ++e;
  if (e == 0) return p;
  const Dyadic len = hull.length().is_zero() ? Dyadic(1) : hull.length();
  return {affine_reparam(p.f, DyadicInterval(hull.lo, hull.lo + len),
                         DyadicInterval(hull.lo, hull.lo + len.ldexp(e))),
          std::nullopt, std::nullopt};
}

Outcome cmd_glue(const Config& c) {
  const long count = c.integer("pieces", 5);
  if (count < 1 || count > 64) throw UsageError("'pieces' must lie in 1..64");
  const Rational k = c.rational("k", "2");
  if (k < 1) throw UsageError("'k' must be at least 1");
  const int depth = c.depth("depth", 3);
  const std::uint64_t seed = c.u64("seed", 0);
  Outcome o;
  Json described = Json::array();
  const auto pieces = random_pieces(static_cast<std::size_t>(count), k, depth, seed, described);
  o.result["pieces"] = std::move(described);

  const GlueResult g = glue(pieces, k, true);
  const bool covers = covers_pieces(g.map, pieces);
  o.result["layout"] = to_json(g.layout);
  o.result["certificate"] = to_json(g.cert);
  o.result["covers_pieces"] = covers;

  std::vector<GluePiece> unit;
  for (const auto& p : pieces) unit.push_back(normalized(p));
  const GlueMeasureResult gm = glue_with_measure(unit, k, true);
  o.result["measure"] = {{"ledger", to_json(gm.ledger)},
                         {"certificate", to_json(gm.cert)},
                         {"covers_pieces", covers_pieces(gm.map, unit)}};
  o.ok = g.cert.pass && covers && gm.cert.pass && gm.ledger.total == gm.ledger.bound;
  o.csv = layout_csv(g.layout);
  return o;
}

// --- spacefill --------------------------------------------------------------

Outcome cmd_spacefill(const Config& c) {
  CurveSpec spec;
  spec.n = static_cast<int>(c.integer("n", 2));
  spec.p = static_cast<int>(c.integer("p", 1));
  spec.k_requested = c.rational("k", "1");
  auto [a, b] = ratio_for(spec.k_requested);
  spec.a = a;
  spec.b = b;
  spec.validate();
  const int depth = c.depth("depth", 4);
  const int stab = c.has("stability_depth") ? c.depth("stability_depth", 1) : std::max(1, depth - 2);
  const Curve curve(spec);
  if (static_cast<long>(spec.step_bits()) * depth > 40) throw UsageError("curve depth too large for this n, a, b");

  Outcome o;
  o.result["spec"] = {{"n", spec.n},
                      {"p", spec.p},
                      {"a", spec.a},
                      {"b", spec.b},
                      {"k_requested", rational_json(spec.k_requested)},
                      {"exponent_first", rational_json(spec.exponent_first())},
                      {"exponent_second", rational_json(spec.exponent_second())}};
  const VisitReport v = check_visits(curve, depth);
  o.result["visits"] = {{"depth", depth}, {"cells", v.cells}, {"onto", v.onto}, {"adjacent", v.adjacent}};

  Json comps = Json::array();
  bool stable = true;
  auto component = [&](std::vector<int> axes, const Rational& exponent) {
    if (axes.empty()) return;
    const ComponentCert deep = component_constant(curve, axes, exponent, depth);
    const ComponentCert shallow = component_constant(curve, axes, exponent, stab);
    const double drift = std::abs(deep.constant - shallow.constant);
    const bool ok = drift <= 1e-6;
    stable = stable && ok;
    comps.push_back({{"certificate", to_json(deep)},
                     {"stability_depth", stab},
                     {"stability_constant", shallow.constant},
                     {"drift", drift},
                     {"stable", ok}});
  };
  std::vector<int> first, second;
  for (int i = 0; i < spec.n; ++i) (i < spec.p ? first : second).push_back(i);
  if (spec.a == spec.b) {
    std::vector<int> all = first;
    all.insert(all.end(), second.begin(), second.end());
    component(all, spec.exponent_first());
  } else {
    component(first, spec.exponent_first());
    component(second, spec.exponent_second());
  }
  o.result["components"] = std::move(comps);
  o.result["components_stable"] = stable;
  o.ok = v.onto && v.adjacent;
  if (static_cast<long>(spec.step_bits()) * depth <= 20) o.csv = polyline_csv(curve, depth);
  return o;
}

// --- product-cover ----------------------------------------------------------

Outcome cmd_product_cover(const Config& c) {
  const int depth = c.depth("depth", 4);
  CantorSpec sa, sb;
  sa.k = c.rational("ka", "2");
  sb.k = c.rational("kb", "2");
  sa.depth = sb.depth = depth;
  const CertifiedMap A = identity_cover(build_stage(sa));
  const CertifiedMap B = identity_cover(build_stage(sb));
  const ProductCoverResult R = product_cover(A, B);

  Outcome o;
  o.result["k"] = rational_json(R.k);
  o.result["t"] = rational_json(R.t);
  o.result["exponent"] = rational_json(R.exponent);
  o.result["swapped"] = R.swapped;
  o.result["curve"] = {{"a", R.a}, {"b", R.b}, {"depth", R.curve_depth}};
  o.result["pi1"] = to_json(R.pi1);
  o.result["pi2"] = to_json(R.pi2);
  Json pieces = Json::array();
  for (const auto& p : R.pieces)
    pieces.push_back({{"delta", p.delta},
                      {"variant", {{"mask", p.variant.mask}, {"g", p.variant.g}}},
                      {"points", p.f.map.size()},
                      {"certificate", to_json(p.f.cert)},
                      {"predicted", p.predicted.str()}});
  o.result["pieces"] = std::move(pieces);
  o.result["layout"] = to_json(R.glued.layout);
  o.result["certificate"] = to_json(R.glued.cert);
  o.result["grid_points"] = R.grid_points;
  o.result["image_contains_grid"] = R.image_contains_grid;
  o.result["predictions_hold"] = R.predictions_hold;
  o.result["map"] = to_json(R.glued.map);
  o.ok = R.glued.cert.pass && R.glued.cert.K == Dyadic(1) && R.image_contains_grid;

  std::string csv = "t";
  for (int i = 0; i < R.glued.map.codomain_dim(); ++i) csv += ",f" + std::to_string(i + 1);
  csv += "\n";
  for (std::size_t i = 0; i < R.glued.map.size(); ++i) {
    csv += R.glued.map.carrier()[i].str();
    for (const auto& x : R.glued.map.values()[i]) csv += "," + x.str();
    csv += "\n";
  }
  o.csv = std::move(csv);
  return o;
}

// --- estimate-dim -----------------------------------------------------------

std::vector<int> ladder_to(long top) {
  std::vector<int> l;
  for (long m = 1; m <= std::min<long>(top, 62); ++m) l.push_back(static_cast<int>(m));
  return l;
}

Outcome cmd_estimate_dim(const Config& c) {
  const std::string source = c.str("source", "cantor");
  std::vector<Point> pts;
  std::vector<int> ladder;
  Json src;
  src["source"] = source;
  if (source == "cantor") {
    const CantorStage st = cantor_stage(c, "k", "depth", 12);
    pts = as_points(st.carrier());
    const Rational top = st.spec.k * st.spec.depth;
    ladder = ladder_to(c.integer("ladder_max", mpz_class(top.get_num() / top.get_den()).get_si()));
    src["k"] = rational_json(st.spec.k);
    src["depth"] = st.spec.depth;
  } else if (source == "interval") {
    const long bits = c.integer("bits", 12);
    if (bits < 1 || bits > 24) throw UsageError("'bits' must lie in 1..24");
    for (long j = 0; j <= (1L << bits); ++j) pts.push_back({Dyadic(j).ldexp(-bits)});
    ladder = ladder_to(c.integer("ladder_max", bits));
    src["bits"] = bits;
  } else if (source == "input") {
    if (!c.has("input")) throw UsageError("source 'input' needs --input");
    const EvaluableMap f = load_map_file(c.str("input", ""));
    pts = f.values();
    if (c.has("ladder_max")) ladder = ladder_to(c.integer("ladder_max", 2));
    src["points"] = pts.size();
  } else {
    throw UsageError("source must be 'cantor', 'interval' or 'input'");
  }
  Outcome o;
  const BoxCountEstimate e = box_dimension(pts, ladder);
  o.result["input"] = std::move(src);
  o.result["estimate"] = to_json(e);
  if (c.has("expected")) {
    const double expected = c.real("expected", 0);
    const double tol = c.real("tolerance", kBoxSlopeTol);
    if (!(tol > 0)) throw UsageError("'tolerance' must be positive");
    o.ok = std::abs(e.slope - expected) <= tol;
    o.result["expected"] = expected;
    o.result["tolerance"] = tol;
    o.result["within_tolerance"] = o.ok;
  }
  o.csv = "m,count\n";
  for (std::size_t i = 0; i < e.scales.size(); ++i)
    o.csv += std::to_string(e.scales[i]) + "," + std::to_string(e.counts[i]) + "\n";
  return o;
}

// --- export-hausdorff-cover -------------------------------------------------

Outcome cmd_hausdorff(const Config& c) {
  const CantorStage st = cantor_stage(c, "k", "depth", 6);
  CertifiedMap cover{cantor_map(st), {}};
  cover.cert = estimate_constant(cover.map, st.spec.k, st.spec.depth);
  const long window = c.integer("window", 1);
  Outcome o;
  o.result["cover_certificate"] = to_json(cover.cert);
  Json exports = Json::array();
  o.csv = "sigma,lo,hi,carrier_points,image_diam2\n";
  for (const auto& s : c.list("sigma", {"1/4", "1/8", "1/16"})) {
    Dyadic sigma;
    try {
      sigma = Dyadic::parse(s);
    } catch (const Error&) {
      throw UsageError("sigma values must be dyadic, got '" + s + "'");
    }
    const HausdorffExport e = hausdorff_cover_export(cover, sigma, window);
    o.ok = o.ok && e.diam_ok && e.sum_ok;
    for (const auto& p : e.pieces)
      o.csv += sigma.str() + "," + p.lo.str() + "," + p.hi.str() + "," + std::to_string(p.carrier_points) + "," +
               p.image_diam2.str() + "\n";
    exports.push_back(to_json(e));
  }
  o.result["exports"] = std::move(exports);
  return o;
}

// --- nullify ----------------------------------------------------------------

Outcome cmd_nullify(const Config& c) {
  const CantorStage st = cantor_stage(c, "k", "depth", 3);
  const CertifiedMap f = identity_cover(st);
  const Rational a = c.rational("a", "2");
  std::vector<int> depths;
  for (const auto& d : c.list("depths", {})) {
    Json tmp = {{"d", d}};
    depths.push_back(Config(tmp).depth("d", 1));
  }
  const NullifyPlan plan = nullify_measure(f, a, depths, c.u64("samples", 100000), c.u64("seed", 0));
  Outcome o;
  o.result["cover_certificate"] = to_json(f.cert);
  o.result["a"] = rational_json(plan.a);
  o.result["b"] = rational_json(plan.b);
  o.result["base_cell"] = to_json(plan.base_cell);
  o.result["min_depth"] = plan.min_depth;
  Json stages = Json::array();
  o.csv = "depth,K_star,cantor_measure,domain_measure\n";
  for (const auto& s : plan.stages) {
    stages.push_back(to_json(s));
    o.ok = o.ok && s.g_cert.pass && s.h_cert.pass && s.coverage;
    o.csv += std::to_string(s.depth) + "," + s.K_star.str() + "," +
             (s.exact ? s.cantor_measure.str() : format_double(s.cantor_measure_value)) + "," +
             (s.exact ? s.domain_measure.str() : format_double(s.domain_measure_value)) + "\n";
  }
  o.result["stages"] = std::move(stages);
  o.result["monotone"] = plan.monotone;
  o.ok = o.ok && plan.monotone;
  return o;
}

// --- ma-bound ---------------------------------------------------------------

MaUpperBound ma_bound_for(const CertifiedMap& f, const Rational& a, std::uint64_t samples, std::uint64_t seed) {
  const NullifyPlan plan = nullify_measure(f, a, {}, samples, seed);
  CertifiedMap h{plan.h, {}};
  VerifyStrategy vs;
  vs.depth = plan.stages.back().depth;
  if (h.map.size() > 4096) {
    vs.mode = VerifyMode::Sampled;
    vs.count = samples;
    vs.seed = seed;
  }
  h.cert = verify_dk(h.map, a, Dyadic(1), vs);
  MaUpperBound b = ma_upper(f.map.values(), a, h);
  return b;
}

CertifiedMap restrict_cover(const CertifiedMap& f, const Dyadic& lo, const Dyadic& hi) {
  PiecewiseDomain d;
  std::vector<Point> values;
  for (const auto& iv : f.map.domain().intervals)
    if (lo <= iv.lo && iv.hi <= hi) d.intervals.push_back(iv);
  for (std::size_t i = 0; i < f.map.size(); ++i)
    if (lo <= f.map.carrier()[i] && f.map.carrier()[i] <= hi) {
      d.sample_points.push_back(f.map.carrier()[i]);
      values.push_back(f.map.values()[i]);
    }
  return {EvaluableMap(f.map.codomain_dim(), std::move(d), std::move(values), f.map.provenance() + " restricted"),
          f.cert};
}

Outcome cmd_ma_bound(const Config& c) {
  const CantorStage st = cantor_stage(c, "k", "depth", 3);
  const CertifiedMap f = identity_cover(st);
  const Rational a = c.rational("a", "2");
  const double eps = c.real("epsilon", 1e-3);
  if (!(eps > 0)) throw UsageError("'epsilon' must be positive");
  const std::uint64_t samples = c.u64("samples", 100000), seed = c.u64("seed", 0);

  Outcome o;
  const MaUpperBound whole = ma_bound_for(f, a, samples, seed);
  o.result["whole"] = to_json(whole);
  std::vector<MaUpperBound> parts;
  Json pj = Json::array();
  for (const auto& iv : st.at(1)) {
    parts.push_back(ma_bound_for(restrict_cover(f, iv.iv.lo, iv.iv.hi), a, samples, seed));
    pj.push_back(to_json(parts.back()));
  }
  o.result["parts"] = std::move(pj);
  const MaCombined comb = ma_combine(parts, eps);
  o.result["combined"] = {{"sum_of_parts", comb.sum_of_parts.str()},
                          {"combined_measure", comb.bound.domain_measure.str()},
                          {"epsilon", comb.epsilon},
                          {"slack_used", comb.slack_used},
                          {"within", comb.within},
                          {"certificate", to_json(comb.bound.cover.cert)}};
  o.ok = whole.cover.cert.pass && comb.within;
  o.csv = "part,domain_measure\n";
  for (std::size_t i = 0; i < parts.size(); ++i) o.csv += std::to_string(i) + "," + parts[i].domain_measure.str() + "\n";
  o.csv += "whole," + whole.domain_measure.str() + "\ncombined," + comb.bound.domain_measure.str() + "\n";
  return o;
}

// --- Morse-Sard -------------------------------------------------------------

SynthesizedFunction synth_from(const Config& c, int ddef) {
  return SynthesizedFunction(c.rational("kval", "2"), c.rational("k", "3/2"), c.depth("depth", ddef));
}

std::string critical_csv(const CriticalSample& s) {
  std::string out;
  if (s.points.empty()) return "x\n";
  for (std::size_t i = 0; i < s.points.front().size(); ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
  for (std::size_t i = 0; i < s.images.front().size(); ++i) out += ",f" + std::to_string(i + 1);
  out += "\n";
  for (std::size_t r = 0; r < s.points.size(); ++r) {
    std::string row;
    for (std::size_t i = 0; i < s.points[r].size(); ++i) row += (i ? "," : "") + format_double(s.points[r][i]);
    for (const auto& v : s.images[r]) row += "," + v.str();
    out += row + "\n";
  }
  return out;
}

Json sample_json(const CriticalSample& s) {
  return {{"grid", s.grid}, {"p", s.p}, {"tau", s.tau}, {"critical_points", s.points.size()}};
}

Outcome cmd_check_p9(const Config& c) {
  const std::string name = c.str("function", "paraboloid");
  SmoothFunction f;
  std::vector<Vec> extra;
  std::vector<int> ladder;
  if (name == "synthesized") {
    const SynthesizedFunction s = synth_from(c, 6);
    f = s.as_smooth();
    for (const auto& x : s.knots()) extra.push_back({x.to_double()});
    const Rational top = c.rational("kval", "2") * c.depth("depth", 6);
    ladder = ladder_to(mpz_class(top.get_num() / top.get_den()).get_si());
  } else {
    f = zoo_function(name);
    if (c.has("k")) f.k = static_cast<int>(c.integer("k", f.k));
  }
  if (c.has("lambda")) f.lambda = c.real("lambda", f.lambda);
  if (f.lambda < 0 || f.lambda > 1) throw UsageError("'lambda' must lie in [0, 1]");
  if (c.has("ladder_max")) ladder = ladder_to(c.integer("ladder_max", 2));
  const int p = static_cast<int>(c.integer("p", 0));
  const long grid = c.integer("grid", f.n == 1 ? 4096 : 64);
  if (grid < 64 || grid > (f.n == 1 ? (1L << 22) : 4096L)) throw UsageError("'grid' out of range");
  const CriticalSample s = critical_values_sample(f, p, static_cast<int>(grid), extra);
  const BoundReport r = check_bound_p9(s, f.n, f.m, p, f.k, f.lambda, ladder);
  Outcome o;
  o.result["function"] = {{"name", f.name}, {"n", f.n}, {"m", f.m}, {"k", f.k}, {"lambda", f.lambda}};
  o.result["sample"] = sample_json(s);
  o.result["bound"] = to_json(r);
  o.ok = r.pass;
  o.csv = critical_csv(s);
  return o;
}

Outcome cmd_check_p7(const Config& c) {
  const std::string name = c.str("function", "cubic");
  SmoothFunction f;
  std::vector<Dyadic> candidates, fit;
  std::vector<int> flat_ladder, image_ladder;
  if (name == "synthesized") {
    const int depth = c.depth("depth", 6, 2);
    const SynthesizedFunction s = synth_from(c, depth);
    f = s.as_smooth();
    candidates = s.knots();
    CantorSpec coarse;
    coarse.k = s.k_dom();
    coarse.depth = depth - 1;
    fit = build_stage(coarse).carrier();
    const Rational fd = s.k_dom() * depth, id = c.rational("kval", "2") * depth;
    flat_ladder = ladder_to(mpz_class(fd.get_num() / fd.get_den()).get_si());
    image_ladder = ladder_to(mpz_class(id.get_num() / id.get_den()).get_si());
  } else {
    f = zoo_function(name);
    if (f.n != 1 || f.m != 1) throw UsageError("check-p7 needs a scalar function of one variable");
    if (c.has("k")) f.k = static_cast<int>(c.integer("k", f.k));
    const long bits = c.integer("bits", 8);
    if (bits < 1 || bits > 16) throw UsageError("'bits' must lie in 1..16");
    for (long j = -(1L << (bits - 1)); j <= (1L << (bits - 1)); ++j) candidates.push_back(Dyadic(j).ldexp(1 - bits));
  }
  if (c.has("lambda")) f.lambda = c.real("lambda", f.lambda);
  const double tau = c.real("tau_flat", kTauFlat);
  if (!(tau > 0)) throw UsageError("'tau_flat' must be positive");
  const FlatReport r = flat_set_image_check(f, f.k, f.lambda, candidates, fit, tau, flat_ladder, image_ladder);
  Outcome o;
  o.result["function"] = {{"name", f.name}, {"k", f.k}, {"lambda", f.lambda}};
  o.result["candidates"] = candidates.size();
  o.result["flat"] = to_json(r);
  o.ok = r.pass;
  o.csv = "x,f\n";
  for (const auto& x : candidates) {
    const double v = x.to_double();
    bool flat = true;
    for (int j = 1; j < r.order && flat; ++j) flat = std::abs(f.deriv(v, j)) <= tau;
    if (flat) o.csv += x.str() + "," + format_double(f.F({v})[0]) + "\n";
  }
  return o;
}

Outcome cmd_synth_critical(const Config& c) {
  const SynthesizedFunction s = synth_from(c, 6);
  const SynthReport rep = s.verify();
  SmoothFunction f = s.as_smooth();
  if (c.has("lambda")) f.lambda = c.real("lambda", f.lambda);
  std::vector<Vec> extra;
  for (const auto& x : s.knots()) extra.push_back({x.to_double()});
  const long grid = c.integer("grid", 4096);
  if (grid < 64 || grid > (1L << 22)) throw UsageError("'grid' out of range");
  const CriticalSample cs = critical_values_sample(f, 0, static_cast<int>(grid), extra);
  std::set<Dyadic> values;
  for (const auto& img : cs.images) values.insert(img[0]);
  const bool contains = std::all_of(s.knot_values().begin(), s.knot_values().end(),
                                    [&](const Dyadic& y) { return values.count(y) > 0; });
  const Rational top = c.rational("kval", "2") * rep.depth;
  const BoundReport br =
      check_bound_p9(cs, 1, 1, 0, f.k, f.lambda, ladder_to(mpz_class(top.get_num() / top.get_den()).get_si()));

  Outcome o;
  o.result["restriction"] = "m = 1";
  o.result["knots"] = s.knots().size();
  o.result["synthesis"] = to_json(rep);
  o.result["critical"] = {{"sample", sample_json(cs)}, {"contains_value_carrier", contains}};
  o.result["class_label"] = {{"k", f.k}, {"lambda", f.lambda}};
  o.result["bound"] = to_json(br);
  o.ok = rep.exact_values && rep.flat_ok && rep.holder_ok && contains && br.pass;
  const long bits = c.integer("bits", 10);
  if (bits < 1 || bits > 20) throw UsageError("'bits' must lie in 1..20");
  o.csv = s.samples_csv(static_cast<int>(bits));
  return o;
}

using Handler = Outcome (*)(const Config&);

struct Entry {
  CommandSpec spec;
  Handler run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"cantor", "Cantor stages, gaps, measures and the certified map g",
        {"k", "depth", "base_lo", "base_hi", "verify_depth_cap"}},
       cmd_cantor},
      {{"glue", "glue seeded Cantor/affine pieces into one constant-1 map", {"pieces", "k", "depth"}}, cmd_glue},
      {{"spacefill", "curve visits and component constants", {"n", "p", "k", "depth", "stability_depth"}},
       cmd_spacefill},
      {{"product-cover", "cover of a product of two Cantor carriers", {"ka", "kb", "depth"}}, cmd_product_cover},
      {{"estimate-dim", "box-counting dimension",
        {"source", "k", "depth", "bits", "input", "ladder_max", "expected", "tolerance"}},
       cmd_estimate_dim},
      {{"export-hausdorff-cover", "split a cover into pieces of small diameter", {"k", "depth", "sigma", "window"}},
       cmd_hausdorff},
      {{"nullify", "covers whose domain measure tends to zero", {"k", "depth", "a", "depths", "samples"}},
       cmd_nullify},
      {{"ma-bound", "outer m_a measure bounds and their combination", {"k", "depth", "a", "epsilon", "samples"}},
       cmd_ma_bound},
      {{"check-p9", "critical-value dimension against min{p + (n-p)/(k+lambda), m}",
        {"function", "p", "grid", "k", "lambda", "kval", "depth", "ladder_max"}},
       cmd_check_p9},
      {{"check-p7", "flat-set image check", {"function", "k", "lambda", "kval", "depth", "bits", "tau_flat"}},
       cmd_check_p7},
      {{"synth-critical", "C^{k,lambda} function with a Cantor set of critical values",
        {"kval", "k", "depth", "lambda", "grid", "bits"}},
       cmd_synth_critical},
      {{"verify-holder", "check a map file against a D^k bound", {"input", "k", "K", "mode", "samples", "depth"}},
       cmd_verify_holder},
  };
  return r;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = [] {
    std::vector<CommandSpec> s;
    for (const auto& e : registry()) {
      CommandSpec cs = e.spec;
      cs.keys.push_back("seed");
      s.push_back(std::move(cs));
    }
    return s;
  }();
  return specs;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& s : command_specs())
    if (s.name == name) return &s;
  return nullptr;
}

std::string usage_text() {
  std::string out = "usage: outerdim <command> [--key value ...] [--config file.json] [--out report.json] [--csv file]\n\ncommands:\n";
  for (const auto& s : command_specs()) {
    out += "  " + s.name + std::string(s.name.size() < 24 ? 24 - s.name.size() : 1, ' ') + s.summary + "\n";
  }
  out += "\nexit codes: 0 ok, 1 verification failure, 2 usage, 3 infeasible construction\n";
  return out;
}

CommandResult run_command(const std::string& name, const Json& config) {
  CommandResult res;
  Json& rep = res.report;
  rep["command"] = name;
  rep["status"] = "ok";
  rep["config"] = config;
  const Json cfg = config.is_null() ? Json::object() : config;
  Json result;
  std::string status = "ok";
  try {
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    const Entry* entry = nullptr;
    for (const auto& e : registry())
      if (e.spec.name == name) entry = &e;
    if (!entry) throw UsageError("unknown command '" + name + "'");
    const CommandSpec* spec = find_command(name);
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
      if (std::find(spec->keys.begin(), spec->keys.end(), it.key()) == spec->keys.end())
        throw UsageError("unknown option '" + it.key() + "' for " + name);
    const Config c(cfg);
    c.u64("seed", 0);
    Outcome o = entry->run(c);
    result = std::move(o.result);
    res.csv = std::move(o.csv);
    if (!o.ok) {
      status = "verification_failed";
      res.exit_code = ExitVerification;
    }
  } catch (const UsageError& e) {
    status = "usage_error";
    res.exit_code = ExitUsage;
    rep["error"] = {{"code", "Usage"}, {"message", e.what()}};
  } catch (const Error& e) {
    if (is_infeasible_construction(e.code())) {
      status = "infeasible";
      res.exit_code = ExitInfeasible;
    } else if (e.code() == ErrorCode::Internal || e.code() == ErrorCode::RangeEscape ||
               e.code() == ErrorCode::NotInCarrier) {
      status = "error";
      res.exit_code = ExitVerification;
    } else {
      status = "usage_error";
      res.exit_code = ExitUsage;
    }
    rep["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    status = "error";
    res.exit_code = ExitVerification;
    rep["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  rep["status"] = status;
  rep["exit_code"] = res.exit_code;
  if (!result.is_null()) rep["result"] = std::move(result);
  std::uint64_t seed = 0;
  try {
    seed = Config(cfg).u64("seed", 0);
  } catch (const std::exception&) {
  }
  rep["reproducibility"] = {{"seed", seed},
                            {"version", OUTERDIM_VERSION},
                            {"tolerances",
                             {{"log_compare", kLogCompareTol}, {"box_slope", kBoxSlopeTol}, {"tau_flat", kTauFlat}}},
                            {"depth_cap", kDepthCap}};
  return res;
}

}  // namespace outerdim
