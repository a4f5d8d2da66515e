#include "outerdim/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "outerdim/error.hpp"

namespace outerdim {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json to_json(const Dyadic& d) { return d.str(); }

Json rational_json(const Rational& q) { return rational_str(q); }

Json to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(x.str());
  return a;
}

Json to_json(const DyadicInterval& iv) { return Json::array({iv.lo.str(), iv.hi.str()}); }

Json to_json(const HolderCertificate& c) {
  Json j;
  j["k"] = rational_json(c.k);
  j["K"] = to_json(c.K);
  j["mode"] = verify_mode_name(c.mode);
  j["verified_depth"] = c.verified_depth;
  j["pass"] = c.pass;
  j["pairs_tested"] = c.pairs_tested;
  j["violations"] = c.violations;
  j["worst_ratio"] = c.worst_ratio;
  j["worst_pair"] = Json::array({c.worst_pair.first.str(), c.worst_pair.second.str()});
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const EvaluableMap& m) {
  Json j;
  j["codomain_dim"] = m.codomain_dim();
  j["provenance"] = m.provenance();
  Json iv = Json::array();
  for (const auto& i : m.domain().intervals) iv.push_back(to_json(i));
  j["domain"] = {{"intervals", iv}};
  Json c = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) c.push_back({{"t", m.carrier()[i].str()}, {"f", to_json(m.values()[i])}});
  j["carrier"] = std::move(c);
  return j;
}

Json to_json(const GlueLayout& l) {
  Json j;
  j["k"] = rational_json(l.k);
  Json rows = Json::array();
  for (std::size_t i = 0; i < l.slots.size(); ++i) {
    Json r;
    r["source"] = to_json(l.sources[i]);
    r["slot"] = to_json(l.slots[i]);
    r["scale"] = to_json(l.scales[i]);
    if (i < l.gaps.size()) r["gap_after"] = to_json(l.gaps[i]);
    rows.push_back(std::move(r));
  }
  j["slots"] = std::move(rows);
  return j;
}

Json to_json(const MeasureLedger& l) {
  Json j;
  Json pm = Json::array(), sm = Json::array();
  for (const auto& d : l.piece_measures) pm.push_back(d.str());
  for (const auto& d : l.slot_measures) sm.push_back(d.str());
  j["piece_measures"] = pm;
  j["slot_measures"] = sm;
  j["total"] = to_json(l.total);
  j["sum_of_piece_measures"] = to_json(l.bound);
  j["equal"] = l.total == l.bound;
  return j;
}

Json to_json(const ComponentCert& c) {
  Json j;
  j["axes"] = c.axes;
  j["exponent"] = rational_json(c.exponent);
  j["depth"] = c.depth;
  j["constant"] = c.constant;
  j["worst_pair"] = Json::array({c.worst_pair.first.str(), c.worst_pair.second.str()});
  j["nodes"] = c.nodes;
  return j;
}

Json to_json(const BoxCountEstimate& e) {
  Json j;
  j["scales"] = e.scales;
  j["counts"] = e.counts;
  j["fitted_scales"] = e.fitted;
  j["slope"] = e.slope;
  j["intercept"] = e.intercept;
  j["r2"] = e.fit_r2;
  j["residuals"] = e.residuals;
  return j;
}

Json to_json(const HausdorffExport& e) {
  Json j;
  j["k"] = rational_json(e.k);
  j["M"] = to_json(e.M);
  j["sigma"] = to_json(e.sigma);
  j["window"] = e.window;
  j["s0"] = e.s0;
  j["diam_pow_k_bound"] = to_json(e.diam_pow_k);
  j["diam_bound"] = e.diam_bound;
  j["pieces"] = e.pieces.size();
  j["sum"] = to_json(e.sum);
  j["limit"] = to_json(e.limit);
  j["diam_ok"] = e.diam_ok;
  j["sum_ok"] = e.sum_ok;
  Json cells = Json::array();
  for (const auto& p : e.pieces)
    cells.push_back({{"cell", Json::array({p.lo.str(), p.hi.str()})},
                     {"carrier_points", p.carrier_points},
                     {"image_diam2", p.image_diam2.str()}});
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const MaUpperBound& b) {
  Json j;
  j["a"] = rational_json(b.a);
  j["domain_measure"] = to_json(b.domain_measure);
  j["domain_measure_value"] = b.domain_measure_value;
  j["measure_exact"] = b.measure_exact;
  j["cover_certificate"] = to_json(b.cover.cert);
  j["cover_points"] = b.cover.map.size();
  return j;
}

Json to_json(const NullifyStage& s) {
  Json j;
  j["depth"] = s.depth;
  j["K_star"] = to_json(s.K_star);
  j["cantor_measure"] = s.exact ? Json(s.cantor_measure.str()) : Json(nullptr);
  j["cantor_measure_value"] = s.cantor_measure_value;
  j["exact"] = s.exact;
  j["domain_measure"] = s.exact ? Json(s.domain_measure.str()) : Json(nullptr);
  j["domain_measure_value"] = s.domain_measure_value;
  j["g_certificate"] = to_json(s.g_cert);
  j["h_certificate"] = to_json(s.h_cert);
  j["h_points"] = s.h_points;
  j["coverage"] = s.coverage;
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["bound"] = r.bound;
  j["estimate"] = r.estimate;
  j["tolerance"] = 0.05;
  j["trivial"] = r.trivial;
  j["pass"] = r.pass;
  if (!r.trivial) j["box"] = to_json(r.box);
  return j;
}

Json to_json(const FlatReport& r) {
  Json j;
  j["order"] = r.order;
  j["flat_points"] = r.flat_points;
  j["M"] = r.M;
  j["pairs"] = r.pairs;
  j["violations"] = r.violations;
  j["flat_dim"] = r.flat_dim;
  j["image_dim"] = r.image_dim;
  j["dim_ok"] = r.dim_ok;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const SynthReport& r) {
  Json j;
  j["k_val"] = rational_json(r.k_val);
  j["k"] = rational_json(r.k);
  j["k_dom"] = rational_json(r.k_dom);
  j["depth"] = r.depth;
  j["exact_values"] = r.exact_values;
  j["max_flat_derivative"] = r.max_flat_derivative;
  j["flat_tolerance"] = r.flat_tolerance;
  j["flat_ok"] = r.flat_ok;
  j["holder_exponent"] = r.holder_exponent;
  j["holder_scales"] = r.holder_scales;
  j["holder_omegas"] = r.holder_omegas;
  j["holder_ok"] = r.holder_ok;
  return j;
}

EvaluableMap map_from_json(const Json& j) {
  try {
    const int n = j.at("codomain_dim").get<int>();
    PiecewiseDomain dom;
    for (const auto& iv : j.at("domain").at("intervals"))
      dom.intervals.emplace_back(Dyadic::parse(iv.at(0).get<std::string>()), Dyadic::parse(iv.at(1).get<std::string>()));
    std::vector<Point> values;
    for (const auto& c : j.at("carrier")) {
      dom.sample_points.push_back(Dyadic::parse(c.at("t").get<std::string>()));
      Point p;
      for (const auto& x : c.at("f")) p.push_back(Dyadic::parse(x.get<std::string>()));
      values.push_back(std::move(p));
    }
    return EvaluableMap(n, std::move(dom), std::move(values), j.value("provenance", std::string("input")));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed map: ") + e.what());
  }
}

EvaluableMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path + ": " + e.what());
  }
  if (j.contains("map")) return map_from_json(j["map"]);
  if (j.contains("result") && j["result"].contains("map")) return map_from_json(j["result"]["map"]);
  return map_from_json(j);
}

}  // namespace outerdim
