// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "outerdim/cantor.hpp"
#include "outerdim/commands.hpp"
#include "outerdim/dimension.hpp"
#include "outerdim/morse_sard.hpp"
#include "outerdim/outerdim.h"
#include "outerdim/product_cover.hpp"
#include "outerdim/spacefill.hpp"

using namespace outerdim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!ok) o.detail += (o.detail.empty() ? "" : "; ") + what;
}

CantorStage stage(const Rational& k, int depth) {
  CantorSpec s;
  s.k = k;
  s.depth = depth;
  return build_stage(s);
}

CertifiedMap identity_cover(const CantorStage& st) {
  CertifiedMap c{identity_map(st.domain()), {}};
  c.cert = verify_dk(c.map, Rational(1), Dyadic(1));
  return c;
}

Outcome cantor_geometry() {
  Outcome o;
  const CantorStage st = stage(Rational(2), 10);
  std::size_t gaps = 0;
  for (int s = 1; s <= 10; ++s) {
    const auto& ivs = st.at(s);
    const Dyadic gap = Dyadic(2).ldexp(-2 * s);  // (2^k - 2) / 2^(ks)
    if (s >= 2)
      for (std::size_t j = 0; j + 1 < ivs.size(); j += 2) {
        ++gaps;
        note(o, ivs[j + 1].iv.lo - ivs[j].iv.hi == gap, "gap mismatch at stage " + std::to_string(s));
      }
    Dyadic total;
    for (const auto& c : ivs) total += c.iv.length();
    note(o, total == Dyadic(1).ldexp(-s), "measure mismatch at stage " + std::to_string(s));
  }
  if (o.pass) o.detail = std::to_string(gaps) + " inner gaps and 10 stage measures exact";
  return o;
}

Outcome holder_stability() {
  Outcome o;
  std::vector<double> w;
  for (int d = 1; d <= 10; ++d) w.push_back(verify_dk(cantor_map(stage(Rational(2), d)), Rational(2), Dyadic(2)).worst_ratio);
  for (std::size_t i = 1; i < w.size(); ++i) note(o, w[i] >= w[i - 1], "worst ratio decreased at depth " + std::to_string(i + 1));
  const double drift = std::abs(w[9] - w[7]);
  note(o, drift < 1e-9, "depth 8 -> 10 drift " + fmt("%.3g", drift));
  const double ref = reference_constant(Rational(2));
  const char* rel = w[9] < ref ? "below" : (w[9] > ref ? "above" : "equal to");
  const std::string d = "worst ratio " + fmt("%.12g", w[9]) + " at depth 10, drift 8->10 " + fmt("%.3g", drift) + ", " +
                        rel + " reference constant " + fmt("%g", ref);
  o.detail = o.detail.empty() ? d : o.detail + "; " + d;
  return o;
}

Outcome gluing() {
  Outcome o;
  const CommandResult r = run_command("glue", {{"pieces", 5}, {"seed", 2024}});
  const Json& res = r.report["result"];
  note(o, r.exit_code == ExitOk, "glue exit code " + std::to_string(r.exit_code));
  const Json& cert = res["certificate"];
  note(o, cert["pass"] == true && cert["K"] == "1/2^0" && cert["mode"] == "endpoint-exhaustive",
       "glued map not certified at constant 1");
  note(o, res["covers_pieces"] == true, "glued image misses piece images");
  const Json& ledger = res["measure"]["ledger"];
  Dyadic sum;
  for (const auto& m : ledger["piece_measures"]) sum += Dyadic::parse(m.get<std::string>());
  const Dyadic total = Dyadic::parse(ledger["total"].get<std::string>());
  note(o, total == sum, "ledger total " + total.str() + " != sum " + sum.str());
  note(o, res["measure"]["certificate"]["pass"] == true, "measure glue not certified");
  if (o.pass)
    o.detail = "5 pieces, worst ratio " + fmt("%.9g", cert["worst_ratio"].get<double>()) + " over " +
               std::to_string(cert["pairs_tested"].get<std::uint64_t>()) + " pairs, ledger total " + total.str();
  return o;
}

Outcome space_filling() {
  Outcome o;
  CurveSpec iso;
  iso.n = 2;
  iso.p = 2;
  const Curve hilbert(iso);
  for (int d = 1; d <= 6; ++d) {
    const VisitReport v = check_visits(hilbert, d);
    note(o, v.onto && v.adjacent && v.cells == (std::uint64_t{1} << (2 * d)),
         "isotropic visits fail at depth " + std::to_string(d));
  }
  CurveSpec an;
  an.n = 2;
  an.p = 1;
  an.k_requested = 2;
  std::tie(an.a, an.b) = ratio_for(an.k_requested);
  const Curve curve(an);
  note(o, an.exponent_first() == Rational(3, 2) && an.exponent_second() == Rational(3), "component exponents");
  std::string consts;
  for (int axis = 0; axis < 2; ++axis) {
    const Rational e = axis == 0 ? an.exponent_first() : an.exponent_second();
    const double k6 = component_constant(curve, {axis}, e, 6).constant;
    const double k8 = component_constant(curve, {axis}, e, 8).constant;
    const std::string tag = "pi_" + std::to_string(axis + 1) + " (exponent " + rational_str(e) + "): K6 " +
                            fmt("%.9g", k6) + ", K8 " + fmt("%.9g", k8);
    consts += (consts.empty() ? "" : "; ") + tag;
    note(o, std::abs(k8 - k6) <= 1e-6, tag + ", |K8 - K6| = " + fmt("%.3g", std::abs(k8 - k6)) + " > 1e-6");
  }
  if (o.pass) o.detail = "visits ok for d <= 6; " + consts;
  return o;
}

Outcome product_pipeline() {
  Outcome o;
  const CertifiedMap A = identity_cover(stage(Rational(2), 4));
  const ProductCoverResult R = product_cover(A, A);
  note(o, R.exponent == Rational(2), "exponent " + rational_str(R.exponent));
  note(o, R.glued.cert.pass && R.glued.cert.K == Dyadic(1) && R.glued.cert.mode == VerifyMode::EndpointExhaustive,
       "glued cover not certified at constant 1");
  std::set<Point> image(R.glued.map.values().begin(), R.glued.map.values().end());
  std::size_t hit = 0;
  for (const auto& x : A.map.carrier())
    for (const auto& y : A.map.carrier()) hit += image.count(Point{x, y});
  note(o, hit == A.map.size() * A.map.size(), "grid points missed: " + std::to_string(A.map.size() * A.map.size() - hit));
  if (o.pass)
    o.detail = std::to_string(hit) + " grid points covered, " + std::to_string(R.pieces.size()) + " pieces, worst ratio " +
               fmt("%.9g", R.glued.cert.worst_ratio);
  return o;
}

Outcome hausdorff() {
  Outcome o;
  CertifiedMap g{cantor_map(stage(Rational(2), 6)), {}};
  g.cert = estimate_constant(g.map, Rational(2));
  std::string d;
  for (const char* s : {"1/4", "1/8", "1/16"}) {
    const Dyadic sigma = Dyadic::parse(s);
    const HausdorffExport e = hausdorff_cover_export(g, sigma, 1);
    // independent recomputation: s0 minimal with M 2^-s0 <= sigma^2, sum = count * M 2^-s0
    int s0 = 0;
    while (sigma * sigma < g.cert.K.ldexp(-s0)) ++s0;
    const Dyadic sum = Dyadic(static_cast<long>(e.pieces.size())) * g.cert.K.ldexp(-s0);
    bool diam = true;
    for (const auto& p : e.pieces) diam = diam && p.image_diam2 <= sigma * sigma;
    note(o, e.s0 == s0, std::string("s0 mismatch at sigma ") + s);
    note(o, diam && e.diam_ok, std::string("diameter above sigma ") + s);
    note(o, sum == e.sum && sum <= Dyadic(2) * g.cert.K, std::string("sum bound fails at sigma ") + s);
    d += std::string(d.empty() ? "" : ", ") + "sigma " + s + ": " + std::to_string(e.pieces.size()) + " pieces, sum " +
         fmt("%.6g", e.sum.to_double());
  }
  if (o.pass) o.detail = d + " <= 2M = " + fmt("%.6g", 2 * g.cert.K.to_double());
  return o;
}

Outcome nullification() {
  Outcome o;
  const CertifiedMap f = identity_cover(stage(Rational(2), 3));
  std::string d;
  for (const Rational& a : {Rational(3, 2), Rational(2)}) {
    const NullifyPlan plan = nullify_measure(f, a, {6, 7, 8}, 100000, 1);
    double prev = INFINITY;
    for (const auto& s : plan.stages) {
      const double expect = std::pow(2.0, s.depth - to_double(a) * s.depth) * s.K_star.to_double();
      if (s.exact) {
        const Dyadic exact = Dyadic(1).ldexp(s.depth) * Dyadic(1).ldexp(-static_cast<long>(to_double(a) * s.depth)) * s.K_star;
        note(o, s.domain_measure == exact, "inexact measure at depth " + std::to_string(s.depth));
      }
      note(o, std::abs(s.domain_measure_value - expect) <= 1e-12 * expect,
           "measure value off at depth " + std::to_string(s.depth));
      note(o, s.domain_measure_value < prev, "measure not decreasing at depth " + std::to_string(s.depth));
      prev = s.domain_measure_value;
      note(o, s.h_cert.pass && s.h_cert.violations == 0 && s.h_cert.pairs_tested == 100000 &&
                  s.h_cert.mode == VerifyMode::Sampled,
           "sampled check failed at depth " + std::to_string(s.depth));
      note(o, s.coverage, "coverage lost at depth " + std::to_string(s.depth));
    }
    d += std::string(d.empty() ? "" : "; ") + "a " + rational_str(a) + ": measures";
    for (const auto& s : plan.stages) d += " " + fmt("%.4g", s.domain_measure_value);
  }
  if (o.pass) o.detail = d + "; 1e5 sampled pairs per depth, no violations";
  return o;
}

Outcome box_dimension_oracle() {
  Outcome o;
  std::vector<Dyadic> line;
  for (long j = 0; j <= 4096; ++j) line.push_back(Dyadic(j).ldexp(-12));
  const double s1 = box_dimension(as_points(line)).slope;
  note(o, std::abs(s1 - 1.0) <= 0.02, "interval slope " + fmt("%.4f", s1));
  std::string d = "interval " + fmt("%.4f", s1);
  for (const Rational& k : {Rational(3, 2), Rational(2), Rational(3)}) {
    std::vector<int> ladder;
    for (int m = 1; m <= static_cast<int>(std::floor(to_double(k) * 12)); ++m) ladder.push_back(m);
    const double s = box_dimension(as_points(stage(k, 12).carrier()), ladder).slope;
    note(o, std::abs(s - 1.0 / to_double(k)) <= 0.05, "Cantor(" + rational_str(k) + ") slope " + fmt("%.4f", s));
    d += ", Cantor(" + rational_str(k) + ") " + fmt("%.4f", s) + " vs " + fmt("%.4f", 1.0 / to_double(k));
  }
  if (o.pass) o.detail = d;
  return o;
}

Outcome morse_sard() {
  Outcome o;
  const SynthesizedFunction f(Rational(2), Rational(3, 2), 6);
  const SynthReport rep = f.verify();
  SmoothFunction sf = f.as_smooth();
  std::vector<Vec> extra;
  for (const auto& x : f.knots()) extra.push_back({x.to_double()});
  const CriticalSample cs = critical_values_sample(sf, 0, 4096, extra);
  std::set<Dyadic> values;
  for (const auto& y : cs.images) values.insert(y[0]);
  const std::vector<Dyadic> target = stage(Rational(2), 6).carrier();
  std::size_t hit = 0;
  for (const auto& y : target) hit += values.count(y);
  note(o, hit == target.size(), "critical values miss " + std::to_string(target.size() - hit) + " carrier points");
  note(o, rep.exact_values, "knot values inexact");
  note(o, rep.max_flat_derivative <= rep.flat_tolerance,
       "flat derivative " + fmt("%.3g", rep.max_flat_derivative) + " > " + fmt("%.3g", rep.flat_tolerance));
  note(o, rep.holder_exponent >= 0.45, "Hoelder exponent " + fmt("%.4f", rep.holder_exponent));
  std::vector<int> ladder;
  for (int m = 1; m <= 12; ++m) ladder.push_back(m);
  const BoundReport br = check_bound_p9(cs, 1, 1, 0, 1.0, 0.9, ladder);
  note(o, br.pass && br.estimate <= 1.0 / 1.9 + 0.05, "p9 estimate " + fmt("%.4f", br.estimate));
  note(o, std::abs(br.estimate - 0.5) <= 0.05, "p9 estimate " + fmt("%.4f", br.estimate) + " not near 0.5");
  if (o.pass)
    o.detail = std::to_string(hit) + " carrier values critical, max |f'| " + fmt("%.3g", rep.max_flat_derivative) +
               " <= " + fmt("%.3g", rep.flat_tolerance) + ", exponent " + fmt("%.4f", rep.holder_exponent) +
               ", estimate " + fmt("%.4f", br.estimate) + " <= " + fmt("%.4f", br.bound) + " + 0.05";
  return o;
}

std::string run_capi(const char* command, const std::string& config, int& status) {
  od_run* r = od_run_new();
  status = od_run_execute(r, command, config.c_str());
  std::string out = od_run_report(r);
  out += od_run_csv(r);
  od_run_free(r);
  return out;
}

Outcome determinism() {
  Outcome o;
  const auto input = std::filesystem::temp_directory_path() / "outerdim_acceptance_cantor.json";
  {
    int st = 0;
    od_run* r = od_run_new();
    st = od_run_execute(r, "cantor", R"({"k": "2", "depth": 5})");
    std::ofstream(input) << od_run_report(r);
    od_run_free(r);
    note(o, st == OD_OK, "cantor input run failed");
  }
  const std::vector<std::pair<const char*, std::string>> runs = {
      {"cantor", R"({"k": "2", "depth": 6})"},
      {"verify-holder", R"({"input": ")" + input.string() + R"(", "k": "2", "K": "2", "mode": "sampled", "samples": 5000})"},
      {"glue", R"({"pieces": 5})"},
      {"spacefill", R"({"n": 2, "p": 1, "k": "2", "depth": 4})"},
      {"product-cover", R"({"depth": 3})"},
      {"estimate-dim", R"({"source": "cantor", "k": "2", "depth": 10})"},
      {"export-hausdorff-cover", R"({"k": "2", "depth": 6})"},
      {"nullify", R"({"depth": 3, "a": "2", "samples": 20000})"},
      {"ma-bound", R"({"depth": 3, "a": "2", "samples": 20000})"},
      {"check-p9", R"({"function": "saddle", "p": 1, "grid": 128})"},
      {"check-p7", R"({"function": "synthesized", "kval": "2", "depth": 6})"},
      {"synth-critical", R"({"kval": "2", "k": "1.5", "depth": 6})"},
  };
  std::size_t same = 0;
  for (const auto& [cmd, cfg] : runs) {
    std::string with_seed = cfg;
    with_seed.insert(with_seed.size() - 1, R"(, "seed": 99)");
    setenv("OUTERDIM_THREADS", "1", 1);
    int s1 = 0, s2 = 0;
    const std::string a = run_capi(cmd, with_seed, s1);
    setenv("OUTERDIM_THREADS", "4", 1);
    const std::string b = run_capi(cmd, with_seed, s2);
    unsetenv("OUTERDIM_THREADS");
    note(o, s1 == s2 && a == b, std::string(cmd) + " reports differ");
    note(o, s1 != OD_USAGE && s1 < OD_INVALID_HANDLE, std::string(cmd) + " rejected its config");
    same += a == b;
  }
  std::filesystem::remove(input);
  if (o.pass) o.detail = std::to_string(same) + "/12 commands byte-identical across reruns and thread counts";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cantor geometry", 5, cantor_geometry},
      {2, "Hoelder oracle stability", 60, holder_stability},
      {3, "gluing soundness", 10, gluing},
      {4, "space-filling curves", 120, space_filling},
      {5, "product pipeline", 60, product_pipeline},
      {6, "Hausdorff export", 10, hausdorff},
      {7, "measure nullification", 30, nullification},
      {8, "box-dimension oracle", 30, box_dimension_oracle},
      {9, "critical-value synthesis", 60, morse_sard},
      {10, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += "; runtime " + fmt("%.2f", secs) + " s over limit";
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
