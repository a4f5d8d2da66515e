#pragma once

#include <string>

#include <json.hpp>

#include "outerdim/dimension.hpp"
#include "outerdim/glue.hpp"
#include "outerdim/morse_sard.hpp"
#include "outerdim/product_cover.hpp"
#include "outerdim/spacefill.hpp"

namespace outerdim {

// Key order is insertion order so reports read top-down.
using Json = nlohmann::ordered_json;

Json to_json(const Dyadic& d);       // "m/2^e"
Json rational_json(const Rational& q);
Json to_json(const Point& p);
Json to_json(const DyadicInterval& iv);
Json to_json(const HolderCertificate& c);
Json to_json(const EvaluableMap& m);  // {"codomain_dim", "provenance", "domain", "carrier"}
Json to_json(const GlueLayout& l);
Json to_json(const MeasureLedger& l);
Json to_json(const ComponentCert& c);
Json to_json(const BoxCountEstimate& e);
Json to_json(const HausdorffExport& e);
Json to_json(const MaUpperBound& b);
Json to_json(const NullifyStage& s);
Json to_json(const BoundReport& r);
Json to_json(const FlatReport& r);
Json to_json(const SynthReport& r);

// Inverse of to_json(EvaluableMap); the result is carrier-only.
EvaluableMap map_from_json(const Json& j);
// Accepts a bare map object or a document with a top-level "map".
EvaluableMap load_map_file(const std::string& path);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace outerdim
