#pragma once

// JSON input files (curves, families, Siegel points) and report serialization.

#include <string>

#include "json.hpp"
#include "periodvar/exact_span.hpp"
#include "periodvar/hyperelliptic.hpp"
#include "periodvar/theta.hpp"
#include "periodvar/variation.hpp"

namespace periodvar::io {

using Json = nlohmann::ordered_json;

Json read_file(const std::string& path);
void write_report(const Json& report, const std::string& path);  // "-" or empty: stdout
std::string dump(const Json& report);

/// {"type":"hyperelliptic","branch_points":[[re,im],...]} with "inf" allowed once.
HyperellipticCurve parse_curve(const Json& j);
Json curve_to_json(const HyperellipticCurve& curve);

/// {"base":<curve>,"deformation":{...},"t_grid":[...]}
FamilySpec parse_family(const Json& j);

/// {"g":g,"T":[[[re,im],...],...]}
SiegelPoint parse_siegel_point(const Json& j);
Json siegel_point_to_json(const SiegelPoint& p);

Json to_json(Complex z);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Complex complex_from_json(const Json& j);

Json to_json(const TauIndependenceReport& r);
Json to_json(const DirectSumReport& r);
Json to_json(const SigmaSpanReport& r);
Json to_json(const RiemannMatrix& rm);
Json to_json(const VariationReport& r);
Json to_json(const DegenerationFit& f);
Json to_json(const SchottkyValue& s);
Json to_json(const PhiResult& p);

/// One assertion in a report.
Json check(const std::string& name, const std::string& claim, bool pass, const Json& value,
           const Json& threshold = nullptr);

}  // namespace periodvar::io
