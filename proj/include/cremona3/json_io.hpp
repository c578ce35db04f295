#pragma once
#include <string>

#include "cremona3/flows.hpp"
#include "cremona3/quadmap.hpp"
#include "json.hpp"

namespace cr3 {

using json = nlohmann::ordered_json;

struct JsonError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// integers that do not fit in int64 are written as decimal strings
json rat_to_json(const Rat& r);  // [num, den]
Rat rat_from_json(const json& j);  // [n, d], n, "n/d"

json universe_to_json(const Universe& u);
Universe universe_from_json(const json& j);

// {"universe": [...], "terms": [[num, den, [e...]], ...]}, exponents over x0..x3 then the universe
json poly_to_json(const Poly& p, const Universe& u);
Poly poly_from_json(const json& j, Universe& u);  // symbols merged into u by name
json terms_to_json(const Poly& p, int nvars);
Poly terms_from_json(const json& j, const std::vector<int>& var_of);

json map_to_json(const QuadMap& m);
QuadMap map_from_json(const json& j);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);

json classification_to_json(const ClassificationReport& r);
ClassificationReport classification_from_json(const json& j);

struct FlowRequest {
  std::string family;
  bool appendix = false;
  FlowParams params;
};
FlowRequest flow_request_from_json(const json& j);
json flow_request_to_json(const FlowRequest& r);

json flow_to_json(const SymbolicFlow& f);
json group_law_to_json(const SymbolicFlow& f, const GroupLawReport& r);
json analysis_to_json(const SymbolicFlow& f, const ElementAnalysis& a);
json decomposition_to_json(const SymbolicFlow& f, const Decomposition& d);
json conjugacy_to_json(const SymbolicFlow& f1, const SymbolicFlow& f2, const ConjugacyResult& r);

}  // namespace cr3
