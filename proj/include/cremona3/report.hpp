#pragma once
#include <string>

#include "cremona3/flows.hpp"
#include "cremona3/quadmap.hpp"

namespace cr3 {

// x0*x3 -> x0·x3
std::string pretty(const Poly& p, const Universe* u = nullptr);
std::string plane_text(const Poly& h, const Universe* u = nullptr);  // "(x3 + t·x0 = 0)"
std::string point_text(const Vec& p);                               // "[0:0:0:1]"
std::string citation_text(const CatalogEntry& e);

std::string render_map(const QuadMap& m);
std::string render_classification(const ClassificationReport& r, const std::string& label);
std::string render_flow(const SymbolicFlow& f);
std::string render_group_law(const SymbolicFlow& f, const GroupLawReport& g, bool identity, bool inverse,
                             const NumericReport* num);
std::string render_analysis(const SymbolicFlow& f, const ElementAnalysis& a);
std::string render_decomposition(const SymbolicFlow& f, const Decomposition& d);
std::string render_conjugacy(const SymbolicFlow& f1, const SymbolicFlow& f2, const ConjugacyResult& r);

}  // namespace cr3
