#include "cremona3/report.hpp"

#include <sstream>

namespace cr3 {

std::string pretty(const Poly& p, const Universe* u) {
  std::string s = p.str(u), out;
  for (char c : s) {
    if (c == '*') out += "·";
    else out += c;
  }
  return out;
}

std::string plane_text(const Poly& h, const Universe* u) { return "(" + pretty(h, u) + " = 0)"; }

std::string point_text(const Vec& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) s += (i ? ":" : "") + p[i].str();
  return s + "]";
}

std::string citation_text(const CatalogEntry& e) {
  if (e.theorem == "Example") return "worked example " + e.label;
  std::string s = "Theorem " + e.theorem + ", case " + e.label.substr(e.theorem.size() + 1);
  if (e.appendix) s += " (appendix general form)";
  return s;
}

std::string render_map(const QuadMap& m) {
  std::ostringstream os;
  if (!m.label.empty()) os << m.label << "\n";
  for (int i = 0; i < 4; ++i) os << "  phi" << i << " = " << pretty(m.comps[i]) << "\n";
  return os.str();
}

std::string render_classification(const ClassificationReport& r, const std::string& label) {
  std::ostringstream os;
  if (!label.empty()) os << label << ": ";
  os << display_name(r.type) << (r.certified ? " (inverse certified)" : " (NOT certified)") << "\n";
  if (r.type == PRVType::Lin) {
    os << "  common factor " << pretty(r.lin_factor) << "\n";
    return os.str();
  }
  os << "  H = " << plane_text(r.H) << ", contracted onto P = " << point_text(r.P) << "\n";
  os << "  H_I = " << plane_text(r.H_I) << ", P_I = " << point_text(r.P_I) << "\n";
  os << "  C_I: " << pretty(r.cI) << " = 0 on H, rank " << r.cI_rank;
  if (!is_generic(r.type)) os << ", multiplicity " << r.cI_mult << " at P_I";
  os << "\n";
  if (r.S_or_Pi) os << "  " << (is_generic(r.type) ? "S" : "Pi") << " = (" << pretty(*r.S_or_Pi) << " = 0)\n";
  os << "  " << r.C_desc << "\n";
  os << "  Jac = " << r.jac.unit.str();
  for (const auto& [l, e] : r.jac.linear_factors) os << " (" << pretty(l) << ")" << (e > 1 ? "^" + std::to_string(e) : "");
  if (!r.jac.residual.is_constant()) os << " (" << pretty(r.jac.residual) << ")";
  os << "\n  Gamma: " << r.gamma << "\n";
  os << "  inverse:";
  for (int i = 0; i < 4; ++i) os << (i ? ", " : " [") << pretty(r.inverse[i]);
  os << "]\n";
  return os.str();
}

std::string render_flow(const SymbolicFlow& f) {
  std::ostringstream os;
  os << f.label() << "  [" << citation_text(*f.entry) << "]\n";
  for (const auto& [k, v] : f.params.rates) os << "  rate " << k << " = " << v.str() << "\n";
  for (const auto& [k, v] : f.params.constants) os << "  " << k << " = " << v.str() << "\n";
  for (const auto& c : f.symbolic) os << "  " << c << " symbolic\n";
  for (const auto& g : f.gens) {
    std::string n = Universe::gen_name(g, 0);
    os << "  " << n << " = e^(" << g << "·t)\n";
  }
  if (!f.clearing.is_constant()) os << "  components multiplied by " << pretty(f.clearing, &f.U) << "\n";
  for (int i = 0; i < 4; ++i) os << "  phi_t" << i << " = " << pretty(f.comps[i], &f.U) << "\n";
  return os.str();
}

std::string render_group_law(const SymbolicFlow& f, const GroupLawReport& g, bool identity, bool inverse,
                             const NumericReport* num) {
  std::ostringstream os;
  os << f.label() << "  [" << citation_text(*f.entry) << "]\n";
  os << "  phi_s o phi_t = phi_(t+s): " << (g.holds ? "holds" : "FAILS") << "\n";
  if (g.holds && g.cofactor) os << "  cofactor (component " << g.component << "): " << pretty(*g.cofactor, &g.U) << "\n";
  if (g.holds && !g.cofactor)
    os << "  cofactor (component " << g.component << "): (" << pretty(g.cofactor_num, &g.U) << ") / ("
       << pretty(g.cofactor_den, &g.U) << ")\n";
  if (g.failing_minor) os << "  nonzero minor: " << pretty(*g.failing_minor, &g.U) << "\n";
  os << "  phi_0 = id: " << (identity ? "holds" : "FAILS") << "\n";
  os << "  phi_-t o phi_t = id: " << (inverse ? "holds" : "FAILS") << "\n";
  if (num)
    os << "  numeric cross-check: " << (num->ok ? "ok" : "FAILS") << ", " << num->samples
       << " samples, max error " << num->max_err << "\n";
  return os.str();
}

std::string render_analysis(const SymbolicFlow& f, const ElementAnalysis& a) {
  std::ostringstream os;
  os << f.label() << "  [" << citation_text(*f.entry) << "]\n";
  os << "  generic member: " << display_name(a.type) << ", samples:";
  for (auto t : a.sample_types) os << " " << display_name(t);
  os << "\n";
  auto line = [&](const char* name, const Locus& l) {
    if (l.verdict == Verdict::Absent) return;
    os << "  " << name << " = " << l.value << "  " << verdict_name(l.verdict);
    if (l.verdict == Verdict::Mobile) os << " (value at the first sampled fiber)";
    os << "\n";
  };
  line("H_t", a.H);
  line("P_I_t", a.P_I);
  line("C_I_t", a.C_I);
  line("S_t", a.S);
  line("H_I_t", a.H_I);
  os << "  conclusions row " << a.row << ": " << (a.matches_row ? "matches" : "MISMATCH " + a.mismatch) << "\n";
  for (const auto& l : a.pencil_lines) os << "  pencil of planes through " << l << " preserved\n";
  if (a.pencil_lines.empty()) os << "  no preserved pencil among the candidates\n";
  return os.str();
}

std::string render_decomposition(const SymbolicFlow& f, const Decomposition& d) {
  std::ostringstream os;
  os << f.label() << "  [" << citation_text(*f.entry) << "]\n";
  os << "  P_I = " << point_text(d.P_I) << ", pencil " << pretty(d.pencil[0], &f.U) << ", "
     << pretty(d.pencil[1], &f.U) << "\n";
  auto grid = [&](const char* n, const std::vector<std::vector<Poly>>& m) {
    os << "  " << n << " =";
    for (const auto& r : m) {
      os << " [";
      for (size_t j = 0; j < r.size(); ++j) os << (j ? ", " : "") << pretty(r[j], &f.U);
      os << "]";
    }
    os << "\n";
  };
  grid("eta_t", d.eta);
  grid("chi_t", d.chi);
  os << "  points checked " << d.checked << ", skipped " << d.skipped << ", failed " << d.failed << ": "
     << (d.ok ? "ok" : "FAILS") << "\n";
  return os.str();
}

std::string render_conjugacy(const SymbolicFlow& f1, const SymbolicFlow& f2, const ConjugacyResult& r) {
  using K = ConjugacyResult::Kind;
  std::ostringstream os;
  os << f1.label() << " vs " << f2.label() << ": "
     << (r.kind == K::Yes ? "Yes" : r.kind == K::No ? "No" : "OutsideCriteria") << " (" << r.reason << ")\n";
  os << "  [" << citation_text(*f1.entry) << "; " << citation_text(*f2.entry) << "]\n";
  if (r.witness) {
    os << "  A =";
    for (int i = 0; i < 4; ++i) os << " " << point_text(r.witness->row(i));
    os << "  with A o phi2_t = phi1_t o A\n";
  }
  return os.str();
}

}  // namespace cr3
