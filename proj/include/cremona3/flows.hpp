#pragma once
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cremona3/forms.hpp"
#include "cremona3/linalg.hpp"
#include "cremona3/quadmap.hpp"

namespace cr3 {

struct ConstraintViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateFiber : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CatalogEntry {
  std::string label;
  bool appendix = false;
  std::string theorem;
  std::vector<std::pair<std::string, Rat>> rates;   // label -> default value
  std::vector<std::string> require;                  // "delta!=2*alpha"
  std::vector<std::string> consts;
  std::vector<std::pair<std::string, Rat>> params;  // defaults for some consts
  std::vector<std::string> zeroed;                   // consts the normal form sets to 0
  std::vector<PRVType> closure;
  std::array<std::string, 2> pencil;
  std::string clear;
  std::array<std::string, 4> phi;
  std::string key() const { return appendix ? label + " appendix" : label; }
};

const std::vector<CatalogEntry>& catalog();
std::vector<const CatalogEntry*> catalog_list(bool with_appendix = true);
const CatalogEntry& find_entry(const std::string& label, bool appendix = false);
std::vector<CatalogEntry> parse_catalog(const std::string& text);

struct FlowParams {
  std::map<std::string, Rat> rates;
  std::map<std::string, Rat> constants;
};

struct SymbolicFlow {
  const CatalogEntry* entry = nullptr;
  FlowParams params;                     // every rate; constants that were given or defaulted
  std::vector<std::string> symbolic;     // constants left as symbols
  std::map<std::string, std::string> gen_of;  // rate label -> generator label, "" for rate 0
  std::vector<std::string> gens;         // generator labels in order
  Universe U;
  Tuple4 comps;
  Poly clearing;  // comps = clearing * printed form
  std::string label() const { return entry ? entry->key() : "?"; }
  Rat rate_of_gen(const std::string& g) const { return params.rates.at(g); }
  int tvar() const { return U.var("t"); }
};

SymbolicFlow instantiate(const CatalogEntry& e, const FlowParams& p = {});
SymbolicFlow instantiate(const std::string& label, bool appendix = false, const FlowParams& p = {});
// every free constant replaced by its generic default (or by values in p)
SymbolicFlow instantiate_numeric(const CatalogEntry& e, const FlowParams& p = {});

// default value assigned to the i-th free constant when a number is needed
Rat generic_constant(int i);

// t -> t+s, u_r -> u_r v_r; adds s and the v's to U
Poly substitute_time_shift(const Poly& p, Universe& U);
// t -> slot symbol, u_r -> slot generator
Poly rename_slot(const Poly& p, Universe& U, int to_slot);
Rat evaluate_scalars(const Poly& p, const std::map<int, Rat>& assign);
std::complex<double> evaluate_scalars(const Poly& p, const std::map<int, std::complex<double>>& assign);
double eval_double(const Poly& p, const std::vector<double>& vals);  // vals indexed by variable

struct GroupLawReport {
  bool holds = false;
  Universe U;
  std::optional<Poly> cofactor;   // raw_k / shifted_k when exact
  Poly cofactor_num, cofactor_den;  // always filled when holds
  std::optional<Poly> failing_minor;
  int component = -1;
};
GroupLawReport verify_group_law(const SymbolicFlow& f);
bool verify_identity_at_zero(const SymbolicFlow& f);
bool verify_inverse(const SymbolicFlow& f);
Tuple4 inverse_flow(const SymbolicFlow& f, Universe& U);  // phi_{-t}, Laurent cleared

struct NumericReport {
  bool ok = true;
  double max_err = 0;
  int samples = 0;
};
NumericReport numeric_group_law(const SymbolicFlow& f, int samples = 20, unsigned seed = 1);

QuadMap evaluate_member(const SymbolicFlow& f, const Rat& t0,
                        const std::map<std::string, Rat>& gens = {},
                        const std::map<std::string, Rat>& consts = {});
// the k-th entry of the deterministic resampling ladder
std::pair<Rat, std::map<std::string, Rat>> sample_fiber(const SymbolicFlow& f, int k);

enum class Verdict { Fix, Mobile, Unknown, Absent };
const char* verdict_name(Verdict v);

struct Locus {
  std::string value;  // text of the sampled locus
  Verdict verdict = Verdict::Absent;
  bool certified = false;  // fix proved symbolically, or mobile shown by two exact fibers
};

struct ElementAnalysis {
  PRVType type = PRVType::Lin;  // generic fiber
  std::vector<PRVType> sample_types;
  char row = '-';
  Locus H, P_I, C_I, S, H_I;
  Poly H_form;  // H at the first sampled fiber
  std::vector<std::string> pencil_lines;
  bool matches_row = false;
  std::string mismatch;
};
ElementAnalysis analyze_elements(const SymbolicFlow& f, int samples = 5);
char conclusions_row(PRVType t);

// some plane is sent onto p by phi_t for every t
bool contracts_onto(const SymbolicFlow& f, const Vec& p);
// polynomial-flow property for a fix plane h: h o phi_t = c(t) h^2
bool polynomial_flow(const SymbolicFlow& f, const Poly& h);

struct Preservation {
  bool preserved = false;
  std::vector<std::vector<Poly>> M;  // l_i o phi_t = g (sum_j M_ij l_j)
  std::vector<Poly> basis;           // the l_j
};
Preservation check_pencil_preservation(const SymbolicFlow& f, const Poly& l1, const Poly& l2);
Preservation check_star_preservation(const SymbolicFlow& f, const Vec& P);
// forms f_i, basis l_j: find M over the coefficient ring with f_i m_j = f_j m_i, det M != 0
Preservation solve_preservation(const std::vector<Poly>& f, const std::vector<Poly>& basis,
                                const Universe& U, unsigned seed = 7);

struct Decomposition {
  Vec P_I;
  std::array<Poly, 2> pencil;
  std::vector<std::vector<Poly>> eta;  // acts on [l_1:l_2:l_3] of points
  std::vector<std::vector<Poly>> chi;  // acts on plane coefficients [rho:sigma]
  int checked = 0, skipped = 0, failed = 0;
  bool ok = false;
};
Decomposition decompose_generic(const SymbolicFlow& f, int points = 100, int fibers = 10,
                                unsigned seed = 11);

struct ConjugacyResult {
  enum class Kind { No, Yes, OutsideCriteria } kind = Kind::OutsideCriteria;
  std::string reason;
  std::optional<Mat> witness;  // A with A o f2 = f1 o A projectively
};
ConjugacyResult are_conjugate(const SymbolicFlow& f1, const SymbolicFlow& f2);
// the normalized form a variant reduces to (zeroed constants removed)
std::pair<const CatalogEntry*, FlowParams> normalized_partner(const CatalogEntry& variant,
                                                            const FlowParams& p);

}  // namespace cr3
