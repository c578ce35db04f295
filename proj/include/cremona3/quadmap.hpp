#pragma once
#include <optional>
#include <stdexcept>
#include <string>

#include "cremona3/forms.hpp"

namespace cr3 {

enum class PRVType { GenO, GenX, GenP, TangO, TangX, TangP, Osc2X, Lin };

const char* type_name(PRVType t);   // GenO ...
const char* display_name(PRVType t);  // gen(O) ...
std::optional<PRVType> parse_type(const std::string& s);
const char* gamma_description(PRVType t);
bool is_generic(PRVType t);

struct QuadMap {
  Tuple4 comps;
  std::string label;
};

// the table: normal forms, inverses, Jacobians, P_I, H_I
Tuple4 normal_form(PRVType t);
Tuple4 table_inverse(PRVType t);
Poly table_jacobian(PRVType t);
Vec table_PI(PRVType t);
Poly table_HI(PRVType t);

struct AmbiguousH : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotBidegree22 : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// the normal form exists over C but the coordinate change would need an extension of Q
struct NoRationalNormalForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Validation {
  enum class Kind { Quadratic, Lin, Degenerate } kind = Kind::Degenerate;
  Poly common;   // Lin: the common linear factor
  Mat residual;  // Lin: rows are the residual linear forms
  std::string reason;
};
Validation validate(const QuadMap& m);

struct ContractedPlane {
  Poly h;   // primitive linear form
  Vec P;    // primitive point, phi(H)
  Poly cI;  // restricted conic (pivot variable eliminated), primitive
};
std::optional<ContractedPlane> contracted_plane(const QuadMap& m);
std::optional<ContractedPlane> contracted_plane(const QuadMap& m, const FactorizationResult& jac);

struct ClassificationReport {
  PRVType type = PRVType::Lin;
  Poly H, H_I, cI;
  Vec P, P_I;
  int cI_rank = 0;
  int cI_mult = 0;  // multiplicity of C_I at P_I (non-generic only)
  std::optional<Poly> S_or_Pi;
  std::string C_desc;
  FactorizationResult jac;
  std::string gamma;
  Tuple4 inverse;
  bool certified = false;
  Poly lin_factor;  // Lin only
  Mat lin_matrix;   // Lin only
};
ClassificationReport classify(const QuadMap& m);

struct Canonical {
  Mat A, B;
  PRVType N;
};
// m = A . normal_form(N) . B exactly (as tuples)
Canonical canonicalize(const QuadMap& m);
QuadMap invert(const QuadMap& m);

struct Composition {
  Tuple4 raw;
  std::optional<Tuple4> reduced;
  Poly common;               // raw = common * reduced (up to a scalar inside reduced)
  FactorizationResult chain;  // factorization of common
};
Composition compose_maps(const Tuple4& f, const Tuple4& g);  // f after g
// minimal-degree tuple r with raw ~ r; nullopt when raw is already reduced
std::optional<Tuple4> reduce_tuple(const Tuple4& raw);

// per-map outcome of a batch run; error holds the exception text when report is empty
struct BatchItem {
  std::optional<ClassificationReport> report;
  std::string error;
  enum class Status { Ok, NotBidegree22, Degenerate, Internal } status = Status::Ok;
};
std::vector<BatchItem> classify_batch(const std::vector<QuadMap>& maps);         // OpenMP over maps
std::vector<BatchItem> classify_batch_serial(const std::vector<QuadMap>& maps);

// A with m_i = sum_j A_ij basis_j, if it exists
std::optional<Mat> solve_left(const Tuple4& m, const Tuple4& basis);

}  // namespace cr3
