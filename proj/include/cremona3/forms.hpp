#pragma once
#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cremona3/linalg.hpp"
#include "cremona3/poly.hpp"

namespace cr3 {

using Tuple4 = std::array<Poly, 4>;

struct FactorizationResult {
  std::vector<std::pair<Poly, int>> linear_factors;  // primitive, first coeff > 0
  Poly residual;                                       // primitive
  Rat unit{1};
  Poly expand() const;
};

Poly diff(const Poly& f, int v);
Poly det4(const std::array<Tuple4, 4>& m);
Poly jacobian_det(const Tuple4& comps);

// f pulled back to h = 0 by solving for the largest-index variable of h
Poly restrict_to_plane(const Poly& f, const Poly& h);
std::optional<Poly> divides_linear(const Poly& f, const Poly& h);
FactorizationResult extract_linear_factors(const Poly& f, unsigned seed = 0x5eed);

// rational roots (p:q) of a binary form sum c[i] p^i q^(d-i), with multiplicity
std::vector<std::pair<Vec, int>> binary_form_roots(const std::vector<Rat>& c);

Mat gram(const Poly& q);  // symmetric, q(x) = x^T M x
Poly from_gram(const Mat& m);
int quad_rank(const Poly& q, int nvars = 4);

Poly compose_form(const Poly& f, const Tuple4& phi);
Tuple4 compose(const Tuple4& f, const Tuple4& g);  // f(g(x))

std::vector<Poly> cross_minors_serial(const Tuple4& a, const Tuple4& b);
std::vector<Poly> cross_minors_parallel(const Tuple4& a, const Tuple4& b);
bool cross_minors_zero(const Tuple4& a, const Tuple4& b);
std::optional<Poly> first_nonzero_minor(const Tuple4& a, const Tuple4& b);

// linear forms and points with rational coefficients
Vec lin_coeffs(const Poly& l);
Poly lin_form(const Vec& v);
Rat eval_at(const Poly& f, const Vec& p);  // x-part only; f must be x-only
Vec eval_tuple(const Tuple4& f, const Vec& p);
Tuple4 identity_tuple();
Tuple4 apply_left(const Mat& a, const Tuple4& f);   // (A f)_i = sum A_ij f_j
Tuple4 apply_right(const Tuple4& f, const Mat& b);  // f(Bx)
Tuple4 linear_tuple(const Mat& a);                   // x -> A x
Poly subst_linear(const Poly& f, const Mat& b);      // f(Bx)
bool is_x_rational(const Poly& f);  // all coefficients in Q (no symbols)

}  // namespace cr3
