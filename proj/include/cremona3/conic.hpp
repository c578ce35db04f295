#pragma once
#include <optional>
#include <tuple>

#include "cremona3/linalg.hpp"

namespace cr3 {

// T^T G T = diag(d); G symmetric n x n
std::pair<Mat, Vec> diagonalize(const Mat& g);
// integers (x, y, z) != 0 with a x^2 + b y^2 = z^2; a, b squarefree nonzero
std::optional<std::tuple<mpz_class, mpz_class, mpz_class>> legendre_solve(const mpz_class& a, const mpz_class& b);
// nonzero v with v^T G v = 0 for a ternary form; none if anisotropic over Q
std::optional<Vec> isotropic_vector(const Mat& g3);
Rat bilinear(const Mat& g, const Vec& x, const Vec& y);

}  // namespace cr3
