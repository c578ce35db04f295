#include "cremona3/conic.hpp"

#include <stdexcept>

#include "cremona3/numth.hpp"

namespace cr3 {

Rat bilinear(const Mat& g, const Vec& x, const Vec& y) { return dot(x, g.apply(y)); }

std::pair<Mat, Vec> diagonalize(const Mat& g0) {
  int n = g0.r;
  Mat g = g0, t = Mat::identity(n);
  // congruence g <- E^T g E, t <- t E
  auto add_col = [&](int dst, int src, const Rat& f) {  // e_dst += f e_src
    for (int i = 0; i < n; ++i) t(i, dst) += f * t(i, src);
    for (int i = 0; i < n; ++i) g(i, dst) += f * g(i, src);
    for (int j = 0; j < n; ++j) g(dst, j) += f * g(src, j);
  };
  auto swap_idx = [&](int a, int b) {
    for (int i = 0; i < n; ++i) std::swap(t(i, a), t(i, b));
    for (int i = 0; i < n; ++i) std::swap(g(i, a), g(i, b));
    for (int j = 0; j < n; ++j) std::swap(g(a, j), g(b, j));
  };
  for (int k = 0; k < n; ++k) {
    if (g(k, k).is_zero()) {
      int j = -1;
      for (int i = k + 1; i < n; ++i)
        if (!g(i, i).is_zero()) j = i;
      if (j >= 0) {
        swap_idx(k, j);
      } else {
        for (int i = k + 1; i < n; ++i)
          if (!g(k, i).is_zero()) {
            add_col(k, i, Rat(1));
            break;
          }
      }
    }
    if (g(k, k).is_zero()) continue;  // row k is zero
    for (int i = k + 1; i < n; ++i)
      if (!g(k, i).is_zero()) add_col(i, k, -g(k, i) / g(k, k));
  }
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = g(i, i);
  return {t, d};
}

std::optional<std::tuple<mpz_class, mpz_class, mpz_class>> legendre_solve(const mpz_class& a, const mpz_class& b) {
  using R = std::tuple<mpz_class, mpz_class, mpz_class>;
  if (a == 0 || b == 0) throw std::domain_error("legendre_solve: zero coefficient");
  if (a == 1) return R{1, 0, 1};
  if (b == 1) return R{0, 1, 1};
  if (a + b == 0) return R{1, 1, 0};
  if (a < 0 && b < 0) return std::nullopt;
  if (abs(a) > abs(b)) {
    auto r = legendre_solve(b, a);
    if (!r) return std::nullopt;
    auto [x, y, z] = *r;
    return R{y, x, z};
  }
  // |a| <= |b|, |b| >= 2: t^2 = a mod |b|
  mpz_class B = abs(b);
  auto t0 = sqrt_mod(a, B);
  if (!t0) return std::nullopt;
  mpz_class t = *t0 % B;
  if (2 * t > B) t -= B;
  mpz_class k = (t * t - a) / b;
  if (k == 0) throw std::logic_error("legendre_solve: a is a square");
  auto [k1, m] = squarefree_split(k);
  auto r = legendre_solve(a, k1);
  if (!r) return std::nullopt;
  auto [X, Y, Z] = *r;
  // (t + sqrt a)(Z + X sqrt a)
  mpz_class z = t * Z + a * X, x = t * X + Z, y = k1 * m * Y;
  mpz_class g = gcd(gcd(x, y), z);
  if (g > 1) x /= g, y /= g, z /= g;
  return R{x, y, z};
}

std::optional<Vec> isotropic_vector(const Mat& g3) {
  auto [t, d] = diagonalize(g3);
  for (int i = 0; i < 3; ++i)
    if (d[i].is_zero()) return t.col(i);  // degenerate: kernel direction
  // d0 X^2 + d1 Y^2 + d2 Z^2 = 0  ->  (d2 Z)^2 = -d0 d2 X^2 - d1 d2 Y^2
  mpq_class A = -(d[0] * d[2]).to_mpq(), Bq = -(d[1] * d[2]).to_mpq();
  // clear denominators: A = An/Ad -> multiply X by Ad: A X^2 = An Ad (X/Ad)^2
  mpz_class Ai = A.get_num() * A.get_den(), Bi = Bq.get_num() * Bq.get_den();
  auto [As, Ak] = squarefree_split(Ai);
  auto [Bs, Bk] = squarefree_split(Bi);
  auto sol = legendre_solve(As, Bs);
  if (!sol) return std::nullopt;
  auto [x, y, z] = *sol;
  // A X^2 = As (Ak X / A.den)^2
  Rat X(mpq_class(x * A.get_den(), Ak)), Y(mpq_class(y * Bq.get_den(), Bk)), Z = Rat(mpq_class(z)) / d[2];
  Vec w{X, Y, Z};
  Vec v = t.apply(w);
  if (!bilinear(g3, v, v).is_zero()) throw std::logic_error("isotropic_vector: check failed");
  return primitive(v);
}

}  // namespace cr3
