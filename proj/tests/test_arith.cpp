#include <random>

#include "cremona3/flows.hpp"
#include "doctest.h"

using namespace cr3;

namespace {

struct Ring {
  Universe U;
  int t, u, w;
  Ring() {
    t = U.time(0);
    u = U.gen("alpha", 0);
    w = U.gen("delta", 0);
  }
};

// random element of Q[t, u, w] with small support
Poly random_coeff(std::mt19937& rng, const Ring& R) {
  std::uniform_int_distribution<int> e(0, 2), c(-4, 4), n(1, 4);
  Poly p;
  int k = n(rng);
  for (int i = 0; i < k; ++i) {
    Mono m;
    m[R.t] = (int8_t)e(rng);
    m[R.u] = (int8_t)e(rng);
    m[R.w] = (int8_t)e(rng);
    p += Poly::monomial(m, Rat(c(rng), n(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("coeff ring: spec oracles for arithmetic") {
  Ring R;
  Poly t = Poly::var(R.t), u = Poly::var(R.u), w = Poly::var(R.w);
  CHECK(t * t == t.pow(2));
  CHECK((u - 1) * (u + 1) == u * u - 1);
  Universe U = R.U;
  int v = U.gen("alpha", 1);
  Poly V = Poly::var(v);
  CHECK((u - w) * V == u * V - w * V);
}

TEST_CASE("substitute_time_shift oracles") {
  Ring R;
  Universe U = R.U;
  Poly t = Poly::var(R.t);
  Poly sh = substitute_time_shift(t * t, U);
  Poly s = Poly::var(U.var("s"));
  CHECK(sh == t * t + t * s * 2 + s * s);
  Poly su = substitute_time_shift(Poly::var(R.u), U);
  CHECK(su == Poly::var(R.u) * Poly::var(U.var(Universe::gen_name("alpha", 1))));
  // a(t) = D t is additive
  Poly a = t.scale(Rat(7, 3));
  CHECK(substitute_time_shift(a, U) == a + s.scale(Rat(7, 3)));
  CHECK_THROWS_AS(substitute_time_shift(s, U), std::domain_error);
}

TEST_CASE("evaluate_scalars oracles") {
  Ring R;
  Universe U = R.U;
  Poly t = Poly::var(R.t), u = Poly::var(R.u);
  CHECK(evaluate_scalars(t * t + 1, {{R.t, Rat(2)}}) == Rat(5));
  CHECK(evaluate_scalars(u - 1, {{R.u, Rat(1)}}) == Rat(0));
  int v = U.gen("alpha", 1);
  CHECK(evaluate_scalars(u * Poly::var(v) - 1, {{R.u, Rat(2)}, {v, Rat(3)}}) == Rat(5));
  auto z = evaluate_scalars(u * u + 1, std::map<int, std::complex<double>>{{R.u, {0, 1}}});
  CHECK(std::abs(z) < 1e-15);
  CHECK_THROWS(evaluate_scalars(t * u, {{R.t, Rat(1)}}));
}

TEST_CASE("property: ring laws on random coefficient polynomials") {
  Ring R;
  std::mt19937 rng(101);
  for (int k = 0; k < 60; ++k) {
    Poly a = random_coeff(rng, R), b = random_coeff(rng, R), c = random_coeff(rng, R);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a + b) - b == a);
  }
}

TEST_CASE("property: time shift is a ring homomorphism") {
  Ring R;
  std::mt19937 rng(202);
  for (int k = 0; k < 60; ++k) {
    Universe U = R.U;
    Poly a = random_coeff(rng, R), b = random_coeff(rng, R);
    Poly sab = substitute_time_shift(a * b, U);
    CHECK(sab == substitute_time_shift(a, U) * substitute_time_shift(b, U));
    CHECK(substitute_time_shift(a + b, U) == substitute_time_shift(a, U) + substitute_time_shift(b, U));
  }
}

TEST_CASE("property: evaluation commutes with multiplication") {
  Ring R;
  std::mt19937 rng(303);
  std::uniform_int_distribution<int> d(-9, 9), n(1, 5);
  for (int k = 0; k < 60; ++k) {
    Poly a = random_coeff(rng, R), b = random_coeff(rng, R);
    std::map<int, Rat> as{{R.t, Rat(d(rng), n(rng))}, {R.u, Rat(d(rng), n(rng))}, {R.w, Rat(d(rng), n(rng))}};
    CHECK(evaluate_scalars(a * b, as) == evaluate_scalars(a, as) * evaluate_scalars(b, as));
    CHECK(evaluate_scalars(a + b, as) == evaluate_scalars(a, as) + evaluate_scalars(b, as));
  }
}
