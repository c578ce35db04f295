#include <random>

#include "cremona3/expr.hpp"
#include "cremona3/forms.hpp"
#include "doctest.h"

using namespace cr3;

namespace {
Poly P(const char* s) { return parse_poly(s); }
Tuple4 T(const char* a, const char* b, const char* c, const char* d) { return {P(a), P(b), P(c), P(d)}; }
bool same_factors(const FactorizationResult& r, std::vector<std::pair<const char*, int>> want) {
  if (r.linear_factors.size() != want.size()) return false;
  for (auto& [s, m] : want) {
    Vec w = primitive(lin_coeffs(P(s)));
    bool ok = false;
    for (auto& [l, k] : r.linear_factors)
      if (lin_coeffs(l) == w && k == m) ok = true;
    if (!ok) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("jacobian_det oracles") {
  CHECK(jacobian_det(T("x0*x3", "x1*x3", "x2*x3", "x0^2-x1*x2")) == P("-2*x3^2*(x0^2-x1*x2)"));
  CHECK(jacobian_det(T("x0*x3", "x1*x3-x2^2", "x2*x3", "x3^2")) == P("2*x3^4"));
  CHECK(jacobian_det(identity_tuple()) == P("1"));
}

TEST_CASE("restrict_to_plane and divides_linear") {
  CHECK(restrict_to_plane(P("x0^2-x1*x2"), P("x3")) == P("x0^2-x1*x2"));
  CHECK(restrict_to_plane(P("x0*x3"), P("x3")).is_zero());
  CHECK(restrict_to_plane(P("x0*x2+x3^2"), P("x2+x3")) == P("x0*x2+x2^2"));
  CHECK(divides_linear(P("x3*(x0+x3)"), P("x3")).value() == P("x0+x3"));
  CHECK(!divides_linear(P("x0^2-x1*x2"), P("x3")));
  CHECK(divides_linear(P("(x0+2*x1)^2*x2"), P("x0+2*x1")).value() == P("(x0+2*x1)*x2"));
}

TEST_CASE("extract_linear_factors oracles") {
  auto r1 = extract_linear_factors(P("2*x3^3*(x2+x3)"));
  CHECK(same_factors(r1, {{"x3", 3}, {"x2+x3", 1}}));
  CHECK(r1.residual == P("1"));
  CHECK(r1.unit == Rat(2));
  auto r2 = extract_linear_factors(P("-2*x3^2*x1*x2"));
  CHECK(same_factors(r2, {{"x3", 2}, {"x1", 1}, {"x2", 1}}));
  auto r3 = extract_linear_factors(P("(x0+x1)^2*(x1-2*x3)*x2"));
  CHECK(same_factors(r3, {{"x0+x1", 2}, {"x1-2*x3", 1}, {"x2", 1}}));
  CHECK(r3.residual == P("1"));
  // planes containing a probe line force the fallback
  auto r4 = extract_linear_factors(P("x2*x3*(x0-x3)*(x1-x2)"));
  CHECK(same_factors(r4, {{"x2", 1}, {"x3", 1}, {"x0-x3", 1}, {"x1-x2", 1}}));
  auto r5 = extract_linear_factors(P("-2*x3^2*(x0^2-x1*x2)"));
  CHECK(same_factors(r5, {{"x3", 2}}));
  CHECK(r5.residual == P("x0^2-x1*x2"));
  CHECK(r5.expand() == P("-2*x3^2*(x0^2-x1*x2)"));
}

TEST_CASE("property: extract_linear_factors round trip on random products") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-5, 5);
  auto rlin = [&] {
    Poly l;
    while (l.is_zero()) {
      l = Poly();
      for (int i = 0; i < 4; ++i) l += Poly::x(i).scale(Rat(d(rng)));
    }
    return l;
  };
  for (int it = 0; it < 200; ++it) {
    Poly f = Rat(d(rng) == 0 ? 3 : d(rng) + 11);
    int nl = it % 3 == 0 ? 2 : 4;
    std::vector<Poly> ls;
    for (int k = 0; k < nl; ++k) ls.push_back(rlin());
    for (auto& l : ls) f = f * l;
    if (nl == 2) f = f * P("x0^2+x1^2+x2^2+3*x3^2");  // anisotropic over Q
    auto r = extract_linear_factors(f, 100 + it);
    CHECK(r.expand() == f);
    int tot = 0;
    for (auto& [l, m] : r.linear_factors) tot += m;
    CHECK(tot == nl);
  }
}

TEST_CASE("quad_rank oracles and congruence invariance") {
  CHECK(quad_rank(P("x0^2-x1*x2"), 3) == 3);
  CHECK(quad_rank(P("x1*x2"), 3) == 2);
  CHECK(quad_rank(P("x2^2"), 3) == 1);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int it = 0; it < 30; ++it) {
    Mat m(4, 4);
    do
      for (auto& x : m.a) x = Rat(d(rng));
    while (det(m).is_zero());
    Poly q = P("x0^2-x1*x2+x3*x0");
    CHECK(quad_rank(subst_linear(q, m)) == quad_rank(q));
  }
}

TEST_CASE("compose_form and cross minors") {
  Tuple4 gO = T("x0*x3", "x1*x3", "x2*x3", "x0^2-x1*x2");
  CHECK(compose_form(P("x3"), gO) == P("x0^2-x1*x2"));
  CHECK(compose_form(P("x0*x1+x3^2"), identity_tuple()) == P("x0*x1+x3^2"));
  CHECK(compose_form(P("x0+x3"), T("x0*x3", "x1*x3", "x2*x3", "x2^2")) == P("x0*x3+x2^2"));
  CHECK(cross_minors_zero(identity_tuple(), T("2*x0", "2*x1", "2*x2", "2*x3")));
  CHECK(cross_minors_zero(compose(gO, gO), apply_left(Mat::identity(4), {P("x0*x3*(x0^2-x1*x2)"), P("x1*x3*(x0^2-x1*x2)"), P("x2*x3*(x0^2-x1*x2)"), P("x3*x3*(x0^2-x1*x2)")})));
  CHECK(!cross_minors_zero(identity_tuple(), T("x1", "x0", "x2", "x3")));
  auto a = cross_minors_serial(gO, compose(gO, gO));
  auto b = cross_minors_parallel(gO, compose(gO, gO));
  CHECK(a == b);
}

TEST_CASE("property: jacobian chain rule under linear changes") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-3, 3);
  Tuple4 f = T("x0*x3", "x1*x3-x2^2", "x2*x3", "x3^2+x0*x1");
  for (int it = 0; it < 10; ++it) {
    Mat a(4, 4);
    do
      for (auto& x : a.a) x = Rat(d(rng));
    while (det(a).is_zero());
    CHECK(jacobian_det(apply_left(a, f)) == jacobian_det(f).scale(det(a)));
    CHECK(jacobian_det(apply_right(f, a)) == subst_linear(jacobian_det(f), a).scale(det(a)));
  }
}
