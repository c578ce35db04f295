#include <random>

#include "cremona3/expr.hpp"
#include "cremona3/quadmap.hpp"
#include "doctest.h"

using namespace cr3;

namespace {
Poly P(const char* s) { return parse_poly(s); }
QuadMap M(const char* a, const char* b, const char* c, const char* d) { return {{P(a), P(b), P(c), P(d)}, ""}; }
const PRVType kTypes[] = {PRVType::GenO, PRVType::GenX,  PRVType::GenP, PRVType::TangO,
                          PRVType::TangX, PRVType::TangP, PRVType::Osc2X};
Mat random_invertible(std::mt19937& rng, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  Mat m(4, 4);
  do
    for (auto& x : m.a) x = Rat(d(rng));
  while (det(m).is_zero());
  return m;
}
bool same_point(const Vec& a, const Vec& b) { return primitive(a) == primitive(b); }
}  // namespace

TEST_CASE("table: jacobians and inverses") {
  for (PRVType t : kTypes) {
    CAPTURE(std::string(type_name(t)));
    CHECK(jacobian_det(normal_form(t)) == table_jacobian(t));
    CHECK(cross_minors_zero(compose(table_inverse(t), normal_form(t)), identity_tuple()));
    for (const auto& c : normal_form(t)) CHECK(eval_at(c, table_PI(t)).is_zero());
  }
}

TEST_CASE("validate") {
  CHECK(validate(M("x3*x0", "x3*x1", "x3*x2", "x3*x3")).kind == Validation::Kind::Lin);
  CHECK(validate(QuadMap{normal_form(PRVType::GenO), ""}).kind == Validation::Kind::Quadratic);
  CHECK(validate(M("x0^2", "x0*x1", "x0*x2", "x1*x2")).kind == Validation::Kind::Degenerate);
}

TEST_CASE("contracted_plane oracles") {
  auto a = contracted_plane(QuadMap{normal_form(PRVType::GenP), ""}).value();
  CHECK(a.h == P("x3"));
  CHECK(a.P == Vec{0, 0, 0, 1});
  CHECK(a.cI == P("x2^2"));
  auto b = contracted_plane(QuadMap{normal_form(PRVType::Osc2X), ""}).value();
  CHECK(b.h == P("x3"));
  CHECK(b.P == Vec{1, 0, 0, 0});
  CHECK(b.cI == P("x1*x2"));
  auto c = contracted_plane(M("x3^2+x0*x2", "(x1+x2)*x2", "x2^2", "x2*x3")).value();
  CHECK(c.h == P("x2"));
  CHECK(c.P == Vec{1, 0, 0, 0});
}

TEST_CASE("classify oracles") {
  auto r = classify(QuadMap{normal_form(PRVType::GenO), ""});
  CHECK(r.type == PRVType::GenO);
  CHECK(r.P_I == Vec{0, 0, 0, 1});
  CHECK(r.certified);
  auto x = classify(QuadMap{normal_form(PRVType::TangX), ""});
  CHECK(x.type == PRVType::TangX);
  CHECK(primitive(lin_coeffs(x.H_I)) == primitive(lin_coeffs(P("x3-x2"))));
  CHECK_THROWS_AS(classify(M("x0^2", "x1^2", "x2^2", "x3^2")), NotBidegree22);
  auto o = classify(QuadMap{normal_form(PRVType::TangO), ""});
  CHECK(primitive(lin_coeffs(*o.S_or_Pi)) == primitive(lin_coeffs(P("x2+x3"))));
  CHECK(classify(M("x3*x0", "x3*x1", "x3*x2", "x3*x3")).type == PRVType::Lin);
}

TEST_CASE("canonicalize normal forms gives identity frames") {
  for (PRVType t : kTypes) {
    CAPTURE(std::string(type_name(t)));
    auto c = canonicalize(QuadMap{normal_form(t), ""});
    CHECK(c.N == t);
    CHECK(rank(c.B) == 4);
    // B diagonal-free check: A and B are scalar identities
    bool diag = true;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j && (!c.A(i, j).is_zero() || !c.B(i, j).is_zero())) diag = false;
    CHECK(diag);
  }
}

TEST_CASE("invert oracles") {
  CHECK(invert(QuadMap{normal_form(PRVType::GenX), ""}).comps == normal_form(PRVType::GenX));
  CHECK(cross_minors_zero(invert(QuadMap{normal_form(PRVType::TangO), ""}).comps, table_inverse(PRVType::TangO)));
  CHECK(cross_minors_zero(invert(QuadMap{normal_form(PRVType::Osc2X), ""}).comps, P("1") == P("1") ? table_inverse(PRVType::Osc2X) : Tuple4{}));
}

TEST_CASE("compose oracles") {
  auto g = normal_form(PRVType::GenO);
  auto c = compose_maps(g, g);
  CHECK(c.reduced.has_value());
  CHECK(cross_minors_zero(*c.reduced, identity_tuple()));
  CHECK(c.common == P("x3*(x0^2-x1*x2)"));
  Mat A = Mat::identity(4);
  A(0, 1) = 2;
  auto lg = compose_maps(linear_tuple(A), g);
  CHECK(!lg.reduced);
  CHECK(classify(QuadMap{lg.raw, ""}).type == PRVType::GenO);
  auto tx = compose_maps(normal_form(PRVType::TangX), table_inverse(PRVType::TangX));
  CHECK(cross_minors_zero(*tx.reduced, identity_tuple()));
}

TEST_CASE("property: random conjugates keep their type and invert") {
  std::mt19937 rng(2024);
  for (PRVType t : kTypes) {
    for (int it = 0; it < 8; ++it) {
      CAPTURE(std::string(type_name(t)));
      Mat A = random_invertible(rng), B = random_invertible(rng);
      QuadMap m{apply_left(A, apply_right(normal_form(t), B)), ""};
      CAPTURE(it);
      auto r = classify(m);
      CHECK(r.type == t);
      CHECK(r.certified);
      auto c = canonicalize(m);
      CHECK(c.N == t);
      CHECK(apply_left(c.A, apply_right(normal_form(c.N), c.B)) == m.comps);
      auto inv = invert(m);
      CHECK(cross_minors_zero(compose(inv.comps, m.comps), identity_tuple()));
      CHECK(same_point(r.P_I, (*inverse(B)).apply(table_PI(t))));
    }
  }
}
