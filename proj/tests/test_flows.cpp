#include <algorithm>

#include "cremona3/expr.hpp"
#include "cremona3/flows.hpp"
#include "doctest.h"

using namespace cr3;

namespace {

Poly P(const std::string& s, Universe& u) { return parse_poly(s, u); }

bool has(const std::string& label, bool appendix = false) {
  for (const auto* e : catalog_list(true))
    if (e->label == label && e->appendix == appendix) return true;
  return false;
}

bool proportional(const Tuple4& a, const Tuple4& b) { return cross_minors_zero(a, b); }

}  // namespace

TEST_CASE("catalog contents") {
  for (const char* c : {"a", "b"})
    for (const char* r : {"i", "ii", "iii", "iv", "v", "vi"}) CHECK(has(std::string("NFgen.") + c + "." + r));
  for (const char* c : {"a", "b", "c", "d"}) CHECK(has(std::string("NFtangllosc.I.") + c));
  for (const char* c : {"I.a", "I.b", "I.c", "I.d", "II.e", "II.f"}) CHECK(has(std::string("NFtangox1.") + c));
  for (int i = 1; i <= 37; ++i) CHECK(has("NFtangllosc.II." + std::to_string(i)));
  for (const char* c : {"genll", "tango", "tangx", "tangll", "osc"}) CHECK(has(std::string("Example.") + c));
  CHECK(has("NFtangllosc.II.1", true));
  CHECK(catalog_list(false).size() < catalog_list(true).size());
  CHECK_THROWS_AS(find_entry("NFgen.z"), UnknownFamily);
}

TEST_CASE("instantiate oracles") {
  auto f = instantiate("NFgen.a.i");
  Universe U = f.U;
  Tuple4 want{P("x0*x3", U), P("(t*x0+x3)*x1", U), P("(t*x0+x3)*(x2+t*x3)", U), P("(t*x0+x3)*x3", U)};
  CHECK(f.comps == want);

  auto o = instantiate("Example.osc");
  U = o.U;
  Tuple4 osc{P("x0*x3-t*x1*x2", U), P("x1*x3", U), P("x2*x3", U), P("x3^2", U)};
  CHECK(o.comps == osc);

  // all deformation constants zero: every fiber is linear
  FlowParams z;
  z.constants = {{"c", 0}, {"eps1", 0}, {"eps2", 0}};
  auto d = instantiate("NFtangllosc.II.20", false, z);
  CHECK(proportional(d.comps, {P("x0*x3", d.U), P("x1*x3", d.U), P("x2*x3", d.U), P("x3^2", d.U)}));
  CHECK(classify(evaluate_member(d, Rat(3))).type == PRVType::Lin);

  // NFgen.b keeps its clearing factor
  auto b = instantiate("NFgen.b.i");
  CHECK(!b.clearing.is_constant());
}

TEST_CASE("constraint violations") {
  FlowParams p;
  p.rates = {{"delta", 2}, {"alpha", 1}};
  try {
    instantiate("NFtangllosc.II.1", false, p);
    FAIL("no ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(std::string(e.what()).find("delta = 2*alpha") != std::string::npos);
  }
  p.rates = {{"delta", 0}, {"alpha", 1}};
  CHECK_THROWS_AS(instantiate("NFtangllosc.II.1", false, p), ConstraintViolation);
  FlowParams ok;
  ok.rates = {{"delta", 5}, {"alpha", 1}};
  CHECK_NOTHROW(instantiate("NFtangllosc.II.1", false, ok));
}

TEST_CASE("group law oracles") {
  auto a = instantiate("NFgen.a.i");
  auto g = verify_group_law(a);
  REQUIRE(g.holds);
  REQUIRE(g.cofactor);
  CHECK(g.component == 0);
  Universe U = g.U;
  CHECK(*g.cofactor == P("t*x0*x3+x3^2", U));

  CHECK(verify_group_law(instantiate("Example.tangx")).holds);

  CatalogEntry e = find_entry("NFgen.a.i");
  e.phi[2] = "(t*x0+x3)*(x2+t^2*x3)";
  auto bad = verify_group_law(instantiate(e));
  CHECK(!bad.holds);
  REQUIRE(bad.failing_minor);
  CHECK(!bad.failing_minor->is_zero());

  auto b4 = instantiate("NFgen.b.iv");
  CHECK(verify_identity_at_zero(b4));
  CHECK(verify_inverse(b4));
  CHECK(verify_inverse(instantiate("Example.genll")));
}

TEST_CASE("property: every catalog entry is a flow") {
  for (const auto* e : catalog_list(true)) {
    CAPTURE(e->key());
    auto f = instantiate(*e);
    CHECK(verify_group_law(f).holds);
    CHECK(verify_identity_at_zero(f));
    CHECK(verify_inverse(f));
  }
}

TEST_CASE("property: numeric cross-check agrees") {
  for (const char* l : {"NFgen.b.vi", "NFtangox1.II.f", "NFtangllosc.II.14", "Example.tangx"}) {
    auto r = numeric_group_law(instantiate(l), 20, 9);
    CAPTURE(l);
    CHECK(r.ok);
    CHECK(r.samples == 20);
  }
}

TEST_CASE("evaluate_member oracles") {
  CHECK(classify(evaluate_member(instantiate("Example.tangll"), Rat(1))).type == PRVType::TangP);
  auto to = instantiate("Example.tango");
  std::map<std::string, Rat> g;
  for (const auto& x : to.gens) g[x] = Rat(2);
  CHECK(classify(evaluate_member(to, Rat(1), g)).type == PRVType::TangO);
  for (const char* l : {"NFgen.b.iii", "NFtangox1.I.d", "NFtangllosc.II.5", "Example.osc"}) {
    auto f = instantiate(l);
    std::map<std::string, Rat> ones;
    for (const auto& x : f.gens) ones[x] = Rat(1);
    CAPTURE(l);
    CHECK(classify(evaluate_member(f, Rat(0), ones)).type == PRVType::Lin);
  }
  // clearing factor u + 1 vanishes at u = -1
  auto b = instantiate("NFgen.b.i");
  std::map<std::string, Rat> neg;
  for (const auto& x : b.gens) neg[x] = Rat(-1);
  CHECK_THROWS_AS(evaluate_member(b, Rat(1), neg), DegenerateFiber);
}

TEST_CASE("analyze_elements oracles") {
  auto g = analyze_elements(instantiate("Example.genll"));
  CHECK(g.type == PRVType::GenP);
  CHECK(g.H.verdict == Verdict::Mobile);
  CHECK(g.P_I.verdict == Verdict::Fix);
  CHECK(g.P_I.value == "[1,0,0,0]");
  CHECK(g.C_I.verdict == Verdict::Fix);
  CHECK(g.S.verdict == Verdict::Fix);
  CHECK(g.S.value.find("x3") != std::string::npos);
  CHECK(g.matches_row);

  auto o = analyze_elements(instantiate("Example.osc"));
  CHECK(o.H.verdict == Verdict::Fix);
  CHECK(o.H.value == "(x3 = 0)");
  CHECK(o.P_I.verdict == Verdict::Fix);
  CHECK(o.P_I.value == "[1,0,0,0]");

  auto d = analyze_elements(instantiate("NFtangox1.I.d"));
  CHECK(d.row == 'b');
  CHECK(d.H.verdict == Verdict::Mobile);
  CHECK(d.C_I.verdict == Verdict::Mobile);
  CHECK(d.P_I.verdict == Verdict::Fix);
  CHECK(d.S.verdict == Verdict::Fix);
  CHECK(d.matches_row);
}

TEST_CASE("property: members never land in gen(O) or gen(x)") {
  for (const auto* e : catalog_list(true)) {
    auto f = instantiate(*e);
    for (int k = 0; k < 6; ++k) {
      auto [t0, g] = sample_fiber(f, k);
      try {
        auto t = classify(evaluate_member(f, t0, g)).type;
        CAPTURE(e->key());
        CHECK(t != PRVType::GenO);
        CHECK(t != PRVType::GenX);
        bool in_closure = t == PRVType::Lin ||
                          std::find(e->closure.begin(), e->closure.end(), t) != e->closure.end();
        CHECK(in_closure);
      } catch (const DegenerateFiber&) {
      }
    }
  }
}

TEST_CASE("pencil and star preservation oracles") {
  auto a = instantiate("NFgen.a.i");
  auto pc = check_pencil_preservation(a, Poly::x(0), Poly::x(3));
  REQUIRE(pc.preserved);
  Universe U = a.U;
  Poly t = P("t", U);
  // x0 o phi = x3 x0, x3 o phi = x3 (t x0 + x3)
  CHECK(pc.M[0][0] == Poly(1));
  CHECK(pc.M[0][1].is_zero());
  CHECK(pc.M[1][0] == t);
  CHECK(pc.M[1][1] == Poly(1));
  CHECK(!check_pencil_preservation(a, Poly::x(1), Poly::x(2)).preserved);
  CHECK(check_star_preservation(a, {Rat(1), Rat(0), Rat(0), Rat(0)}).preserved);
  CHECK(!check_star_preservation(a, {Rat(0), Rat(0), Rat(1), Rat(0)}).preserved);

  FlowParams p;
  p.constants = {{"A", 1}, {"B", 1}, {"C", 1}};
  CHECK(check_pencil_preservation(instantiate("NFtangllosc.II.14", false, p), Poly::x(2), Poly::x(3)).preserved);
  for (const char* l : {"NFtangox1.I.a", "NFtangox1.II.f"})
    CHECK(check_star_preservation(instantiate(l), {Rat(0), Rat(1), Rat(0), Rat(0)}).preserved);
}

TEST_CASE("decompose_generic oracles") {
  auto a = instantiate("NFgen.a.i");
  auto d = decompose_generic(a, 100, 10, 3);
  CHECK(d.ok);
  CHECK(d.checked >= 1000);
  CHECK(d.failed == 0);
  CHECK(d.P_I == Vec{Rat(1), Rat(0), Rat(0), Rat(0)});
  // chi_1 [rho, sigma] = [rho - sigma, sigma]
  int tv = a.tvar();
  auto at1 = [&](const Poly& p) { return evaluate_scalars(p, {{tv, Rat(1)}}); };
  CHECK(at1(d.chi[0][0]) == Rat(1));
  CHECK(at1(d.chi[0][1]) == Rat(-1));
  CHECK(at1(d.chi[1][0]) == Rat(0));
  CHECK(at1(d.chi[1][1]) == Rat(1));

  // case b: chi ~ [[1, a(-t)], [a(-t), 1]] with a(-t) = (1 - u)/(1 + u)
  auto b = instantiate("NFgen.b.i");
  auto db = decompose_generic(b, 100, 10, 3);
  CHECK(db.ok);
  Universe U = b.U;
  Poly u = P("u_alpha", U);
  CHECK(db.chi[0][0] == db.chi[1][1]);
  CHECK(db.chi[0][1] == db.chi[1][0]);
  CHECK(db.chi[0][1] * (u + 1) == db.chi[0][0] * (1 - u));
  CHECK(db.skipped > 0);  // base-locus and degenerate points are left out
}
