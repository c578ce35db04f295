#include "cremona3/flows.hpp"
#include "doctest.h"

using namespace cr3;

namespace {

using K = ConjugacyResult::Kind;

FlowParams consts(std::map<std::string, Rat> c, std::map<std::string, Rat> r = {}) {
  FlowParams p;
  p.constants = std::move(c);
  p.rates = std::move(r);
  return p;
}

// recheck A o b = a o A; a and b share their universe layout
bool witness_ok(const SymbolicFlow& a, const SymbolicFlow& b, const ConjugacyResult& r) {
  if (r.kind != K::Yes || !r.witness || det(*r.witness).is_zero()) return false;
  return cross_minors_zero(apply_left(*r.witness, b.comps), apply_right(a.comps, *r.witness));
}

}  // namespace

TEST_CASE("conjugacy oracles") {
  auto f1 = instantiate("NFtangllosc.II.1", false, consts({{"A", 1}, {"B", 2}, {"C", 3}}));
  auto f2 = instantiate("NFtangllosc.II.1", false, consts({{"A", 2}, {"B", 4}, {"C", 6}}));
  auto r = are_conjugate(f1, f2);
  CHECK(r.kind == K::Yes);
  CHECK(witness_ok(f1, f2, r));

  auto f3 = instantiate("NFtangllosc.II.1", false, consts({{"A", 1}, {"B", 2}, {"C", 3}}, {{"delta", 5}}));
  CHECK(are_conjugate(f1, f3).kind == K::No);
  auto f4 = instantiate("NFtangllosc.II.1", false, consts({{"A", 1}, {"B", 2}, {"C", 5}}));
  CHECK(are_conjugate(f1, f4).kind == K::No);

  FlowParams eq;
  eq.rates = {{"gamma1", 1}, {"gamma2", 1}};
  auto g = instantiate("NFgen.b.iv", false, eq);
  CHECK(are_conjugate(g, g).kind == K::Yes);
  FlowParams sw;
  sw.rates = {{"gamma1", 3}, {"gamma2", 2}};
  auto gs = instantiate("NFgen.b.iv", false, sw);
  auto rs = are_conjugate(instantiate("NFgen.b.iv"), gs);
  CHECK(rs.kind == K::Yes);
  REQUIRE(rs.witness);
  CHECK((*rs.witness)(1, 2) == Rat(1));
  CHECK((*rs.witness)(2, 1) == Rat(1));

  CHECK(are_conjugate(instantiate("NFgen.a.i"), instantiate("NFgen.a.ii")).kind == K::No);
  CHECK(are_conjugate(instantiate("NFgen.a.i"), instantiate("NFtangox1.I.b")).kind == K::No);
}

TEST_CASE("conjugacy: scaling and row solves") {
  auto a = instantiate("NFtangllosc.I.a", false, consts({{"a", 1}, {"b", 1}}));
  auto b = instantiate("NFtangllosc.I.a", false, consts({{"a", 2}, {"b", 3}}));
  CHECK(witness_ok(a, b, are_conjugate(a, b)));
  // f1(Dx) = D f2(x) with D = diag(d0, d1, d2, 1): a2 = a1 d0, d1 = d0
  auto ib1 = instantiate("NFtangllosc.I.b", false, consts({{"a", 1}, {"b", 1}}));
  auto ib2 = instantiate("NFtangllosc.I.b", false, consts({{"a", 3}, {"b", 5}}));
  auto rb = are_conjugate(ib1, ib2);
  CHECK(witness_ok(ib1, ib2, rb));
  REQUIRE(rb.witness);
  CHECK((*rb.witness)(0, 0) / (*rb.witness)(3, 3) == Rat(3));
  auto c = instantiate("NFtangox1.I.b", false, consts({{"c22", 1}, {"c33", 2}, {"c02", 3}}));
  auto d = instantiate("NFtangox1.I.b", false, consts({{"c22", 2}, {"c33", 4}, {"c02", 6}}));
  auto e = instantiate("NFtangox1.I.b", false, consts({{"c22", 2}, {"c33", 4}, {"c02", 7}}));
  CHECK(witness_ok(c, d, are_conjugate(c, d)));
  CHECK(are_conjugate(c, e).kind == K::No);
}

TEST_CASE("property: self-conjugacy and symmetry") {
  auto all = catalog_list(true);
  for (const auto* e : all) {
    auto f = instantiate_numeric(*e);
    auto r = are_conjugate(f, f);
    CAPTURE(e->key());
    CHECK(r.kind == K::Yes);
  }
  for (size_t i = 0; i + 1 < all.size(); i += 3) {
    auto f = instantiate_numeric(*all[i]), g = instantiate_numeric(*all[i + 1]);
    CAPTURE(all[i]->key());
    CHECK(are_conjugate(f, g).kind == are_conjugate(g, f).kind);
  }
}

TEST_CASE("property: appendix forms are conjugate to their normalized forms") {
  for (const auto* e : catalog_list(true)) {
    if (!e->appendix) continue;
    auto v = instantiate(*e);
    auto [pe, pp] = normalized_partner(*e, v.params);
    auto n = instantiate(*pe, pp);
    CAPTURE(e->key());
    CHECK(are_conjugate(v, n).kind == K::Yes);
    CHECK(are_conjugate(n, v).kind == K::Yes);
  }
}
