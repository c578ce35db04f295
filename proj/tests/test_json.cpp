#include <random>

#include "cremona3/json_io.hpp"
#include "doctest.h"

using namespace cr3;

TEST_CASE("json: rationals, big integers as strings") {
  CHECK(rat_to_json(Rat(-3, 4)) == json::array({-3, 4}));
  Rat big = Rat(1LL << 62) * Rat(1LL << 62) / Rat(7);
  json j = rat_to_json(big);
  CHECK(j[0].is_string());
  CHECK(rat_from_json(j) == big);
  CHECK(rat_from_json(json("5/10")) == Rat(1, 2));
  CHECK(rat_from_json(json(3)) == Rat(3));
  CHECK_THROWS_AS(rat_from_json(json::array({1, 0})), JsonError);
}

TEST_CASE("json: coefficient polynomial round trip with universe header") {
  auto f = instantiate("NFgen.b.vi");
  for (const auto& c : f.comps) {
    json j = poly_to_json(c, f.U);
    Universe U2;
    Poly back = poly_from_json(json::parse(j.dump()), U2);
    CHECK(U2 == f.U);
    CHECK(back == c);
  }
  // merging into a universe with a different symbol order
  Universe other;
  other.gen("gamma2", 0);
  Poly p = poly_from_json(poly_to_json(f.comps[1], f.U), other);
  CHECK(poly_to_json(p, other)["terms"].size() == f.comps[1].size());
}

TEST_CASE("json: map schema and classification report round trip") {
  for (int i = 0; i < 7; ++i) {
    QuadMap m{normal_form((PRVType)i), "n"};
    json j = map_to_json(m);
    CHECK(j["components"].size() == 4);
    QuadMap back = map_from_json(json::parse(j.dump()));
    CHECK(back.comps == m.comps);
    CHECK(back.label == "n");
    auto rep = classify(m);
    json rj = classification_to_json(rep);
    CHECK(classification_to_json(classification_from_json(json::parse(rj.dump()))) == rj);
  }
  CHECK_THROWS_AS(map_from_json(json{{"components", json::array()}}), JsonError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"components":[[[1,1,[1,0]]],[],[],[]]})")), JsonError);
}

TEST_CASE("json: flow request and reports") {
  json req = json::parse(
      R"({"family":"NFtangllosc.II.14","appendix_variant":false,"rates":{"alpha":1,"beta":[3,1]},"constants":{"A":[1,1],"B":"2/3"}})");
  FlowRequest r = flow_request_from_json(req);
  CHECK(r.family == "NFtangllosc.II.14");
  CHECK(r.params.rates.at("beta") == Rat(3));
  CHECK(r.params.constants.at("B") == Rat(2, 3));
  CHECK(flow_request_from_json(flow_request_to_json(r)).params.constants == r.params.constants);

  auto f = instantiate(r.family, r.appendix, r.params);
  for (json j : {flow_to_json(f), group_law_to_json(f, verify_group_law(f)), analysis_to_json(f, analyze_elements(f))}) {
    CHECK(json::parse(j.dump()) == j);
    CHECK(j["citation"]["theorem"] == "NFtangllosc");
    CHECK(j["citation"]["case"] == "NFtangllosc.II.14");
  }
  auto g = instantiate("NFgen.a.iii");
  json d = decomposition_to_json(g, decompose_generic(g, 20, 3, 1));
  CHECK(json::parse(d.dump()) == d);
  json c = conjugacy_to_json(f, f, are_conjugate(f, f));
  CHECK(c["answer"] == "Yes");
  CHECK(mat_from_json(c["witness"]) == Mat::identity(4));
}
