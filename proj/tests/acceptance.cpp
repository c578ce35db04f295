// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cremona3/flows.hpp"

using namespace cr3;

namespace {

using Clock = std::chrono::steady_clock;
using K = ConjugacyResult::Kind;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const PRVType kTypes[] = {PRVType::GenO, PRVType::GenX,  PRVType::GenP, PRVType::TangO,
                          PRVType::TangX, PRVType::TangP, PRVType::Osc2X};

Outcome table() {
  Outcome o;
  for (PRVType t : kTypes) {
    Tuple4 n = normal_form(t);
    if (jacobian_det(n) != table_jacobian(t)) o.fail(std::string("jacobian of ") + type_name(t));
    if (!cross_minors_zero(compose(table_inverse(t), n), identity_tuple()))
      o.fail(std::string("table inverse of ") + type_name(t));
    QuadMap m{n, ""};
    if (!cross_minors_zero(compose(invert(m).comps, n), identity_tuple()))
      o.fail(std::string("computed inverse of ") + type_name(t));
  }
  o.detail = o.ok ? "7 types" : o.detail;
  return o;
}

Mat random_invertible(std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  Mat m(4, 4);
  do
    for (auto& x : m.a) x = Rat(d(rng));
  while (det(m).is_zero());
  return m;
}

Outcome conjugates(double& secs) {
  Outcome o;
  std::mt19937 rng(2024);
  std::vector<QuadMap> maps;
  std::vector<PRVType> want;
  for (PRVType t : kTypes)
    for (int k = 0; k < 50; ++k) {
      Mat A = random_invertible(rng), B = random_invertible(rng);
      maps.push_back({apply_left(A, apply_right(normal_form(t), B)), ""});
      want.push_back(t);
    }
  auto t0 = Clock::now();
  auto res = classify_batch(maps);
  int good = 0;
  for (size_t i = 0; i < maps.size(); ++i) {
    const auto& r = res[i].report;
    if (!r || r->type != want[i] || !r->certified ||
        !cross_minors_zero(compose(r->inverse, maps[i].comps), identity_tuple()))
      o.fail("map " + std::to_string(i) + " (" + type_name(want[i]) + "): " +
             (r ? type_name(r->type) : res[i].error));
    else
      ++good;
  }
  secs = since(t0);
  if (secs >= 30) o.fail("took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = std::to_string(good) + "/350 certified";
  return o;
}

Outcome group_laws(double& secs) {
  Outcome o;
  auto t0 = Clock::now();
  auto all = catalog_list(true);
  std::vector<std::string> bad(all.size());
  double worst = 0;
  std::vector<double> errs(all.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < (long)all.size(); ++i) {
    auto f = instantiate(*all[i]);
    std::string b;
    if (!verify_group_law(f).holds) b += " group";
    if (!verify_identity_at_zero(f)) b += " identity";
    if (!verify_inverse(f)) b += " inverse";
    auto n = numeric_group_law(f, 20, 1);
    errs[i] = n.max_err;
    if (!n.ok) b += " numeric";
    bad[i] = b;
  }
  for (size_t i = 0; i < all.size(); ++i) {
    worst = std::max(worst, errs[i]);
    if (!bad[i].empty()) o.fail(all[i]->key() + ":" + bad[i]);
  }
  secs = since(t0);
  if (secs >= 300) o.fail("took " + std::to_string(secs) + " s");
  if (o.ok) {
    std::ostringstream os;
    os << all.size() << " entries, max numeric error " << worst;
    o.detail = os.str();
  }
  return o;
}

PRVType generic_member_type(const SymbolicFlow& f) {
  for (int k = 0; k < 12; ++k) {
    auto [t0, g] = sample_fiber(f, k);
    try {
      auto t = classify(evaluate_member(f, t0, g)).type;
      if (t != PRVType::Lin) return t;
    } catch (const DegenerateFiber&) {
    }
  }
  return PRVType::Lin;
}

Outcome examples() {
  Outcome o;
  const std::pair<const char*, PRVType> ex[] = {{"Example.genll", PRVType::GenP},
                                                {"Example.tango", PRVType::TangO},
                                                {"Example.tangx", PRVType::TangX},
                                                {"Example.tangll", PRVType::TangP},
                                                {"Example.osc", PRVType::Osc2X}};
  for (auto [l, t] : ex) {
    auto f = instantiate(l);
    if (!verify_group_law(f).holds) o.fail(std::string(l) + " group law");
    PRVType got = generic_member_type(f);
    if (got != t) o.fail(std::string(l) + " is " + display_name(got));
  }
  if (o.ok) o.detail = "gen(//) tang(O) tang(x) tang(//) osc";
  return o;
}

Outcome rows(std::vector<ElementAnalysis>& an) {
  Outcome o;
  auto all = catalog_list(true);
  an.resize(all.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < (long)all.size(); ++i) an[i] = analyze_elements(instantiate(*all[i]));
  int members = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    if (!an[i].matches_row) o.fail(all[i]->key() + ": " + an[i].mismatch);
    for (auto t : an[i].sample_types) {
      ++members;
      if (t == PRVType::GenO || t == PRVType::GenX) o.fail(all[i]->key() + " has a " + display_name(t) + " member");
    }
  }
  if (o.ok) o.detail = std::to_string(all.size()) + " entries, " + std::to_string(members) + " members, none gen(O)/gen(x)";
  return o;
}

Outcome pencils(const std::vector<ElementAnalysis>& an) {
  Outcome o;
  auto all = catalog_list(true);
  int designated = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    const auto& e = *all[i];
    if (an[i].pencil_lines.empty()) o.fail(e.key() + " has no preserved pencil");
    auto f = instantiate(e);
    if (e.theorem == "NFgen") {
      // C_I is the line x0 = x3 = 0
      if (an[i].C_I.value.find("x0") == std::string::npos || an[i].C_I.verdict != Verdict::Fix)
        o.fail(e.key() + " C_I not the fix line");
      if (!check_pencil_preservation(f, Poly::x(0), Poly::x(3)).preserved) o.fail(e.key() + " C_I pencil");
      ++designated;
    }
    if (e.label.rfind("NFtangllosc.I.", 0) == 0) {
      bool a = check_pencil_preservation(f, Poly::x(1), Poly::x(3)).preserved;
      bool b = check_pencil_preservation(f, Poly::x(2), Poly::x(3)).preserved;
      if (!a && !b) o.fail(e.key() + " designated lines");
      ++designated;
    }
  }
  if (o.ok) o.detail = std::to_string(designated) + " designated lines ok";
  return o;
}

Outcome decompositions(double& secs) {
  Outcome o;
  auto t0 = Clock::now();
  int fam = 0, pts = 0;
  for (const auto* e : catalog_list(true)) {
    if (e->theorem != "NFgen") continue;
    auto d = decompose_generic(instantiate(*e), 100, 10, 11);
    ++fam;
    pts += d.checked;
    if (!d.ok || d.checked < 1000 || d.failed) o.fail(e->key() + ": failed " + std::to_string(d.failed));
  }
  secs = since(t0);
  if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = std::to_string(fam) + " families, " + std::to_string(pts) + " points";
  return o;
}

FlowParams fp(std::map<std::string, Rat> r, std::map<std::string, Rat> c) {
  FlowParams p;
  p.rates = std::move(r);
  p.constants = std::move(c);
  return p;
}

// swapped rates: the generator of gamma1 in one flow is the gamma2 one in the other
Tuple4 swap_gammas(const SymbolicFlow& f) {
  int g1 = f.U.find(Universe::gen_name("gamma1", 0)), g2 = f.U.find(Universe::gen_name("gamma2", 0));
  Tuple4 out;
  for (int i = 0; i < 4; ++i) {
    std::vector<Poly::Term> terms;
    for (auto [m, c] : f.comps[i].terms()) {
      std::swap(m[g1], m[g2]);
      terms.emplace_back(m, c);
    }
    out[i] = Poly::from_terms(std::move(terms));
  }
  return out;
}

// recheck the witness independently; both flows come from the same entry
bool witnessed(const SymbolicFlow& a, const SymbolicFlow& b) {
  auto r = are_conjugate(a, b);
  if (r.kind != K::Yes || !r.witness || det(*r.witness).is_zero()) return false;
  Tuple4 bc = a.params.rates == b.params.rates ? b.comps : swap_gammas(b);
  return cross_minors_zero(apply_left(*r.witness, bc), apply_right(a.comps, *r.witness));
}

Outcome conjugacy() {
  Outcome o;
  struct Pair {
    const char* group;
    const char* label;
    FlowParams p1, p2;
    bool yes;
  };
  std::vector<Pair> pairs{
      {"NFgen", "NFgen.b.iv", fp({}, {}), fp({{"gamma1", 3}, {"gamma2", 2}}, {}), true},
      {"NFgen", "NFgen.a.iv", fp({}, {}), fp({{"gamma1", 2}, {"gamma2", 5}}, {}), false},
      {"NFtangox1.I", "NFtangox1.I.d", fp({}, {{"c00", 1}, {"c22", 2}, {"c02", 3}}),
       fp({}, {{"c00", 3}, {"c22", 6}, {"c02", 9}}), true},
      {"NFtangox1.I", "NFtangox1.I.d", fp({}, {{"c00", 1}, {"c22", 2}, {"c02", 3}}),
       fp({}, {{"c00", 1}, {"c22", 2}, {"c02", 4}}), false},
      {"NFtangox1.II", "NFtangox1.II.f", fp({}, {{"c00", 1}, {"c22", 0}, {"c02", 1}}),
       fp({}, {{"c00", 2}, {"c22", 0}, {"c02", 2}}), true},
      {"NFtangox1.II", "NFtangox1.II.f", fp({}, {{"c00", 1}, {"c22", 0}, {"c02", 1}}),
       fp({{"alpha", 3}}, {{"c00", 1}, {"c22", 0}, {"c02", 1}}), false},
      {"NFtangllosc.I", "NFtangllosc.I.b", fp({}, {{"a", 1}, {"b", 1}}), fp({}, {{"a", 3}, {"b", 5}}), true},
      {"NFtangllosc.I", "NFtangllosc.I.b", fp({}, {{"a", 1}, {"b", 1}}),
       fp({{"beta", 7}}, {{"a", 1}, {"b", 1}}), false},
      {"NFtangllosc.II", "NFtangllosc.II.1", fp({}, {{"A", 1}, {"B", 2}, {"C", 3}}),
       fp({}, {{"A", 2}, {"B", 4}, {"C", 6}}), true},
      {"NFtangllosc.II", "NFtangllosc.II.1", fp({}, {{"A", 1}, {"B", 2}, {"C", 3}}),
       fp({{"delta", 5}}, {{"A", 1}, {"B", 2}, {"C", 3}}), false},
      {"NFtangllosc.II", "NFtangllosc.II.14", fp({}, {{"A", 1}, {"B", 1}, {"C", 1}}),
       fp({}, {{"A", 1}, {"B", 2}, {"C", 1}}), false},
  };
  int pos = 0, neg = 0;
  for (const auto& p : pairs) {
    auto a = instantiate(p.label, false, p.p1), b = instantiate(p.label, false, p.p2);
    if (p.yes) {
      if (!witnessed(a, b)) o.fail(std::string(p.group) + " positive pair " + p.label);
      ++pos;
    } else {
      if (are_conjugate(a, b).kind != K::No || are_conjugate(b, a).kind != K::No)
        o.fail(std::string(p.group) + " negative pair " + p.label);
      ++neg;
    }
  }
  int var = 0;
  for (const auto* e : catalog_list(true)) {
    if (!e->appendix) continue;
    auto v = instantiate(*e);
    auto [pe, pp] = normalized_partner(*e, v.params);
    auto n = instantiate(*pe, pp);
    if (are_conjugate(v, n).kind != K::Yes || are_conjugate(n, v).kind != K::Yes) o.fail(e->key() + " vs normalized");
    ++var;
  }
  if (o.ok)
    o.detail = std::to_string(pos) + " positive, " + std::to_string(neg) + " negative, " + std::to_string(var) +
               " appendix pairs";
  return o;
}

Outcome polynomial(const std::vector<ElementAnalysis>& an) {
  Outcome o;
  auto all = catalog_list(true);
  int n = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    if (an[i].H.verdict != Verdict::Fix) continue;
    ++n;
    if (!polynomial_flow(instantiate(*all[i]), an[i].H_form)) o.fail(all[i]->key());
  }
  if (o.ok) o.detail = std::to_string(n) + " families with H fix";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int k, const char* name, const std::function<Outcome()>& run) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d %-26s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", k, name, since(t0), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  };
  double s2 = 0, s3 = 0, s7 = 0;
  std::vector<ElementAnalysis> an;
  report(1, "seven-type table", table);
  report(2, "350 random conjugates", [&] { return conjugates(s2); });
  report(3, "catalog group laws", [&] { return group_laws(s3); });
  report(4, "worked examples", examples);
  report(5, "element analysis rows", [&] { return rows(an); });
  report(6, "pencil lines", [&] { return pencils(an); });
  report(7, "generic decomposition", [&] { return decompositions(s7); });
  report(8, "conjugacy", conjugacy);
  report(9, "polynomial flows", [&] { return polynomial(an); });
  std::printf("%d of 9 criteria failed\n", failed);
  return failed ? 1 : 0;
}
