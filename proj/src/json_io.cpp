#include "cremona3/json_io.hpp"

namespace cr3 {

namespace {

json int_json(const mpz_class& z) {
  if (z.fits_slong_p()) return (long long)z.get_si();
  return z.get_str();
}

mpz_class int_from(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw JsonError("bad integer " + j.dump());
    return z;
  }
  throw JsonError("expected integer, got " + j.dump());
}

const char* kind_name(SymKind k) {
  switch (k) {
    case SymKind::Time: return "time";
    case SymKind::Gen: return "gen";
    default: return "param";
  }
}

json cite(const SymbolicFlow& f) {
  json c;
  c["theorem"] = f.entry->theorem;
  c["case"] = f.entry->label;
  c["appendix_variant"] = f.entry->appendix;
  return c;
}

json rat_map(const std::map<std::string, Rat>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = rat_to_json(v);
  return o;
}

json poly_grid(const std::vector<std::vector<Poly>>& m, int nvars) {
  json a = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& p : row) r.push_back(terms_to_json(p, nvars));
    a.push_back(r);
  }
  return a;
}

json locus_json(const Locus& l) {
  return json{{"value", l.value}, {"verdict", verdict_name(l.verdict)}, {"certified", l.certified}};
}

}  // namespace

json rat_to_json(const Rat& r) { return json::array({int_json(r.num()), int_json(r.den())}); }

Rat rat_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw JsonError("rational must be [num, den]");
    mpz_class d = int_from(j[1]);
    if (d == 0) throw JsonError("zero denominator");
    return Rat(mpq_class(int_from(j[0]), 1) / mpq_class(d, 1));
  }
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rat::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw JsonError("bad rational " + j.dump());
    }
  }
  throw JsonError("expected rational, got " + j.dump());
}

json universe_to_json(const Universe& u) {
  json a = json::array();
  for (const auto& s : u.symbols())
    a.push_back({{"name", s.name}, {"kind", kind_name(s.kind)}, {"label", s.label}, {"slot", s.slot}});
  return a;
}

Universe universe_from_json(const json& j) {
  Universe u;
  for (const auto& e : j) {
    Symbol s;
    s.name = e.at("name").get<std::string>();
    std::string k = e.value("kind", "param");
    s.kind = k == "time" ? SymKind::Time : k == "gen" ? SymKind::Gen : SymKind::Param;
    s.label = e.value("label", "");
    s.slot = e.value("slot", 0);
    u.add(s);
  }
  return u;
}

json terms_to_json(const Poly& p, int nvars) {
  json a = json::array();
  for (const auto& [m, c] : p.terms()) {
    json e = json::array();
    for (int i = 0; i < nvars; ++i) e.push_back((int)m[i]);
    for (int i = nvars; i < kVars; ++i)
      if (m[i]) throw JsonError("term uses a variable outside the header");
    a.push_back(json::array({int_json(c.num()), int_json(c.den()), e}));
  }
  return a;
}

Poly terms_from_json(const json& j, const std::vector<int>& var_of) {
  if (!j.is_array()) throw JsonError("term list must be an array");
  std::vector<Poly::Term> out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[2].is_array()) throw JsonError("term must be [num, den, [e...]]");
    if (t[2].size() != var_of.size()) throw JsonError("exponent vector has wrong length");
    Mono m;
    for (size_t i = 0; i < var_of.size(); ++i) {
      int e = t[2][i].get<int>();
      if (e < -127 || e > 127) throw JsonError("exponent out of range");
      m[var_of[i]] = (int8_t)e;
    }
    out.emplace_back(m, rat_from_json(json::array({t[0], t[1]})));
  }
  return Poly::from_terms(std::move(out));
}

json poly_to_json(const Poly& p, const Universe& u) {
  return json{{"universe", universe_to_json(u)}, {"terms", terms_to_json(p, kX + u.size())}};
}

Poly poly_from_json(const json& j, Universe& u) {
  std::vector<int> var_of{0, 1, 2, 3};
  if (j.contains("universe")) {
    Universe h = universe_from_json(j["universe"]);
    for (const auto& s : h.symbols()) var_of.push_back(u.add(s));
  }
  return terms_from_json(j.at("terms"), var_of);
}

json map_to_json(const QuadMap& m) {
  json c = json::array();
  for (const auto& p : m.comps) c.push_back(terms_to_json(p, kX));
  return json{{"components", c}, {"label", m.label}};
}

QuadMap map_from_json(const json& j) {
  try {
    QuadMap m;
    const auto& c = j.at("components");
    if (!c.is_array() || c.size() != 4) throw JsonError("map needs exactly 4 components");
    for (int i = 0; i < 4; ++i) m.comps[i] = terms_from_json(c[i], {0, 1, 2, 3});
    m.label = j.value("label", "");
    return m;
  } catch (const json::exception& e) {
    throw JsonError(std::string("map JSON: ") + e.what());
  }
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat_to_json(x));
  return a;
}

Vec vec_from_json(const json& j) {
  Vec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

json mat_to_json(const Mat& m) {
  json a = json::array();
  for (int i = 0; i < m.r; ++i) a.push_back(vec_to_json(m.row(i)));
  return a;
}

Mat mat_from_json(const json& j) {
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vec_from_json(r));
  return Mat::from_rows(rows);
}

json classification_to_json(const ClassificationReport& r) {
  json j;
  j["type"] = type_name(r.type);
  j["type_label"] = display_name(r.type);
  j["certified"] = r.certified;
  j["H"] = vec_to_json(lin_coeffs(r.H));
  j["P"] = vec_to_json(r.P);
  j["P_I"] = vec_to_json(r.P_I);
  j["H_I"] = vec_to_json(lin_coeffs(r.H_I));
  j["C_I"] = terms_to_json(r.cI, kX);
  j["C_I_rank"] = r.cI_rank;
  j["C_I_mult"] = r.cI_mult;
  j["S_or_Pi"] = r.S_or_Pi ? terms_to_json(*r.S_or_Pi, kX) : json(nullptr);
  j["C_desc"] = r.C_desc;
  j["gamma"] = r.gamma;
  json fac = json::array();
  for (const auto& [l, e] : r.jac.linear_factors) fac.push_back({{"factor", vec_to_json(lin_coeffs(l))}, {"mult", e}});
  j["jacobian"] = {{"unit", rat_to_json(r.jac.unit)}, {"linear_factors", fac},
                   {"residual", terms_to_json(r.jac.residual, kX)}};
  json inv = json::array();
  for (const auto& p : r.inverse) inv.push_back(terms_to_json(p, kX));
  j["inverse"] = inv;
  j["lin_factor"] = vec_to_json(lin_coeffs(r.lin_factor));
  return j;
}

ClassificationReport classification_from_json(const json& j) {
  try {
    ClassificationReport r;
    auto t = parse_type(j.at("type").get<std::string>());
    if (!t) throw JsonError("unknown type");
    r.type = *t;
    r.certified = j.at("certified").get<bool>();
    const std::vector<int> x{0, 1, 2, 3};
    r.H = lin_form(vec_from_json(j.at("H")));
    r.P = vec_from_json(j.at("P"));
    r.P_I = vec_from_json(j.at("P_I"));
    r.H_I = lin_form(vec_from_json(j.at("H_I")));
    r.cI = terms_from_json(j.at("C_I"), x);
    r.cI_rank = j.at("C_I_rank").get<int>();
    r.cI_mult = j.at("C_I_mult").get<int>();
    if (!j.at("S_or_Pi").is_null()) r.S_or_Pi = terms_from_json(j["S_or_Pi"], x);
    r.C_desc = j.at("C_desc").get<std::string>();
    r.gamma = j.at("gamma").get<std::string>();
    const auto& jac = j.at("jacobian");
    r.jac.unit = rat_from_json(jac.at("unit"));
    for (const auto& f : jac.at("linear_factors"))
      r.jac.linear_factors.emplace_back(lin_form(vec_from_json(f.at("factor"))), f.at("mult").get<int>());
    r.jac.residual = terms_from_json(jac.at("residual"), x);
    const auto& inv = j.at("inverse");
    if (inv.size() != 4) throw JsonError("inverse needs 4 components");
    for (int i = 0; i < 4; ++i) r.inverse[i] = terms_from_json(inv[i], x);
    r.lin_factor = lin_form(vec_from_json(j.at("lin_factor")));
    return r;
  } catch (const json::exception& e) {
    throw JsonError(std::string("classification JSON: ") + e.what());
  }
}

FlowRequest flow_request_from_json(const json& j) {
  try {
    FlowRequest r;
    r.family = j.at("family").get<std::string>();
    r.appendix = j.value("appendix_variant", false);
    if (j.contains("rates"))
      for (const auto& [k, v] : j["rates"].items()) r.params.rates[k] = rat_from_json(v);
    if (j.contains("constants"))
      for (const auto& [k, v] : j["constants"].items()) r.params.constants[k] = rat_from_json(v);
    return r;
  } catch (const json::exception& e) {
    throw JsonError(std::string("flow request JSON: ") + e.what());
  }
}

json flow_request_to_json(const FlowRequest& r) {
  return json{{"family", r.family},
              {"appendix_variant", r.appendix},
              {"rates", rat_map(r.params.rates)},
              {"constants", rat_map(r.params.constants)}};
}

json flow_to_json(const SymbolicFlow& f) {
  json j;
  j["citation"] = cite(f);
  j["rates"] = rat_map(f.params.rates);
  j["constants"] = rat_map(f.params.constants);
  j["symbolic_constants"] = f.symbolic;
  j["generators"] = f.gens;
  j["universe"] = universe_to_json(f.U);
  int n = kX + f.U.size();
  json c = json::array();
  for (const auto& p : f.comps) c.push_back(terms_to_json(p, n));
  j["components"] = c;
  j["clearing"] = terms_to_json(f.clearing, n);
  return j;
}

json group_law_to_json(const SymbolicFlow& f, const GroupLawReport& r) {
  json j;
  j["citation"] = cite(f);
  j["holds"] = r.holds;
  j["universe"] = universe_to_json(r.U);
  int n = kX + r.U.size();
  j["component"] = r.component;
  j["cofactor"] = r.cofactor ? terms_to_json(*r.cofactor, n) : json(nullptr);
  j["failing_minor"] = r.failing_minor ? terms_to_json(*r.failing_minor, n) : json(nullptr);
  return j;
}

json analysis_to_json(const SymbolicFlow& f, const ElementAnalysis& a) {
  json j;
  j["citation"] = cite(f);
  j["generic_type"] = display_name(a.type);
  json st = json::array();
  for (auto t : a.sample_types) st.push_back(display_name(t));
  j["sample_types"] = st;
  j["row"] = std::string(1, a.row);
  j["H"] = locus_json(a.H);
  j["P_I"] = locus_json(a.P_I);
  j["C_I"] = locus_json(a.C_I);
  j["S"] = locus_json(a.S);
  j["H_I"] = locus_json(a.H_I);
  j["pencil_lines"] = a.pencil_lines;
  j["matches_row"] = a.matches_row;
  j["mismatch"] = a.mismatch;
  return j;
}

json decomposition_to_json(const SymbolicFlow& f, const Decomposition& d) {
  json j;
  j["citation"] = cite(f);
  j["universe"] = universe_to_json(f.U);
  int n = kX + f.U.size();
  j["P_I"] = vec_to_json(d.P_I);
  j["pencil"] = json::array({terms_to_json(d.pencil[0], n), terms_to_json(d.pencil[1], n)});
  j["eta"] = poly_grid(d.eta, n);
  j["chi"] = poly_grid(d.chi, n);
  j["checked"] = d.checked;
  j["skipped"] = d.skipped;
  j["failed"] = d.failed;
  j["ok"] = d.ok;
  return j;
}

json conjugacy_to_json(const SymbolicFlow& f1, const SymbolicFlow& f2, const ConjugacyResult& r) {
  using K = ConjugacyResult::Kind;
  json j;
  j["first"] = cite(f1);
  j["second"] = cite(f2);
  j["answer"] = r.kind == K::Yes ? "Yes" : r.kind == K::No ? "No" : "OutsideCriteria";
  j["reason"] = r.reason;
  j["witness"] = r.witness ? mat_to_json(*r.witness) : json(nullptr);
  return j;
}

}  // namespace cr3
