#include <cmath>
#include <sstream>

#include "cremona3/catalog_data.hpp"
#include "cremona3/expr.hpp"
#include "cremona3/flows.hpp"

namespace cr3 {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  std::string x;
  while (in >> x) w.push_back(x);
  return w;
}

std::pair<std::string, Rat> keyval(const std::string& w) {
  auto eq = w.find('=');
  if (eq == std::string::npos) throw ParseError("catalog: expected name=value, got " + w);
  return {w.substr(0, eq), Rat::parse(w.substr(eq + 1))};
}

// integer combination of labels: "2*alpha", "-delta", "alpha+beta"
std::vector<std::pair<std::string, int>> rate_combo(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-' || s[i] == ' ')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = trim(s.substr(i, j - i));
    if (term.empty()) throw ParseError("bad rate expression " + s);
    int k = 1;
    auto star = term.find('*');
    if (star != std::string::npos) {
      k = std::stoi(term.substr(0, star));
      term = trim(term.substr(star + 1));
    } else if (std::isdigit((unsigned char)term[0])) {
      throw ParseError("bad rate expression " + s);
    }
    out.emplace_back(term, sign * k);
    i = j;
  }
  return out;
}

}  // namespace

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
  std::vector<CatalogEntry> out;
  std::istringstream in(text);
  std::string line;
  CatalogEntry* cur = nullptr;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      auto close = line.find(']');
      if (close == std::string::npos) throw ParseError("catalog line " + std::to_string(lineno));
      auto w = words(line.substr(1, close - 1));
      out.emplace_back();
      cur = &out.back();
      cur->label = w.at(0);
      cur->appendix = w.size() > 1 && w[1] == "appendix";
      continue;
    }
    if (!cur) throw ParseError("catalog: key outside block at line " + std::to_string(lineno));
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("catalog line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, colon)), val = trim(line.substr(colon + 1));
    if (key == "theorem") cur->theorem = val;
    else if (key == "rates")
      for (auto& w : words(val)) cur->rates.push_back(keyval(w));
    else if (key == "params")
      for (auto& w : words(val)) cur->params.push_back(keyval(w));
    else if (key == "require") cur->require = words(val);
    else if (key == "consts") cur->consts = words(val);
    else if (key == "zeroed") cur->zeroed = words(val);
    else if (key == "closure") {
      for (auto& w : words(val)) {
        auto t = parse_type(w);
        if (!t) throw ParseError("catalog: unknown type " + w);
        cur->closure.push_back(*t);
      }
    } else if (key == "pencil") {
      auto c = val.find(',');
      cur->pencil = {trim(val.substr(0, c)), trim(val.substr(c + 1))};
    } else if (key == "clear") cur->clear = val;
    else if (key == "row") {
    } else if (key.size() == 4 && key.rfind("phi", 0) == 0 && key[3] >= '0' && key[3] <= '3')
      cur->phi[key[3] - '0'] = val;
    else
      throw ParseError("catalog: unknown key " + key);
  }
  return out;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> cat = parse_catalog(kCatalogText);
  return cat;
}

std::vector<const CatalogEntry*> catalog_list(bool with_appendix) {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : catalog())
    if (with_appendix || !e.appendix) out.push_back(&e);
  return out;
}

const CatalogEntry& find_entry(const std::string& label, bool appendix) {
  for (const auto& e : catalog())
    if (e.label == label && e.appendix == appendix) return e;
  throw UnknownFamily("unknown flow family " + label + (appendix ? " (appendix)" : ""));
}

Rat generic_constant(int i) {
  static const int v[] = {7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  return Rat(v[i % 10] + 40 * (i / 10));
}

SymbolicFlow instantiate(const CatalogEntry& e, const FlowParams& p) {
  SymbolicFlow f;
  f.entry = &e;
  for (const auto& [k, v] : e.rates) f.params.rates[k] = v;
  for (const auto& [k, v] : p.rates) {
    if (!f.params.rates.count(k)) throw std::invalid_argument(e.key() + " has no rate " + k);
    f.params.rates[k] = v;
  }
  std::map<std::string, Rat> defaults(e.params.begin(), e.params.end());
  for (const auto& [k, v] : p.constants)
    if (std::find(e.consts.begin(), e.consts.end(), k) == e.consts.end())
      throw std::invalid_argument(e.key() + " has no constant " + k);
  for (const auto& c : e.consts) {
    if (p.constants.count(c)) f.params.constants[c] = p.constants.at(c);
    else if (defaults.count(c)) f.params.constants[c] = defaults[c];
    else f.symbolic.push_back(c);
  }

  // constraints, skipped when a symbol is involved
  for (const auto& req : e.require) {
    auto ne = req.find("!=");
    if (ne == std::string::npos) throw ParseError("bad constraint " + req);
    bool symbolic = false;
    ParseEnv env;
    env.ident = [&](const std::string& n) -> std::optional<Poly> {
      if (f.params.rates.count(n)) return Poly(f.params.rates[n]);
      if (f.params.constants.count(n)) return Poly(f.params.constants[n]);
      symbolic = true;
      return Poly(0);
    };
    Poly lhs = parse_poly(req.substr(0, ne), env), rhs = parse_poly(req.substr(ne + 2), env);
    if (!symbolic && lhs == rhs) {
      std::string rel = req;
      rel.replace(ne, 2, " = ");
      throw ConstraintViolation(rel + " forbidden in " + e.label);
    }
  }

  f.U.time(0);
  for (const auto& [k, v] : e.rates) {
    const Rat& val = f.params.rates[k];
    if (val.is_zero()) {
      f.gen_of[k] = "";
      continue;
    }
    std::string g = k;
    for (const auto& h : f.gens)
      if (f.params.rates[h] == val) g = h;
    f.gen_of[k] = g;
    if (g == k) {
      f.gens.push_back(k);
      f.U.gen(k, 0);
    }
  }
  for (const auto& c : f.symbolic) f.U.add(Symbol{c, SymKind::Param, c, 0});

  ParseEnv env;
  env.ident = [&](const std::string& n) -> std::optional<Poly> {
    if (n == "t") return Poly::var(f.U.var("t"));
    if (f.params.constants.count(n)) return Poly(f.params.constants[n]);
    int v = f.U.find(n);
    if (v >= 0 && f.U.sym(v).kind == SymKind::Param) return Poly::var(v);
    return std::nullopt;
  };
  env.exp = [&](const std::string& arg) -> Poly {
    Mono m;
    for (const auto& [lab, k] : rate_combo(arg)) {
      auto it = f.gen_of.find(lab);
      if (it == f.gen_of.end()) throw ParseError("E(): unknown rate " + lab + " in " + e.key());
      if (it->second.empty()) continue;
      int v = f.U.var(Universe::gen_name(it->second, 0));
      m[v] = (int8_t)(m[v] + k);
    }
    return Poly::monomial(m, Rat(1));
  };
  for (int i = 0; i < 4; ++i) {
    f.comps[i] = parse_poly(e.phi[i], env);
    if (!f.comps[i].is_zero() && !f.comps[i].x_homogeneous(2))
      throw ParseError(e.key() + ": phi" + std::to_string(i) + " is not a quadratic form");
  }
  f.clearing = e.clear.empty() ? Poly(1) : parse_poly(e.clear, env);

  // Laurent clearing by a monomial in the generators
  Mono lift;
  for (const auto& c : f.comps)
    for (const auto& [m, _] : c.terms())
      for (int v = kX; v < kVars; ++v)
        if (m[v] < 0 && -m[v] > lift[v]) lift[v] = (int8_t)-m[v];
  if (!lift.is_one()) {
    for (auto& c : f.comps) c = c.mul_mono(lift, Rat(1));
    f.clearing = f.clearing.mul_mono(lift, Rat(1));
  }
  return f;
}

SymbolicFlow instantiate(const std::string& label, bool appendix, const FlowParams& p) {
  return instantiate(find_entry(label, appendix), p);
}

SymbolicFlow instantiate_numeric(const CatalogEntry& e, const FlowParams& p) {
  FlowParams q = p;
  std::map<std::string, Rat> defaults(e.params.begin(), e.params.end());
  int i = 0;
  for (const auto& c : e.consts) {
    if (!q.constants.count(c) && !defaults.count(c)) q.constants[c] = generic_constant(i);
    ++i;
  }
  return instantiate(e, q);
}

Poly rename_slot(const Poly& p, Universe& U, int to_slot) {
  std::vector<std::pair<int, int>> ren;  // from var, to var
  for (int v = kX; v < kX + U.size(); ++v) {
    const Symbol s = U.sym(v);
    if (s.kind == SymKind::Time && s.slot == 0) ren.emplace_back(v, U.time(to_slot));
    if (s.kind == SymKind::Gen && s.slot == 0) ren.emplace_back(v, U.gen(s.label, to_slot));
  }
  std::vector<Poly::Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Mono n = m;
    for (auto [a, b] : ren) {
      if (n[b]) throw std::domain_error("rename_slot: target symbol already present");
      n[b] = n[a];
      n[a] = 0;
    }
    out.emplace_back(n, c);
  }
  return Poly::from_terms(std::move(out));
}

Poly substitute_time_shift(const Poly& p, Universe& U) {
  int t = U.var("t");
  int s = U.time(1);
  if (p.uses_var(s)) throw std::domain_error("substitute_time_shift: input already mentions s");
  std::vector<std::pair<int, int>> gen;
  for (int v = kX; v < kX + U.size(); ++v) {
    const Symbol sy = U.sym(v);
    if (sy.kind == SymKind::Gen && sy.slot == 0) gen.emplace_back(v, U.gen(sy.label, 1));
  }
  std::vector<Poly::Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Mono n = m;
    for (auto [a, b] : gen) {
      if (n[b]) throw std::domain_error("substitute_time_shift: input already mentions an s generator");
      n[b] = n[a];
    }
    out.emplace_back(n, c);
  }
  return Poly::from_terms(std::move(out)).subst(t, Poly::var(t) + Poly::var(s));
}

Rat evaluate_scalars(const Poly& p, const std::map<int, Rat>& assign) {
  std::vector<std::pair<int, Rat>> a(assign.begin(), assign.end());
  Poly r = p.eval(a);
  if (!r.is_constant()) throw std::invalid_argument("evaluate_scalars: assignment does not cover every symbol");
  return r.constant_term();
}

std::complex<double> evaluate_scalars(const Poly& p, const std::map<int, std::complex<double>>& assign) {
  std::complex<double> r = 0;
  for (const auto& [m, c] : p.terms()) {
    std::complex<double> x = c.to_double();
    for (int v = 0; v < kVars; ++v) {
      if (!m[v]) continue;
      auto it = assign.find(v);
      if (it == assign.end()) throw std::invalid_argument("evaluate_scalars: unassigned symbol");
      x *= std::pow(it->second, (int)m[v]);
    }
    r += x;
  }
  return r;
}

double eval_double(const Poly& p, const std::vector<double>& vals) {
  double r = 0;
  for (const auto& [m, c] : p.terms()) {
    double x = c.to_double();
    for (int v = 0; v < kVars; ++v)
      if (m[v]) x *= std::pow(vals[v], (int)m[v]);
    r += x;
  }
  return r;
}

}  // namespace cr3
