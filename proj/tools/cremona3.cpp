#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cremona3/expr.hpp"
#include "cremona3/json_io.hpp"
#include "cremona3/report.hpp"

using namespace cr3;

namespace {

enum Exit { kOk = 0, kVerifyFail = 1, kInput = 2, kInternal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::vector<std::string> inputs;
  std::string output;
  std::string fiber;
  unsigned seed = 1;
  bool json_out = false, appendix = false, numeric = false;
  std::vector<std::string> rates, consts;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(where + ": " + e.what());
  }
}

// JSON map, JSON array of maps, or four formulas separated by ';' or newlines
// a file, or the formulas themselves
std::vector<QuadMap> read_maps(const std::string& path) {
  bool inline_text = !std::filesystem::exists(path) && path.find(';') != std::string::npos;
  std::string text = inline_text ? path : slurp(path);
  size_t k = text.find_first_not_of(" \t\r\n");
  if (k != std::string::npos && (text[k] == '{' || text[k] == '[')) {
    json j = parse_json_text(text, path);
    std::vector<QuadMap> out;
    if (j.is_array())
      for (const auto& m : j) out.push_back(map_from_json(m));
    else
      out.push_back(map_from_json(j));
    for (auto& m : out)
      if (m.label.empty()) m.label = path;
    return out;
  }
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == '\n') {
      if (cur.find_first_not_of(" \t\r") != std::string::npos) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.find_first_not_of(" \t\r") != std::string::npos) parts.push_back(cur);
  if (parts.size() != 4) throw InputError(path + ": expected 4 components, got " + std::to_string(parts.size()));
  QuadMap m;
  for (int i = 0; i < 4; ++i) m.comps[i] = parse_poly(parts[i]);
  m.label = path;
  return {m};
}

std::pair<std::string, Rat> keyval(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) throw InputError("expected name=value, got " + s);
  try {
    return {s.substr(0, eq), Rat::parse(s.substr(eq + 1))};
  } catch (const std::exception&) {
    throw InputError("bad rational in " + s);
  }
}

SymbolicFlow load_flow(const std::string& spec, const Opts& o) {
  FlowRequest req;
  if (std::filesystem::exists(spec)) {
    req = flow_request_from_json(parse_json_text(slurp(spec), spec));
  } else {
    req.family = spec;
    req.appendix = o.appendix;
  }
  for (const auto& r : o.rates) {
    auto [k, v] = keyval(r);
    req.params.rates[k] = v;
  }
  for (const auto& c : o.consts) {
    auto [k, v] = keyval(c);
    req.params.constants[k] = v;
  }
  return instantiate(req.family, req.appendix, req.params);
}

void emit(const Opts& o, const std::string& text, const json& j) {
  if (o.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw InputError("cannot write " + o.output);
    out << j.dump(2) << "\n";
    std::ofstream txt(o.output + ".txt");
    txt << text;
  }
}

int cmd_classify(const Opts& o) {
  std::vector<QuadMap> maps;
  for (const auto& p : o.inputs)
    for (auto& m : read_maps(p)) maps.push_back(std::move(m));
  auto res = classify_batch(maps);
  json arr = json::array();
  std::string text;
  int code = kOk;
  for (size_t i = 0; i < maps.size(); ++i) {
    const auto& it = res[i];
    json j;
    j["label"] = maps[i].label;
    switch (it.status) {
      case BatchItem::Status::Ok:
        j["report"] = classification_to_json(*it.report);
        text += render_classification(*it.report, maps[i].label);
        if (!it.report->certified) code = std::max(code, (int)kVerifyFail);
        break;
      case BatchItem::Status::NotBidegree22:
        j["report"] = {{"type", "NotBidegree22"}, {"reason", it.error}};
        text += maps[i].label + ": NotBidegree22 (" + it.error + ")\n";
        break;
      case BatchItem::Status::Degenerate:
        j["error"] = it.error;
        text += maps[i].label + ": input error: " + it.error + "\n";
        code = std::max(code, (int)kInput);
        break;
      case BatchItem::Status::Internal:
        j["error"] = it.error;
        text += maps[i].label + ": internal: " + it.error + "\n";
        code = kInternal;
        break;
    }
    arr.push_back(j);
  }
  emit(o, text, arr.size() == 1 ? arr[0] : arr);
  return code;
}

QuadMap single_map(const Opts& o, size_t i = 0) {
  if (o.inputs.size() <= i) throw InputError("missing map input");
  auto ms = read_maps(o.inputs[i]);
  if (ms.size() != 1) throw InputError(o.inputs[i] + ": expected a single map");
  return ms[0];
}

int cmd_invert(const Opts& o) {
  QuadMap m = single_map(o);
  auto r = classify(m);
  QuadMap inv = invert(m);
  json j = map_to_json(inv);
  j["certified"] = r.certified;
  emit(o, render_map(inv) + (r.certified ? "  round trip certified\n" : "  round trip NOT certified\n"), j);
  return r.certified ? kOk : kVerifyFail;
}

int cmd_canonicalize(const Opts& o) {
  QuadMap m = single_map(o);
  auto c = canonicalize(m);
  json j{{"type", type_name(c.N)}, {"A", mat_to_json(c.A)}, {"B", mat_to_json(c.B)}};
  std::ostringstream os;
  os << m.label << " = A · " << display_name(c.N) << " · B\n  A =";
  for (int i = 0; i < 4; ++i) os << " " << point_text(c.A.row(i));
  os << "\n  B =";
  for (int i = 0; i < 4; ++i) os << " " << point_text(c.B.row(i));
  os << "\n";
  emit(o, os.str(), j);
  return kOk;
}

int cmd_compose(const Opts& o) {
  QuadMap f = single_map(o, 0), g = single_map(o, 1);
  auto c = compose_maps(f.comps, g.comps);
  QuadMap raw{c.raw, f.label + " o " + g.label};
  json j{{"raw", map_to_json(raw)}};
  std::string text = "raw composition\n" + render_map(raw);
  if (c.reduced) {
    QuadMap red{*c.reduced, raw.label};
    j["reduced"] = map_to_json(red);
    j["common_factor"] = terms_to_json(c.common, kX);
    text += "common factor " + pretty(c.common) + "\nreduced\n" + render_map(red);
  }
  emit(o, text, j);
  return kOk;
}

int cmd_flow_list(const Opts& o) {
  json arr = json::array();
  std::ostringstream os;
  for (const auto* e : catalog_list(o.appendix)) {
    arr.push_back({{"label", e->label}, {"appendix_variant", e->appendix}, {"theorem", e->theorem}});
    os << e->key() << "  [" << citation_text(*e) << "]\n";
  }
  emit(o, os.str(), arr);
  return kOk;
}

Rat parse_fiber(const std::string& s) {
  if (s.rfind("t=", 0) != 0) throw InputError("--fiber expects t=<rat>");
  try {
    return Rat::parse(s.substr(2));
  } catch (const std::exception&) {
    throw InputError("bad fiber " + s);
  }
}

int cmd_flow_make(const Opts& o) {
  if (o.inputs.empty()) throw InputError("missing flow");
  SymbolicFlow f = load_flow(o.inputs[0], o);
  json j = flow_to_json(f);
  std::string text = render_flow(f);
  if (!o.fiber.empty()) {
    Rat t0 = parse_fiber(o.fiber);
    QuadMap m = evaluate_member(f, t0);
    j["member"] = map_to_json(m);
    text += render_map(m);
    try {
      auto r = classify(m);
      j["member_report"] = classification_to_json(r);
      text += render_classification(r, "member");
    } catch (const NotBidegree22& e) {
      j["member_report"] = {{"type", "NotBidegree22"}, {"reason", e.what()}};
    }
  }
  emit(o, text, j);
  return kOk;
}

int cmd_flow_verify(const Opts& o) {
  if (o.inputs.empty()) throw InputError("missing flow");
  SymbolicFlow f = load_flow(o.inputs[0], o);
  auto g = verify_group_law(f);
  bool id = verify_identity_at_zero(f), inv = verify_inverse(f);
  std::optional<NumericReport> num;
  if (o.numeric) num = numeric_group_law(f, 20, o.seed);
  json j = group_law_to_json(f, g);
  j["identity_at_zero"] = id;
  j["inverse"] = inv;
  if (num) j["numeric"] = {{"ok", num->ok}, {"max_err", num->max_err}, {"samples", num->samples}};
  emit(o, render_group_law(f, g, id, inv, num ? &*num : nullptr), j);
  return g.holds && id && inv && (!num || num->ok) ? kOk : kVerifyFail;
}

int cmd_flow_analyze(const Opts& o) {
  if (o.inputs.empty()) throw InputError("missing flow");
  SymbolicFlow f = load_flow(o.inputs[0], o);
  auto a = analyze_elements(f);
  json j = analysis_to_json(f, a);
  std::string text = render_analysis(f, a);
  bool ok = a.matches_row && !a.pencil_lines.empty();
  if (a.H.verdict == Verdict::Fix) {
    bool pf = polynomial_flow(f, a.H_form);
    j["polynomial_flow"] = pf;
    text += std::string("  polynomial flow in the chart off H: ") + (pf ? "yes" : "NO") + "\n";
    ok = ok && pf;
  }
  if (f.entry->theorem == "NFgen") {
    auto d = decompose_generic(f, 100, 10, o.seed);
    j["decomposition"] = decomposition_to_json(f, d);
    text += render_decomposition(f, d);
    ok = ok && d.ok;
  }
  emit(o, text, j);
  return ok ? kOk : kVerifyFail;
}

int cmd_flow_conjugate(const Opts& o) {
  SymbolicFlow a = load_flow(o.inputs[0], o), b;
  if (o.inputs.size() == 2) {
    b = load_flow(o.inputs[1], o);
  } else {
    // one flow: compare with its normalized form
    auto [pe, pp] = normalized_partner(*a.entry, a.params);
    b = instantiate(*pe, pp);
  }
  auto r = are_conjugate(a, b);
  emit(o, render_conjugacy(a, b, r), conjugacy_to_json(a, b, r));
  return kOk;
}

struct SuiteRow {
  std::string label, theorem;
  bool group = false, identity = false, inverse = false, row = false, pencil = false;
  std::optional<bool> numeric, poly, decomposition, partner;
  std::string type, note;
  bool ok() const {
    return group && identity && inverse && row && pencil && numeric.value_or(true) && poly.value_or(true) &&
           decomposition.value_or(true) && partner.value_or(true);
  }
};

SuiteRow run_entry(const CatalogEntry& e, const Opts& o) {
  SuiteRow r;
  r.label = e.key();
  r.theorem = e.theorem;
  try {
    SymbolicFlow f = instantiate(e);
    r.group = verify_group_law(f).holds;
    r.identity = verify_identity_at_zero(f);
    r.inverse = verify_inverse(f);
    if (o.numeric) r.numeric = numeric_group_law(f, 20, o.seed).ok;
    auto a = analyze_elements(f);
    r.type = display_name(a.type);
    r.row = a.matches_row;
    r.pencil = !a.pencil_lines.empty();
    if (!a.matches_row) r.note = a.mismatch;
    if (a.H.verdict == Verdict::Fix) r.poly = polynomial_flow(f, a.H_form);
    if (e.theorem == "NFgen") r.decomposition = decompose_generic(f, 100, 10, o.seed).ok;
    if (e.appendix) {
      auto [pe, pp] = normalized_partner(e, f.params);
      r.partner = are_conjugate(f, instantiate(*pe, pp)).kind == ConjugacyResult::Kind::Yes;
    }
  } catch (const std::exception& ex) {
    r.note = ex.what();
  }
  return r;
}

int cmd_suite(const Opts& o) {
  auto entries = catalog_list(o.appendix);
  std::vector<SuiteRow> rows(entries.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < (long)entries.size(); ++i) rows[i] = run_entry(*entries[i], o);
  auto mark = [](std::optional<bool> b) { return !b ? std::string("-") : *b ? "ok" : "FAIL"; };
  std::ostringstream os;
  os << std::left << std::setw(30) << "case" << std::setw(10) << "type"
     << "group id  inv num row pencil poly decomp partner\n";
  json arr = json::array();
  int fails = 0;
  for (const auto& r : rows) {
    os << std::left << std::setw(30) << r.label << std::setw(10) << r.type << std::setw(6) << mark(r.group)
       << std::setw(4) << mark(r.identity) << std::setw(4) << mark(r.inverse) << std::setw(4) << mark(r.numeric)
       << std::setw(4) << mark(r.row) << std::setw(7) << mark(r.pencil) << std::setw(5) << mark(r.poly)
       << std::setw(7) << mark(r.decomposition) << mark(r.partner);
    if (!r.note.empty()) os << "  " << r.note;
    os << "\n";
    fails += !r.ok();
    auto jb = [](std::optional<bool> b) { return b ? json(*b) : json(nullptr); };
    arr.push_back({{"case", r.label},
                   {"theorem", r.theorem},
                   {"generic_type", r.type},
                   {"group_law", r.group},
                   {"identity_at_zero", r.identity},
                   {"inverse", r.inverse},
                   {"numeric", jb(r.numeric)},
                   {"conclusions_row", r.row},
                   {"pencil", r.pencil},
                   {"polynomial_flow", jb(r.poly)},
                   {"decomposition", jb(r.decomposition)},
                   {"partner_conjugate", jb(r.partner)},
                   {"note", r.note},
                   {"pass", r.ok()}});
  }
  os << rows.size() << " cases, " << fails << " failing\n";
  emit(o, os.str(), json{{"seed", o.seed}, {"cases", arr}, {"failing", fails}});
  return fails ? kVerifyFail : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with quadratic birational maps of P3 and their flows"};
  app.require_subcommand(1, 1);
  Opts o;
  auto common = [&](CLI::App* c, const std::string& what, int min_inputs, int max_inputs) {
    auto* in = c->add_option("inputs", o.inputs, what);
    if (min_inputs > 0) in->required();
    in->expected(min_inputs, max_inputs);
    c->add_option("-o,--output", o.output, "write the JSON report here (text beside it as .txt)");
    c->add_flag("--json", o.json_out, "print JSON instead of text");
    c->add_option("--seed", o.seed, "sampling seed");
    c->add_flag("--appendix", o.appendix, "use or include the appendix general forms");
    c->add_flag("--numeric-crosscheck", o.numeric, "add floating-point sampling");
    c->add_option("--fiber", o.fiber, "evaluate the member at t=<rat>");
    c->add_option("--rate", o.rates, "rate override name=value");
    c->add_option("--const", o.consts, "constant override name=value");
  };
  std::map<std::string, std::function<int(const Opts&)>> verbs{
      {"classify", cmd_classify},         {"invert", cmd_invert},
      {"canonicalize", cmd_canonicalize}, {"compose", cmd_compose},
      {"flow-list", cmd_flow_list},       {"flow-make", cmd_flow_make},
      {"flow-verify", cmd_flow_verify},   {"flow-analyze", cmd_flow_analyze},
      {"flow-conjugate", cmd_flow_conjugate}, {"suite", cmd_suite}};
  common(app.add_subcommand("classify", "classify maps (JSON map, JSON list, or 4 formulas)"), "map files", 1, -1);
  common(app.add_subcommand("invert", "certified inverse of a map"), "map file", 1, 1);
  common(app.add_subcommand("canonicalize", "A, N, B with map = A . N . B"), "map file", 1, 1);
  common(app.add_subcommand("compose", "f o g with the common factor removed"), "map files f g", 2, 2);
  common(app.add_subcommand("flow-list", "list catalog cases"), "", 0, 0);
  common(app.add_subcommand("flow-make", "instantiate a flow"), "case label or request JSON", 1, 1);
  common(app.add_subcommand("flow-verify", "group law, identity at 0, inverse"), "case label or request JSON", 1, 1);
  common(app.add_subcommand("flow-analyze", "fix/mobile elements, pencils, decomposition"),
         "case label or request JSON", 1, 1);
  common(app.add_subcommand("flow-conjugate", "decide linear conjugacy of two flows"),
         "two flows, or one appendix form against its normalized form", 1, 2);
  common(app.add_subcommand("suite", "verify the whole catalog"), "", 0, 0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  if (const char* env = std::getenv("CREMONA3_SEED")) {
    try {
      o.seed = (unsigned)std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "CREMONA3_SEED is not an integer\n";
      return kInput;
    }
  }
  std::string verb = app.get_subcommands().front()->get_name();
  try {
    return verbs.at(verb)(o);
  } catch (const AmbiguousH& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternal;
  } catch (const NoRationalNormalForm& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternal;
  } catch (const NotBidegree22& e) {
    std::cout << "NotBidegree22: " << e.what() << "\n";
    return kOk;
  } catch (const DegenerateFiber& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {  // JSON, constraint, unknown family
    std::cerr << "input: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternal;
  }
}
