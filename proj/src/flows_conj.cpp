#include <algorithm>

#include "cremona3/flows.hpp"

namespace cr3 {

namespace {

Poly remap(const Poly& p, const Universe& from, Universe& to) {
  std::vector<Poly::Term> out;
  for (const auto& [m, c] : p.terms()) {
    Mono n;
    for (int i = 0; i < kX; ++i) n[i] = m[i];
    for (int v = kX; v < kX + from.size(); ++v)
      if (m[v]) n[to.add(from.sym(v))] = m[v];
    out.emplace_back(n, c);
  }
  return Poly::from_terms(std::move(out));
}

bool verify_witness(const Mat& A, const Tuple4& f1, const Tuple4& f2) {
  if (det(A).is_zero()) return false;
  return cross_minors_zero(apply_left(A, f2), apply_right(f1, A));
}

Mat swap12() {
  Mat s = Mat::identity(4);
  s(1, 1) = s(2, 2) = 0;
  s(1, 2) = s(2, 1) = 1;
  return s;
}

// A = K with row r unknown; needs x_r only in f1_r, linearly
std::optional<Mat> row_solve(const Tuple4& f1, const Tuple4& f2, int r, const Mat& K) {
  for (int i = 0; i < 4; ++i) {
    int d = f1[i].max_exp(r);
    if ((i != r && d > 0) || d > 1) return std::nullopt;
  }
  Tuple4 Kx = linear_tuple(K);
  Tuple4 Kf2 = apply_left(K, f2);
  for (int i = 0; i < 4; ++i)
    if (i != r && f1[i].subst_x(Kx) != Kf2[i]) return std::nullopt;
  Poly L, R;
  for (const auto& [m, c] : f1[r].terms()) {
    if (m[r]) {
      Mono n = m;
      n[r] = 0;
      L += Poly::monomial(n, c);
    } else {
      R += Poly::monomial(m, c);
    }
  }
  Poly LK = L.subst_x(Kx), RK = R.subst_x(Kx);
  // sum_j mu_j (f2_j - x_j LK) = RK
  std::map<Mono, std::pair<Vec, Rat>> eq;
  auto touch = [&](const Mono& m) -> std::pair<Vec, Rat>& {
    auto& e = eq[m];
    if (e.first.empty()) e.first.assign(4, Rat(0));
    return e;
  };
  for (int j = 0; j < 4; ++j) {
    Poly g = f2[j] - Poly::x(j) * LK;
    for (const auto& [m, c] : g.terms()) touch(m).first[j] += c;
  }
  for (const auto& [m, c] : RK.terms()) touch(m).second += c;
  Mat M((int)eq.size(), 4);
  Vec b;
  int row = 0;
  for (const auto& [m, e] : eq) {
    for (int j = 0; j < 4; ++j) M(row, j) = e.first[j];
    b.push_back(e.second);
    ++row;
  }
  auto mu = solve(M, b);
  if (!mu) return std::nullopt;
  Mat A = K;
  for (int j = 0; j < 4; ++j) A(r, j) = (*mu)[j];
  if (det(A).is_zero()) return std::nullopt;
  return A;
}

// positive n-th root when it is rational (odd n keeps the sign)
std::optional<Rat> rat_root(const Rat& q, int n) {
  if (n == 1) return q;
  if (q.sign() < 0 && n % 2 == 0) return std::nullopt;
  mpz_class num = abs(q.num()), den = q.den(), rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n) || !mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n))
    return std::nullopt;
  if (q.sign() < 0) rn = -rn;
  return Rat(mpq_class(rn, rd));
}

// A = diag(d0, d1, d2, 1), from d_i f2_i[m] = f1_i[m] d^m term by term.
// Each term gives d^e = lambda; eliminate on the exponents, multiplicatively on lambda.
// order picks which unknowns pivot first, so which ones stay free.
std::optional<Mat> diagonal_solve(const Tuple4& f1, const Tuple4& f2, std::array<int, 3> order) {
  struct Eq {
    std::array<int, 3> e;  // d3 = 1
    Rat lambda;
  };
  std::vector<Eq> eqs;
  for (int i = 0; i < 4; ++i) {
    std::map<Mono, Poly> a, b;
    for (auto& [m, c] : f1[i].x_split()) a[m] = c;
    for (auto& [m, c] : f2[i].x_split()) b[m] = c;
    if (a.size() != b.size()) return std::nullopt;
    for (auto& [m, p] : b) {
      if (!a.count(m)) return std::nullopt;
      const Poly& q = a[m];
      Rat lam = q.lead().second / p.lead().second;
      if (q != p.scale(lam)) return std::nullopt;
      Eq e;
      for (int k = 0; k < 3; ++k) e.e[k] = (k == i) - m[k];
      e.lambda = lam;
      eqs.push_back(e);
    }
  }
  std::array<int, 3> pivot_row{-1, -1, -1};
  size_t r = 0;
  for (int c : order) {
    if (r == eqs.size()) break;
    size_t best = eqs.size();
    for (size_t j = r; j < eqs.size(); ++j)
      if (eqs[j].e[c] && (best == eqs.size() || std::abs(eqs[j].e[c]) < std::abs(eqs[best].e[c]))) best = j;
    if (best == eqs.size()) continue;
    std::swap(eqs[r], eqs[best]);
    Eq& p = eqs[r];
    if (p.e[c] < 0) {
      for (int& x : p.e) x = -x;
      p.lambda = p.lambda.inv();
    }
    for (size_t j = 0; j < eqs.size(); ++j) {
      if (j == r || !eqs[j].e[c]) continue;
      Eq& q = eqs[j];
      int pc = p.e[c], qc = q.e[c];
      for (int k = 0; k < 3; ++k) q.e[k] = q.e[k] * pc - p.e[k] * qc;
      q.lambda = q.lambda.pow(pc) / p.lambda.pow(qc);
      if (mpz_sizeinbase(q.lambda.num().get_mpz_t(), 2) > 4096) return std::nullopt;
    }
    pivot_row[c] = (int)r++;
  }
  for (size_t j = r; j < eqs.size(); ++j)
    if (eqs[j].lambda != Rat(1)) return std::nullopt;
  std::array<Rat, 3> d{Rat(1), Rat(1), Rat(1)};
  for (int c = 0; c < 3; ++c) {
    if (pivot_row[c] < 0) continue;  // free scale
    const Eq& q = eqs[pivot_row[c]];
    Rat rest = q.lambda;
    auto root = rat_root(rest, q.e[c]);
    if (!root) return std::nullopt;
    d[c] = *root;
  }
  Mat A = Mat::identity(4);
  for (int k = 0; k < 3; ++k) A(k, k) = d[k];
  return A;
}

// x_i -> x_i + k_i x3 (i = 1, 2) taking the a, b terms of f2 to those of f1
std::optional<Mat> translation_II20(const SymbolicFlow& g1, const SymbolicFlow& g2) {
  auto get = [](const SymbolicFlow& f, const std::string& n) {
    auto it = f.params.constants.find(n);
    return it == f.params.constants.end() ? Rat(0) : it->second;
  };
  Rat A1 = get(g1, "A"), B1 = get(g1, "B"), C1 = get(g1, "C");
  Rat A2 = get(g2, "A"), B2 = get(g2, "B"), C2 = get(g2, "C");
  Rat lam;
  if (!A2.is_zero()) lam = A1 / A2;
  else if (!B2.is_zero()) lam = B1 / B2;
  else if (!C2.is_zero()) lam = C1 / C2;
  else return std::nullopt;
  Mat M = Mat::from_rows({{A1, B1}, {B1, C1}});
  auto Mi = inverse(M);
  if (!Mi) return std::nullopt;
  Vec rhs{lam * get(g2, "a") - get(g1, "a"), lam * get(g2, "b") - get(g1, "b")};
  Vec k = Mi->apply(rhs);
  Mat K = Mat::identity(4);
  K(1, 3) = k[0] / 2;
  K(2, 3) = k[1] / 2;
  return K;
}

// partner constants for an x1-row variant: A = I with row 1 (mu0, 1, mu2, mu3),
// the partner's constants entering linearly
std::optional<std::map<std::string, Rat>> fit_row1_partner(const SymbolicFlow& var, const CatalogEntry& n,
                                                            const std::map<std::string, Rat>& rates) {
  SymbolicFlow g = instantiate(n, FlowParams{rates, {}});
  Universe U = g.U;
  Tuple4 f1;
  for (int i = 0; i < 4; ++i) f1[i] = remap(var.comps[i], var.U, U);
  for (int i = 0; i < 4; ++i)
    if ((i != 1 && f1[i].max_exp(1) > 0) || f1[i].max_exp(1) > 1) return std::nullopt;
  for (int i = 0; i < 4; ++i)
    if (i != 1 && f1[i] != g.comps[i]) return std::nullopt;
  Poly L, R;
  for (const auto& [m, c] : f1[1].terms()) {
    if (m[1]) {
      Mono k = m;
      k[1] = 0;
      L += Poly::monomial(k, c);
    } else {
      R += Poly::monomial(m, c);
    }
  }
  std::vector<int> cv;
  for (const auto& c : g.symbolic) cv.push_back(U.var(c));
  std::vector<Poly> cols;
  for (int j : {0, 2, 3}) cols.push_back(g.comps[j] - Poly::x(j) * L);
  std::vector<Poly> pk(cv.size());
  Poly rhs = R + Poly::x(1) * L;
  for (const auto& [m, c] : g.comps[1].terms()) {
    int hit = -1, deg = 0;
    for (size_t k = 0; k < cv.size(); ++k)
      if (m[cv[k]]) hit = (int)k, deg += m[cv[k]];
    if (deg > 1) return std::nullopt;
    if (hit < 0) {
      rhs -= Poly::monomial(m, c);
    } else {
      Mono k = m;
      k[cv[hit]] = 0;
      pk[hit] += Poly::monomial(k, c);
    }
  }
  for (auto& p : pk) cols.push_back(p);
  std::map<Mono, std::pair<Vec, Rat>> eq;
  auto touch = [&](const Mono& m) -> std::pair<Vec, Rat>& {
    auto& e = eq[m];
    if (e.first.empty()) e.first.assign(cols.size(), Rat(0));
    return e;
  };
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, c] : cols[j].terms()) touch(m).first[j] += c;
  for (const auto& [m, c] : rhs.terms()) touch(m).second += c;
  Mat M((int)eq.size(), (int)cols.size());
  Vec b;
  int row = 0;
  for (const auto& [m, e] : eq) {
    for (size_t j = 0; j < cols.size(); ++j) M(row, (int)j) = e.first[j];
    b.push_back(e.second);
    ++row;
  }
  auto sol = solve(M, b);
  if (!sol) return std::nullopt;
  std::map<std::string, Rat> out;
  for (size_t k = 0; k < cv.size(); ++k) out[g.symbolic[k]] = (*sol)[3 + k];
  return out;
}

std::string base_of(const SymbolicFlow& f) { return f.entry->label; }

PRVType generic_type(const SymbolicFlow& f) {
  for (int k = 0; k < 10; ++k) {
    auto [t0, g] = sample_fiber(f, k);
    try {
      auto r = classify(evaluate_member(f, t0, g));
      if (r.type != PRVType::Lin) return r.type;
    } catch (const DegenerateFiber&) {
    }
  }
  return PRVType::Lin;
}

}  // namespace

std::pair<const CatalogEntry*, FlowParams> normalized_partner(const CatalogEntry& v, const FlowParams& p) {
  FlowParams full = p;
  int i = 0;
  for (const auto& c : v.consts) {
    if (!full.constants.count(c)) full.constants[c] = generic_constant(i);
    ++i;
  }
  if (!v.appendix) return {&v, full};
  FlowParams q;
  q.rates = full.rates;
  if (v.label == "NFtangllosc.II.20") {
    // keep the variant's shape: the translation removing a, b shifts c
    Rat A = full.constants["A"], B = full.constants["B"], C = full.constants["C"];
    Rat a = full.constants["a"], b = full.constants["b"], c = full.constants["c"];
    Rat det = A * C - B * B;
    Rat k1 = -(C * a - B * b) / (det * 2), k2 = -(A * b - B * a) / (det * 2);
    q.constants = {{"A", A}, {"B", B}, {"C", C}, {"a", 0}, {"b", 0}, {"c", c + (a * k1 + b * k2) / 2}};
    return {&v, q};
  }
  const CatalogEntry& n = find_entry(v.label, false);
  if (v.theorem == "NFtangox1") {
    auto fit = fit_row1_partner(instantiate_numeric(v, full), n, full.rates);
    if (fit) {
      q.constants = *fit;
      return {&n, q};
    }
  }
  for (const auto& c : n.consts)
    if (full.constants.count(c) &&
        std::find(v.zeroed.begin(), v.zeroed.end(), c) == v.zeroed.end())
      q.constants[c] = full.constants[c];
  return {&n, q};
}

ConjugacyResult are_conjugate(const SymbolicFlow& f1, const SymbolicFlow& f2) {
  ConjugacyResult res;
  using K = ConjugacyResult::Kind;
  const auto &e1 = *f1.entry, &e2 = *f2.entry;
  if (e1.theorem != e2.theorem) {
    PRVType t1 = generic_type(f1), t2 = generic_type(f2);
    if (t1 != t2) {
      res.kind = K::No;
      res.reason = std::string("generic members have different types: ") + display_name(t1) + " vs " + display_name(t2);
    } else {
      res.kind = K::OutsideCriteria;
      res.reason = "flows from different lists with the same generic type";
    }
    return res;
  }
  if (base_of(f1) != base_of(f2)) {
    res.kind = e1.theorem == "Example" ? K::OutsideCriteria : K::No;
    res.reason = "different cases " + base_of(f1) + " and " + base_of(f2);
    if (e1.theorem == "Example") {
      PRVType t1 = generic_type(f1), t2 = generic_type(f2);
      if (t1 != t2) {
        res.kind = K::No;
        res.reason += std::string(", generic types ") + display_name(t1) + " vs " + display_name(t2);
      }
    }
    return res;
  }
  bool swapped_rates = false;
  if (f1.params.rates != f2.params.rates) {
    auto r2 = f2.params.rates;
    if (r2.count("gamma1") && r2.count("gamma2")) std::swap(r2["gamma1"], r2["gamma2"]);
    if (e1.theorem == "NFgen" && f1.params.rates == r2) {
      swapped_rates = true;
    } else {
      res.kind = K::No;
      for (const auto& [k, v] : f1.params.rates)
        if (f2.params.rates.count(k) && f2.params.rates.at(k) != v) {
          res.reason = "rate mismatch: " + k + " = " + v.str() + " vs " + f2.params.rates.at(k).str();
          break;
        }
      return res;
    }
  }

  // numeric copies in one universe
  SymbolicFlow g1 = instantiate_numeric(e1, FlowParams{f1.params.rates, f1.params.constants});
  SymbolicFlow g2 = instantiate_numeric(e2, FlowParams{f2.params.rates, f2.params.constants});
  Universe U = g1.U;
  Tuple4 a = g1.comps, b;
  for (int i = 0; i < 4; ++i) b[i] = remap(g2.comps[i], g2.U, U);
  if (swapped_rates) {
    // the swapped generators must coincide with the other flow's
    std::map<std::string, std::string> ren{{"gamma1", "gamma2"}, {"gamma2", "gamma1"}};
    Universe U2;
    for (int i = 0; i < 4; ++i) {
      std::vector<Poly::Term> terms;
      for (const auto& [m, c] : g2.comps[i].terms()) {
        Mono n;
        for (int k = 0; k < kX; ++k) n[k] = m[k];
        for (int v = kX; v < kX + g2.U.size(); ++v) {
          if (!m[v]) continue;
          Symbol s = g2.U.sym(v);
          if (s.kind == SymKind::Gen && ren.count(s.label)) {
            s.label = ren[s.label];
            s.name = Universe::gen_name(s.label, 0);
          }
          n[U.add(s)] = m[v];
        }
        terms.emplace_back(n, c);
      }
      b[i] = Poly::from_terms(std::move(terms));
    }
  }

  std::vector<std::pair<Mat, std::string>> cand;
  cand.emplace_back(Mat::identity(4), "identity");
  const std::string& th = e1.theorem;
  const std::string& lab = e1.label;
  if (th == "NFgen") cand.emplace_back(swap12(), "x1 <-> x2 switch");
  if (th == "NFtangox1")
    if (auto A = row_solve(a, b, 1, Mat::identity(4))) cand.emplace_back(*A, "x1 row solve");
  if (th == "NFtangllosc" && lab.rfind("NFtangllosc.II.", 0) == 0) {
    std::vector<std::pair<Mat, std::string>> bases{{Mat::identity(4), "x0 row solve"}};
    if (lab == "NFtangllosc.II.11" || lab == "NFtangllosc.II.14")
      bases.emplace_back(swap12(), "x0 row solve with x1 <-> x2 switch");
    if (lab == "NFtangllosc.II.20")
      if (auto T = translation_II20(g1, g2)) bases.emplace_back(*T, "translation and x0 row solve");
    for (const auto& [Kb, why] : bases)
      if (auto A = row_solve(a, b, 0, Kb)) cand.emplace_back(*A, why);
  }
  if (th == "NFtangllosc" && lab.rfind("NFtangllosc.I.", 0) == 0)
    for (std::array<int, 3> o : {std::array{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}})
      if (auto A = diagonal_solve(a, b, o)) cand.emplace_back(*A, "diagonal scaling");

  for (const auto& [A, why] : cand)
    if (verify_witness(A, a, b)) {
      res.kind = K::Yes;
      res.witness = A;
      res.reason = why;
      return res;
    }
  bool variant = e1.appendix || e2.appendix;
  if (variant || th == "Example") {
    res.kind = K::OutsideCriteria;
    res.reason = "no witness found and no stated criterion covers this pair";
    return res;
  }
  res.kind = K::No;
  if (th == "NFgen") res.reason = "distinct flows of the list are conjugate only through the x1 <-> x2 switch in case iv";
  else if (th == "NFtangox1") res.reason = "q_t of one flow is not a multiple of the other's";
  else res.reason = "parameter vectors are not proportional";
  return res;
}

}  // namespace cr3
