#include <algorithm>
#include <random>
#include <sstream>

#include "cremona3/expr.hpp"
#include "cremona3/flows.hpp"

namespace cr3 {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Fix: return "fix";
    case Verdict::Mobile: return "mobile";
    case Verdict::Unknown: return "undetermined";
    case Verdict::Absent: return "absent";
  }
  return "?";
}

char conclusions_row(PRVType t) {
  switch (t) {
    case PRVType::GenP: return 'a';
    case PRVType::TangO:
    case PRVType::TangX: return 'b';
    case PRVType::TangP: return 'c';
    case PRVType::Osc2X: return 'd';
    default: return '-';
  }
}

namespace {

std::vector<int> coeff_vars(const Universe& U) {
  std::vector<int> v;
  for (int i = 0; i < U.size(); ++i) v.push_back(kX + i);
  return v;
}

// all r_i proportional to one form; returns the scalars (coefficients at a common monomial)
std::optional<std::vector<Poly>> common_multiple(const std::vector<Poly>& r) {
  int k = -1;
  for (size_t i = 0; i < r.size(); ++i)
    if (!r[i].is_zero()) {
      k = (int)i;
      break;
    }
  if (k < 0) return std::nullopt;
  Mono m = r[k].lead().first.x_part();
  Poly ck = r[k].x_coeff(m);
  std::vector<Poly> sc;
  for (const auto& ri : r) {
    Poly ci = ri.x_coeff(m);
    if (!(ri * ck - ci * r[k]).is_zero()) return std::nullopt;
    sc.push_back(ci);
  }
  return sc;
}

// r_i all multiples of the rational form c
bool multiples_of(const std::vector<Poly>& r, const Poly& c) {
  Mono m = c.lead().first;
  const Rat& cm = c.lead().second;
  for (const auto& ri : r)
    if (!(ri.scale(cm) - ri.x_coeff(m) * c).is_zero()) return false;
  return true;
}

Poly det_poly(const std::vector<std::vector<Poly>>& M) {
  size_t n = M.size();
  if (n == 1) return M[0][0];
  if (n == 2) return M[0][0] * M[1][1] - M[0][1] * M[1][0];
  Poly d;
  for (size_t c = 0; c < n; ++c) {
    if (M[0][c].is_zero()) continue;
    std::vector<std::vector<Poly>> sub;
    for (size_t i = 1; i < n; ++i) {
      std::vector<Poly> row;
      for (size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(M[i][j]);
      sub.push_back(row);
    }
    Poly term = M[0][c] * det_poly(sub);
    d = (c % 2) ? d - term : d + term;
  }
  return d;
}

// strip rational content, common monomials and common polynomial factors found among the entries
std::vector<Poly> simplify_vector(std::vector<Poly> v) {
  mpz_class g = 0, l = 1;
  Mono low;
  bool first = true;
  for (const auto& p : v) {
    if (p.is_zero()) continue;
    Rat c = p.content();
    mpz_class n = c.num(), d = c.den();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    for (const auto& [m, _] : p.terms()) {
      if (first) {
        low = m.coeff_part();
        first = false;
      }
      for (int i = kX; i < kVars; ++i) low[i] = std::min(low[i], m[i]);
    }
  }
  if (first) return v;
  Rat s(mpq_class(l, g));
  Mono inv;
  for (int i = kX; i < kVars; ++i) inv[i] = (int8_t)-low[i];
  for (auto& p : v) p = p.scale(s).mul_mono(inv, Rat(1));
  for (bool again = true; again;) {
    again = false;
    std::vector<Poly> cand;
    for (const auto& p : v)
      if (!p.is_zero() && !p.is_constant()) cand.push_back(p);
    std::sort(cand.begin(), cand.end(), [](const Poly& a, const Poly& b) { return a.size() < b.size(); });
    for (const auto& c : cand) {
      std::vector<Poly> q;
      bool ok = true;
      for (const auto& p : v) {
        auto d = p.divide_exact(c);
        if (!d) {
          ok = false;
          break;
        }
        q.push_back(*d);
      }
      if (ok) {
        v = q;
        again = true;
        break;
      }
    }
  }
  // leading entry positive
  for (const auto& p : v)
    if (!p.is_zero()) {
      if (p.lead().second.sign() < 0)
        for (auto& x : v) x = -x;
      break;
    }
  return v;
}

// null vectors over the coefficient ring of a polynomial matrix, via the rank at a random point
std::vector<std::vector<Poly>> poly_nullspace(const std::vector<std::vector<Poly>>& rows, int ncols,
                                              const Universe& U, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-97, 97), den(1, 13);
  std::vector<std::pair<int, Rat>> pt;
  for (int v : coeff_vars(U)) {
    Rat r(num(rng), den(rng));
    if (r.is_zero()) r = Rat(101);
    pt.emplace_back(v, r);
  }
  auto at = [&](const Poly& p) {
    Poly e = p.eval(pt);
    return e.is_zero() ? Rat(0) : e.constant_term();
  };
  // greedy independent rows at the random point
  std::vector<int> sel;
  Mat acc(0, ncols);
  int rk = 0;
  for (size_t i = 0; i < rows.size() && rk < ncols; ++i) {
    Mat trial(acc.r + 1, ncols);
    std::copy(acc.a.begin(), acc.a.end(), trial.a.begin());
    for (int j = 0; j < ncols; ++j) trial(acc.r, j) = at(rows[i][j]);
    int nr = rank(trial);
    if (nr > rk) {
      acc = trial;
      rk = nr;
      sel.push_back((int)i);
    }
  }
  if (rk == ncols) return {};
  Mat ev = acc;
  auto pc = rref(ev);  // pivot columns
  int r = (int)sel.size();
  std::vector<std::vector<Poly>> A;
  for (int i : sel) A.push_back(rows[i]);
  // fraction-free Gauss-Jordan
  Poly prev(1);
  for (int k = 0; k < r; ++k) {
    int col = pc[k];
    int p = -1;
    for (int i = k; i < r; ++i)
      if (!A[i][col].is_zero() && (p < 0 || A[i][col].size() < A[p][col].size())) p = i;
    if (p < 0) throw std::runtime_error("poly_nullspace: lost pivot");
    std::swap(A[k], A[p]);
    for (int i = 0; i < r; ++i) {
      if (i == k) continue;
      Poly a = A[i][col];
      for (int j = 0; j < ncols; ++j) {
        Poly x = A[k][col] * A[i][j] - a * A[k][j];
        if (prev.is_constant()) {
          A[i][j] = x.scale(prev.constant_term().inv());
        } else {
          auto q = x.divide_exact(prev);
          if (!q) throw std::runtime_error("poly_nullspace: inexact elimination");
          A[i][j] = *q;
        }
      }
    }
    prev = A[k][col];
  }
  std::vector<std::vector<Poly>> out;
  for (int fc = 0; fc < ncols; ++fc) {
    if (std::find(pc.begin(), pc.end(), fc) != pc.end()) continue;
    std::vector<Poly> v(ncols);
    v[fc] = prev;
    for (int i = 0; i < r; ++i) v[pc[i]] = -A[i][fc];
    out.push_back(simplify_vector(v));
  }
  return out;
}

std::string line_text(const Poly& a, const Poly& b) {
  return "(" + a.str() + " = " + b.str() + " = 0)";
}

}  // namespace

Preservation solve_preservation(const std::vector<Poly>& f, const std::vector<Poly>& basis, const Universe& U,
                                unsigned seed) {
  Preservation pr;
  pr.basis = basis;
  int k = (int)f.size(), n = (int)basis.size(), N = k * n;
  std::vector<std::vector<Poly>> rows;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      // f_i m_j - f_j m_i
      std::map<Mono, std::vector<Poly>> eq;
      auto add = [&](const Poly& prod, int unknown, bool neg) {
        for (auto& [xm, c] : prod.x_split()) {
          auto& row = eq[xm];
          if (row.empty()) row.resize(N);
          row[unknown] = neg ? row[unknown] - c : row[unknown] + c;
        }
      };
      for (int l = 0; l < n; ++l) {
        add(f[i] * basis[l], j * n + l, false);
        add(f[j] * basis[l], i * n + l, true);
      }
      for (auto& [_, row] : eq) rows.push_back(row);
    }
  auto ns = poly_nullspace(rows, N, U, seed);
  if (ns.empty()) return pr;
  std::vector<std::vector<Poly>> cands = ns;
  if (ns.size() > 1) {
    std::vector<Poly> sum(N);
    for (const auto& v : ns)
      for (int i = 0; i < N; ++i) sum[i] += v[i];
    cands.push_back(sum);
  }
  for (const auto& v : cands) {
    std::vector<std::vector<Poly>> M(k, std::vector<Poly>(n));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) M[i][j] = v[i * n + j];
    if (k == n && det_poly(M).is_zero()) continue;
    if (k != n) {
      // need two non-proportional cofactors
      bool indep = false;
      for (int a = 0; a < n && !indep; ++a)
        for (int b = a + 1; b < n && !indep; ++b) indep = !(M[0][a] * M[1][b] - M[0][b] * M[1][a]).is_zero();
      if (!indep) continue;
    }
    std::vector<Poly> m(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) m[i] += M[i][j] * basis[j];
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      if (m[i].is_zero()) ok = false;
      for (int j = i + 1; j < k && ok; ++j) ok = (f[i] * m[j] - f[j] * m[i]).is_zero();
    }
    if (!ok) continue;
    pr.preserved = true;
    pr.M = M;
    return pr;
  }
  return pr;
}

Preservation check_pencil_preservation(const SymbolicFlow& f, const Poly& l1, const Poly& l2) {
  Mat L = Mat::from_rows({lin_coeffs(l1), lin_coeffs(l2)});
  if (rank(L) < 2) throw std::invalid_argument("pencil: dependent linear forms");
  std::vector<Poly> fs{compose_form(l1, f.comps), compose_form(l2, f.comps)};
  return solve_preservation(fs, {l1, l2}, f.U);
}

Preservation check_star_preservation(const SymbolicFlow& f, const Vec& P) {
  auto ns = nullspace(Mat::from_rows({P}));
  std::vector<Poly> basis, fs;
  for (auto& v : ns) {
    basis.push_back(lin_form(primitive(v)));
    fs.push_back(compose_form(basis.back(), f.comps));
  }
  return solve_preservation(fs, basis, f.U);
}

bool contracts_onto(const SymbolicFlow& f, const Vec& p) {
  auto ns = nullspace(Mat::from_rows({p}));
  std::vector<Poly> fs;
  for (auto& v : ns) fs.push_back(compose_form(lin_form(primitive(v)), f.comps));
  std::vector<Poly> all{Poly::x(0), Poly::x(1), Poly::x(2), Poly::x(3)};
  return solve_preservation(fs, all, f.U).preserved;
}

bool polynomial_flow(const SymbolicFlow& f, const Poly& h) {
  Poly g = compose_form(h, f.comps);
  auto q = g.divide_exact(h * h);
  return q && q->x_free() && !q->is_zero();
}

namespace {

struct Sample {
  Rat t0;
  std::map<std::string, Rat> gens;
  ClassificationReport rep;
};

std::string vec_text(const Vec& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + "]";
}

// support line of a rank-one conic in the plane h
std::optional<Poly> conic_line(const ClassificationReport& r) {
  if (r.cI_rank != 1) return std::nullopt;
  auto fr = extract_linear_factors(r.cI);
  for (const auto& [l, mu] : fr.linear_factors)
    if (mu == 2) return l;
  return std::nullopt;
}

bool same_line(const Poly& a1, const Poly& b1, const Poly& a2, const Poly& b2) {
  Mat m = Mat::from_rows({lin_coeffs(a1), lin_coeffs(b1), lin_coeffs(a2), lin_coeffs(b2)});
  return rank(m) == 2;
}

bool same_CI(const ClassificationReport& a, const ClassificationReport& b) {
  if (a.cI_rank != b.cI_rank) return false;
  auto la = conic_line(a), lb = conic_line(b);
  if (la && lb) return same_line(a.H, *la, b.H, *lb);
  return a.H == b.H && a.cI == b.cI;
}

}  // namespace

ElementAnalysis analyze_elements(const SymbolicFlow& f, int samples) {
  ElementAnalysis ea;
  std::vector<Sample> ss;
  for (int k = 0; k < 40 && (int)ss.size() < samples; ++k) {
    auto [t0, g] = sample_fiber(f, k);
    try {
      QuadMap m = evaluate_member(f, t0, g);
      auto rep = classify(m);
      ea.sample_types.push_back(rep.type);
      if (rep.type != PRVType::Lin) ss.push_back({t0, g, rep});
    } catch (const DegenerateFiber&) {
    } catch (const NotBidegree22&) {
    }
  }
  if (ss.empty()) {
    ea.mismatch = "no nonlinear fiber found";
    return ea;
  }
  // majority type
  std::map<PRVType, int> cnt;
  for (const auto& s : ss) cnt[s.rep.type]++;
  ea.type = std::max_element(cnt.begin(), cnt.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
  std::vector<const ClassificationReport*> rs;
  for (const auto& s : ss)
    if (s.rep.type == ea.type) rs.push_back(&s.rep);
  const auto& r0 = *rs[0];
  ea.row = conclusions_row(ea.type);
  Universe U = f.U;

  auto differs = [&](auto pred) {
    for (size_t i = 1; i < rs.size(); ++i)
      if (!pred(*rs[0], *rs[i])) return true;
    return false;
  };
  auto settle = [&](Locus& L, bool fix_proved, bool mobile_seen) {
    if (fix_proved) L.verdict = Verdict::Fix, L.certified = true;
    else if (mobile_seen) L.verdict = Verdict::Mobile, L.certified = true;
    else L.verdict = Verdict::Unknown;
  };

  // H
  {
    std::vector<Poly> r;
    for (const auto& c : f.comps) r.push_back(restrict_to_plane(c, r0.H));
    bool fix = common_multiple(r).has_value();
    ea.H.value = "(" + r0.H.str() + " = 0)";
    ea.H_form = r0.H;
    settle(ea.H, fix, differs([](auto& a, auto& b) { return a.H == b.H; }));
  }
  // H_I through the inverse flow
  {
    Tuple4 inv = inverse_flow(f, U);
    std::vector<Poly> r;
    for (const auto& c : inv) r.push_back(restrict_to_plane(c, r0.H_I));
    ea.H_I.value = "(" + r0.H_I.str() + " = 0)";
    settle(ea.H_I, common_multiple(r).has_value(), differs([](auto& a, auto& b) { return a.H_I == b.H_I; }));
  }
  // P_I_t = P_{-t}: fix iff some plane is contracted onto the sampled point for every t
  ea.P_I.value = vec_text(r0.P_I);
  settle(ea.P_I, contracts_onto(f, r0.P_I), differs([](auto& a, auto& b) { return a.P_I == b.P_I; }));
  // C_I
  {
    bool fix = false;
    if (auto l = conic_line(r0)) {
      ea.C_I.value = "line " + line_text(r0.H, *l);
      auto ns = nullspace(Mat::from_rows({lin_coeffs(r0.H), lin_coeffs(*l)}));
      Tuple4 par;
      for (int k = 0; k < 4; ++k) par[k] = Poly::x(0).scale(ns[0][k]) + Poly::x(1).scale(ns[1][k]);
      fix = true;
      for (const auto& c : f.comps) fix = fix && c.subst_x(par).is_zero();
    } else {
      ea.C_I.value = "conic (" + r0.H.str() + " = " + r0.cI.str() + " = 0), rank " + std::to_string(r0.cI_rank);
      std::vector<Poly> r;
      for (const auto& c : f.comps) r.push_back(restrict_to_plane(c, r0.H));
      fix = multiples_of(r, r0.cI);
    }
    settle(ea.C_I, fix, differs(same_CI));
  }
  // S or Pi
  if (r0.S_or_Pi) {
    const Poly& s = *r0.S_or_Pi;
    ea.S.value = "(" + s.str() + " = 0)";
    Poly jac = jacobian_det(f.comps);
    bool fix = jac.divide_exact(s).has_value();
    settle(ea.S, fix, differs([](auto& a, auto& b) { return a.S_or_Pi == b.S_or_Pi; }));
  }

  // pencil lines
  std::vector<std::pair<Poly, Poly>> cand;
  auto lx = [](int i) { return Poly::x(i); };
  if (!f.entry->pencil[0].empty())
    cand.emplace_back(parse_poly(f.entry->pencil[0]), parse_poly(f.entry->pencil[1]));
  if (auto l = conic_line(r0); l && ea.C_I.verdict == Verdict::Fix) cand.emplace_back(r0.H, *l);
  cand.emplace_back(lx(1), lx(3));
  cand.emplace_back(lx(2), lx(3));
  if (r0.S_or_Pi && ea.S.verdict == Verdict::Fix && (ea.type == PRVType::TangO || ea.type == PRVType::TangX))
    cand.emplace_back(*r0.S_or_Pi, r0.H);
  std::vector<std::pair<Poly, Poly>> seen;
  for (const auto& [a, b] : cand) {
    if (rank(Mat::from_rows({lin_coeffs(a), lin_coeffs(b)})) < 2) continue;
    bool dup = false;
    for (const auto& [c, d] : seen) dup = dup || same_line(a, b, c, d);
    if (dup) continue;
    seen.emplace_back(a, b);
    if (check_pencil_preservation(f, a, b).preserved) ea.pencil_lines.push_back(line_text(a, b));
  }

  // row check
  struct Want {
    const Locus* L;
    const char* name;
    Verdict v;  // Absent: either
  };
  std::vector<Want> want;
  switch (ea.row) {
    case 'a':
      want = {{&ea.P_I, "P_I", Verdict::Fix}, {&ea.S, "S", Verdict::Fix}, {&ea.C_I, "C_I", Verdict::Fix},
              {&ea.H, "H", Verdict::Mobile}};
      break;
    case 'b':
      want = {{&ea.P_I, "P_I", Verdict::Fix}, {&ea.S, "S", Verdict::Fix}, {&ea.H, "H", Verdict::Mobile},
              {&ea.C_I, "C_I", Verdict::Mobile}};
      break;
    case 'c': want = {{&ea.H, "H", Verdict::Fix}, {&ea.C_I, "C_I", Verdict::Fix}}; break;
    case 'd': want = {{&ea.H, "H", Verdict::Fix}, {&ea.P_I, "P_I", Verdict::Fix}}; break;
    default: ea.mismatch = "generic fiber type has no row";
  }
  ea.matches_row = ea.row != '-';
  for (const auto& w : want)
    if (w.L->verdict != w.v) {
      ea.matches_row = false;
      ea.mismatch += std::string(ea.mismatch.empty() ? "" : "; ") + w.name + " is " + verdict_name(w.L->verdict) +
                     ", expected " + verdict_name(w.v);
    }
  if (std::find(f.entry->closure.begin(), f.entry->closure.end(), ea.type) == f.entry->closure.end()) {
    ea.matches_row = false;
    ea.mismatch += std::string(ea.mismatch.empty() ? "" : "; ") + "type " + type_name(ea.type) + " outside closure";
  }
  return ea;
}

Decomposition decompose_generic(const SymbolicFlow& f, int points, int fibers, unsigned seed) {
  if (f.entry->theorem != "NFgen") throw std::invalid_argument("decompose_generic: " + f.label() + " is not in NFgen");
  Decomposition d;
  auto [t0, g0] = sample_fiber(f, 0);
  auto rep = classify(evaluate_member(f, t0, g0));
  if (rep.type != PRVType::GenP) throw std::runtime_error("decompose_generic: generic fiber is not gen(//)");
  d.P_I = primitive(rep.P_I);
  d.pencil = {parse_poly(f.entry->pencil[0]), parse_poly(f.entry->pencil[1])};
  auto star = check_star_preservation(f, d.P_I);
  auto pen = check_pencil_preservation(f, d.pencil[0], d.pencil[1]);
  if (!star.preserved || !pen.preserved) return d;
  d.eta = star.M;
  const auto& M = pen.M;
  d.chi = {{M[1][1], -M[1][0]}, {-M[0][1], M[0][0]}};

  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coord(-20, 20);
  auto evalM = [&](const std::vector<std::vector<Poly>>& m, const std::vector<std::pair<int, Rat>>& a) {
    Mat r((int)m.size(), (int)m[0].size());
    r.a.clear();
    for (const auto& row : m)
      for (const auto& p : row) {
        Poly e = p.eval(a);
        r.a.push_back(e.is_zero() ? Rat(0) : e.constant_term());
      }
    return r;
  };
  Mat Lstar = Mat::from_rows({lin_coeffs(star.basis[0]), lin_coeffs(star.basis[1]), lin_coeffs(star.basis[2])});
  for (int fb = 0; fb < fibers; ++fb) {
    auto [t, g] = sample_fiber(f, fb);
    QuadMap m = evaluate_member(f, t, g);
    std::vector<std::pair<int, Rat>> a{{f.tvar(), t}};
    for (const auto& [lab, v] : g) a.emplace_back(f.U.var(Universe::gen_name(lab, 0)), v);
    for (size_t i = 0; i < f.symbolic.size(); ++i) a.emplace_back(f.U.var(f.symbolic[i]), generic_constant((int)i));
    Mat E = evalM(star.M, a), X = evalM(M, a);
    int done = 0;
    for (int tries = 0; done < points && tries < 50 * points; ++tries) {
      Vec P{coord(rng), coord(rng), coord(rng), coord(rng)};
      Vec img = eval_tuple(m.comps, P);
      bool base = std::all_of(img.begin(), img.end(), [](const Rat& r) { return r.is_zero(); });
      Vec y = E.apply(Lstar.apply(P));
      Vec lp{eval_at(d.pencil[0], P), eval_at(d.pencil[1], P)};
      Vec r = X.apply(lp);
      bool yz = std::all_of(y.begin(), y.end(), [](const Rat& q) { return q.is_zero(); });
      if (base || yz || (r[0].is_zero() && r[1].is_zero())) {
        ++d.skipped;
        continue;
      }
      auto Z = solve(Lstar, y);
      // X = mu P_I + Z on the plane r1 l2 - r2 l1 ... r2 l1(X) - r1 l2(X) = 0
      Rat c = r[1] * eval_at(d.pencil[0], d.P_I) - r[0] * eval_at(d.pencil[1], d.P_I);
      Rat c0 = r[1] * eval_at(d.pencil[0], *Z) - r[0] * eval_at(d.pencil[1], *Z);
      if (c.is_zero()) {
        ++d.skipped;
        continue;
      }
      Rat mu = -c0 / c;
      Vec Xp(4);
      for (int k = 0; k < 4; ++k) Xp[k] = mu * d.P_I[k] + (*Z)[k];
      bool eq = true;
      for (int i = 0; i < 4 && eq; ++i)
        for (int j = i + 1; j < 4 && eq; ++j) eq = Xp[i] * img[j] == Xp[j] * img[i];
      ++d.checked;
      ++done;
      if (!eq) ++d.failed;
    }
  }
  d.ok = d.failed == 0 && d.checked >= points * fibers;
  return d;
}

}  // namespace cr3
