#include "cremona3/quadmap.hpp"

#include <map>

#include "cremona3/conic.hpp"
#include "cremona3/expr.hpp"

namespace cr3 {

// ---------------- type table ----------------

const char* type_name(PRVType t) {
  static const char* n[] = {"GenO", "GenX", "GenP", "TangO", "TangX", "TangP", "Osc2X", "Lin"};
  return n[(int)t];
}

const char* display_name(PRVType t) {
  static const char* n[] = {"gen(O)", "gen(x)", "gen(//)", "tang(O)", "tang(x)", "tang(//)", "osc2(x)", "lin"};
  return n[(int)t];
}

std::optional<PRVType> parse_type(const std::string& s) {
  for (int i = 0; i <= (int)PRVType::Lin; ++i)
    if (s == type_name((PRVType)i) || s == display_name((PRVType)i)) return (PRVType)i;
  return std::nullopt;
}

bool is_generic(PRVType t) { return t == PRVType::GenO || t == PRVType::GenX || t == PRVType::GenP; }

const char* gamma_description(PRVType t) {
  switch (t) {
    case PRVType::GenO: return "Quadrics containing a smooth conic C_I and a point P_I not in C_I";
    case PRVType::GenX: return "Quadrics containing a conic C_I of rank 2 and a point P_I not in C_I";
    case PRVType::GenP:
      return "Cones containing a line C_I and a point P_I not in C_I and tangents to a plane S_I along C_I";
    case PRVType::TangO:
      return "Quadrics containing a smooth conic C_I and tangents to a plane S at a point P_I in C_I";
    case PRVType::TangX:
      return "Quadrics containing a conic C_I of rank 2 and tangents to a plane S at a point P_I in C_I";
    case PRVType::TangP:
      return "Cones containing a line C_I, tangents to a plane H along C_I and osculating at a point P_I in C_I "
             "along a curve alpha tangent to H at P_I";
    case PRVType::Osc2X:
      return "Quadrics containing a conic C_I of rank 2, C_I = L1 u L2, and osculating at the point P_I = L1 n L2 "
             "along a curve alpha tangent to the plane H = L1 v L2 at P_I";
    case PRVType::Lin: return "Linear map times a common plane";
  }
  return "";
}

namespace {
Tuple4 T(const char* a, const char* b, const char* c, const char* d) {
  return {parse_poly(a), parse_poly(b), parse_poly(c), parse_poly(d)};
}
}  // namespace

Tuple4 normal_form(PRVType t) {
  switch (t) {
    case PRVType::GenO: return T("x0*x3", "x1*x3", "x2*x3", "x0^2-x1*x2");
    case PRVType::GenX: return T("x0*x3", "x1*x3", "x2*x3", "x1*x2");
    case PRVType::GenP: return T("x0*x3", "x1*x3", "x2*x3", "x2^2");
    case PRVType::TangO: return T("x0*x3", "x1*x3+x1*x2-x0^2", "x2*x3", "x3^2");
    case PRVType::TangX: return T("x0*x3", "x1*x3-x1*x2", "x2*x3", "x3^2");
    case PRVType::TangP: return T("x0*x3", "x1*x3-x2^2", "x2*x3", "x3^2");
    case PRVType::Osc2X: return T("x0*x3-x1*x2", "x1*x3", "x2*x3", "x3^2");
    case PRVType::Lin: return T("x0*x3", "x1*x3", "x2*x3", "x3^2");
  }
  return {};
}

Tuple4 table_inverse(PRVType t) {
  switch (t) {
    case PRVType::TangO: return T("x0*(x2+x3)", "x1*x3+x0^2", "x2^2+x2*x3", "x2*x3+x3^2");
    case PRVType::TangX: return T("x0*(x3-x2)", "x1*x3", "x2*x3-x2^2", "x3^2-x2*x3");
    case PRVType::TangP: return T("x0*x3", "x1*x3+x2^2", "x2*x3", "x3^2");
    case PRVType::Osc2X: return T("x0*x3+x1*x2", "x1*x3", "x2*x3", "x3^2");
    default: return normal_form(t);
  }
}

Poly table_jacobian(PRVType t) {
  switch (t) {
    case PRVType::GenO: return parse_poly("-2*x3^2*(x0^2-x1*x2)");
    case PRVType::GenX: return parse_poly("-2*x3^2*x1*x2");
    case PRVType::GenP: return parse_poly("-2*x3^2*x2^2");
    case PRVType::TangO: return parse_poly("2*x3^3*(x2+x3)");
    case PRVType::TangX: return parse_poly("2*x3^3*(x3-x2)");
    case PRVType::TangP: return parse_poly("2*x3^4");
    case PRVType::Osc2X: return parse_poly("2*x3^4");
    case PRVType::Lin: return parse_poly("4*x3^4");
  }
  return {};
}

Vec table_PI(PRVType t) {
  switch (t) {
    case PRVType::GenO:
    case PRVType::GenX:
    case PRVType::GenP: return {0, 0, 0, 1};
    case PRVType::TangO:
    case PRVType::TangX:
    case PRVType::TangP: return {0, 1, 0, 0};
    case PRVType::Osc2X: return {1, 0, 0, 0};
    default: return {};
  }
}

Poly table_HI(PRVType t) {
  switch (t) {
    case PRVType::TangO: return parse_poly("x2+x3");
    case PRVType::TangX: return parse_poly("x3-x2");
    default: return parse_poly("x3");
  }
}

// ---------------- helpers ----------------

namespace {

Mat rows_of(const std::vector<Vec>& r) { return Mat::from_rows(r); }

Vec scaled(const Vec& v, const Rat& c) {
  Vec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] * c;
  return w;
}

Vec add(const Vec& a, const Vec& b) {
  Vec w(a.size());
  for (size_t i = 0; i < a.size(); ++i) w[i] = a[i] + b[i];
  return w;
}

bool independent(const std::vector<Vec>& vs) { return rank(rows_of(vs)) == (int)vs.size(); }

// extend with unit vectors to a basis of Q^n, keeping the given vectors first
std::vector<Vec> complete_basis(std::vector<Vec> vs, int n) {
  for (int i = 0; i < n && (int)vs.size() < n; ++i) {
    Vec e(n);
    e[i] = 1;
    vs.push_back(e);
    if (!independent(vs)) vs.pop_back();
  }
  return vs;
}

Rat coeff2(const Poly& q, int i, int j) {
  Mono m = Mono::var(i) * Mono::var(j);
  for (const auto& [mo, c] : q.terms())
    if (mo == m) return c;
  return Rat(0);
}

// q written in the coordinates y = Y x (so q(x) = qy(Y x))
Poly in_frame(const Poly& q, const Mat& Y) {
  auto inv = inverse(Y);
  if (!inv) throw NotBidegree22("singular coordinate frame");
  return subst_linear(q, *inv);
}

Tuple4 linear_combo(const Tuple4& f, const Vec& lam) {
  Poly s;
  for (int i = 0; i < 4; ++i)
    if (!lam[i].is_zero()) s += f[i].scale(lam[i]);
  return {s, Poly(), Poly(), Poly()};
}

int multiplicity_of(const FactorizationResult& fr, const Poly& h) {
  Vec hv = primitive(lin_coeffs(h));
  for (const auto& [l, m] : fr.linear_factors)
    if (lin_coeffs(l) == hv) return m;
  return 0;
}

struct Structure {
  ContractedPlane cp;
  FactorizationResult jac;
  int hmult = 0;
  std::vector<Vec> w;  // basis of W = V / h, as coefficient vectors
  Vec PI;
  bool generic = false;
  int rank = 0, mult = 0;
  int kq = 0;  // component index with P[kq] != 0
  PRVType type = PRVType::Lin;
};

Structure analyze(const QuadMap& m) {
  Validation v = validate(m);
  if (v.kind != Validation::Kind::Quadratic) throw NotBidegree22("not a quadratic map: " + v.reason);
  Structure st;
  Poly J = jacobian_det(m.comps);
  if (J.is_zero()) throw NotBidegree22("zero Jacobian");
  st.jac = extract_linear_factors(J);
  auto cp = contracted_plane(m, st.jac);
  if (!cp) throw NotBidegree22("no contracted plane");
  st.cp = *cp;
  const Vec& P = st.cp.P;
  for (int k = 0; k < 4; ++k)
    if (!P[k].is_zero()) st.kq = k;
  Mat pm(1, 4);
  for (int k = 0; k < 4; ++k) pm(0, k) = P[k];
  for (const Vec& lam : nullspace(pm)) {
    Poly s = linear_combo(m.comps, lam)[0];
    auto q = s.divide_exact(st.cp.h);
    if (!q || q->is_zero() || !q->x_homogeneous(1)) throw NotBidegree22("V is not divisible by h");
    st.w.push_back(lin_coeffs(*q));
  }
  if (st.w.size() != 3 || !independent(st.w)) throw NotBidegree22("W has dimension < 3");
  auto ns = nullspace(rows_of(st.w));
  st.PI = primitive(ns.at(0));
  st.generic = !eval_at(st.cp.h, st.PI).is_zero();
  st.rank = quad_rank(st.cp.cI);
  st.hmult = multiplicity_of(st.jac, st.cp.h);
  if (st.generic) {
    static const PRVType g[] = {PRVType::Lin, PRVType::GenP, PRVType::GenX, PRVType::GenO};
    if (st.rank < 1 || st.rank > 3) throw NotBidegree22("conic of rank 0");
    st.type = g[st.rank];
    if (st.hmult != 2) throw NotBidegree22("Jacobian pattern does not match a generic type");
  } else {
    if (!eval_at(st.cp.cI, st.PI).is_zero()) throw NotBidegree22("P_I not on C_I");
    st.mult = 2;
    for (int v = 0; v < 4; ++v)
      if (!eval_at(diff(st.cp.cI, v), st.PI).is_zero()) st.mult = 1;
    if (st.mult == 1) {
      if (st.rank == 3)
        st.type = PRVType::TangO;
      else if (st.rank == 2)
        st.type = PRVType::TangX;
      else
        throw NotBidegree22("smooth point on a double line");
      if (st.hmult != 3) throw NotBidegree22("Jacobian pattern does not match tang(O)/tang(x)");
    } else {
      if (st.rank == 1)
        st.type = PRVType::TangP;
      else if (st.rank == 2)
        st.type = PRVType::Osc2X;
      else
        throw NotBidegree22("singular point on a smooth conic");
      if (st.hmult != 4) throw NotBidegree22("Jacobian pattern does not match tang(//)/osc");
    }
  }
  return st;
}

// generic: m = A' . [y0 y3, y1 y3, y2 y3, qt(y)] . Y
struct GenericFrame {
  Mat Ap, Y;
  Poly qt;  // in x0..x2
};

GenericFrame generic_frame(const QuadMap& m, const Structure& st) {
  GenericFrame f;
  f.Y = rows_of({st.w[0], st.w[1], st.w[2], lin_coeffs(st.cp.h)});
  Poly Qy = in_frame(m.comps[st.kq], f.Y);
  if (!coeff2(Qy, 3, 3).is_zero()) throw NotBidegree22("P_I is not a base point");
  std::vector<Poly::Term> keep;
  for (const auto& [mo, c] : Qy.terms())
    if (!mo[3]) keep.emplace_back(mo, c);
  f.qt = Poly::from_terms(keep);
  Tuple4 Np{parse_poly("x0*x3"), parse_poly("x1*x3"), parse_poly("x2*x3"), f.qt};
  auto A = solve_left(m.comps, apply_right(Np, f.Y));
  if (!A || det(*A).is_zero()) throw NotBidegree22("components outside the generic span");
  f.Ap = *A;
  return f;
}

// non-generic data: Q ~ p (m3 h + m') + kbar(wa, wb) modulo h W
struct TangFrame {
  Vec p, wa, wb, h;
  Rat m3;
  Vec mprime;  // coefficient vector in x
  Vec L;       // m3 h + m', frame independent
  Rat ma, mb;  // m' = ma wa + mb wb
  Rat k11, k12, k22;  // kbar = k11 wa^2 + k12 wa wb + k22 wb^2
};

TangFrame tang_frame(const QuadMap& m, const Structure& st) {
  TangFrame f;
  f.h = lin_coeffs(st.cp.h);
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (!st.PI[i].is_zero()) k = i;
  f.p = Vec(4);
  f.p[k] = 1;
  std::vector<Vec> ab;
  for (const Vec& w : st.w) {
    std::vector<Vec> t{f.h};
    for (auto& x : ab) t.push_back(x);
    t.push_back(w);
    if (independent(t)) ab.push_back(w);
    if (ab.size() == 2) break;
  }
  if (ab.size() != 2) throw NotBidegree22("W does not contain h with codimension 2");
  f.wa = ab[0], f.wb = ab[1];
  Mat Z = rows_of({f.p, f.wa, f.wb, f.h});
  Poly Qz = in_frame(m.comps[st.kq], Z);
  if (!coeff2(Qz, 0, 0).is_zero()) throw NotBidegree22("P_I is not a base point");
  f.m3 = coeff2(Qz, 0, 3);
  f.ma = coeff2(Qz, 0, 1), f.mb = coeff2(Qz, 0, 2);
  f.mprime = add(scaled(f.wa, f.ma), scaled(f.wb, f.mb));
  f.L = add(scaled(f.h, f.m3), f.mprime);
  if (st.mult == 2 && f.m3.is_zero()) throw NotBidegree22("degenerate tangent data");
  f.k11 = coeff2(Qz, 1, 1), f.k12 = coeff2(Qz, 1, 2), f.k22 = coeff2(Qz, 2, 2);
  return f;
}

Mat solve_or_throw(const QuadMap& m, const Tuple4& N, const Mat& B) {
  auto A = solve_left(m.comps, apply_right(N, B));
  if (!A || det(*A).is_zero()) throw NotBidegree22("no left factor for the constructed frame");
  return *A;
}

// mult-1 case: canonical TangO / TangX frame
Mat tang1_rows(const QuadMap& m, const Structure& st, const TangFrame& f, PRVType& type) {
  // y2 + y3 = L, y3 ~ h
  Rat sc = f.m3.is_zero() ? Rat(1) : f.m3;
  Vec y3 = scaled(f.h, sc);
  Vec y2 = add(f.L, scaled(y3, Rat(-1)));
  Vec w = independent({f.h, f.L, f.wa}) ? f.wa : f.wb;
  Mat Z = rows_of({f.p, w, y2, y3});
  Poly Qz = in_frame(m.comps[st.kq], Z);
  Rat kappa = coeff2(Qz, 1, 1), kp = coeff2(Qz, 1, 2), kpp = coeff2(Qz, 2, 2);
  Vec pt = add(f.p, add(scaled(w, kp), scaled(y2, kpp)));
  if (!kappa.is_zero()) {
    type = PRVType::TangO;
    return rows_of({w, scaled(pt, -kappa.inv()), y2, y3});
  }
  type = PRVType::TangX;
  return rows_of({w, pt, scaled(y2, Rat(-1)), y3});
}

Poly kbar_poly(const TangFrame& f) {
  // in variables x1, x2
  return Poly::monomial(Mono::x(0, 2, 0, 0), f.k11) + Poly::monomial(Mono::x(0, 1, 1, 0), f.k12) +
         Poly::monomial(Mono::x(0, 0, 2, 0), f.k22);
}

Canonical canon_from(const QuadMap& m, PRVType N, const Mat& B) {
  Canonical c;
  c.N = N;
  c.B = B;
  c.A = solve_or_throw(m, normal_form(N), B);
  return c;
}

}  // namespace

// ---------------- validate / contracted plane ----------------

Validation validate(const QuadMap& m) {
  Validation v;
  bool any = false;
  for (const auto& c : m.comps) {
    if (c.is_zero()) continue;
    any = true;
    if (!is_x_rational(c) || !c.x_homogeneous(2)) {
      v.reason = "components must be rational quadratic forms";
      return v;
    }
  }
  if (!any) {
    v.reason = "all components zero";
    return v;
  }
  // common linear factor
  int best = -1;
  for (int i = 0; i < 4; ++i)
    if (!m.comps[i].is_zero() && (best < 0 || m.comps[i].size() < m.comps[best].size())) best = i;
  for (const auto& [l, mult] : extract_linear_factors(m.comps[best]).linear_factors) {
    bool all = true;
    std::vector<Vec> res;
    for (const auto& c : m.comps) {
      if (c.is_zero()) {
        res.push_back(Vec(4));
        continue;
      }
      auto q = divides_linear(c, l);
      if (!q) {
        all = false;
        break;
      }
      res.push_back(lin_coeffs(*q));
    }
    if (!all) continue;
    Mat r = rows_of(res);
    if (rank(r) == 4) {
      v.kind = Validation::Kind::Lin;
      v.common = l;
      v.residual = r;
    } else {
      v.reason = "common factor with dependent residual linear forms";
    }
    return v;
  }
  // span dimension
  Mat sp(4, 10);
  std::map<Mono, int> idx;
  for (int i = 0; i < 4; ++i)
    for (const auto& [mo, c] : m.comps[i].terms()) {
      auto it = idx.try_emplace(mo, (int)idx.size()).first;
      sp(i, it->second) = c;
    }
  if (rank(sp) < 4) {
    v.reason = "components linearly dependent";
    return v;
  }
  if (jacobian_det(m.comps).is_zero()) {
    v.reason = "Jacobian identically zero";
    return v;
  }
  v.kind = Validation::Kind::Quadratic;
  return v;
}

std::optional<ContractedPlane> contracted_plane(const QuadMap& m) {
  Poly J = jacobian_det(m.comps);
  if (J.is_zero()) return std::nullopt;
  return contracted_plane(m, extract_linear_factors(J));
}

std::optional<ContractedPlane> contracted_plane(const QuadMap& m, const FactorizationResult& jac) {
  std::optional<ContractedPlane> found;
  for (const auto& [h, mult] : jac.linear_factors) {
    if (mult < 2) continue;
    std::array<Poly, 4> r;
    int nz = -1;
    for (int i = 0; i < 4; ++i) {
      r[i] = restrict_to_plane(m.comps[i], h);
      if (!r[i].is_zero() && nz < 0) nz = i;
    }
    if (nz < 0) continue;  // plane divides every component
    Poly c = r[nz].primitive();
    const auto& [lm, lc] = c.lead();
    Vec P(4);
    bool prop = true;
    for (int i = 0; i < 4 && prop; ++i) {
      if (r[i].is_zero()) continue;
      Rat s = Rat(0);
      for (const auto& [mo, cc] : r[i].terms())
        if (mo == lm) s = cc / lc;
      if (s.is_zero() || r[i] != c.scale(s))
        prop = false;
      else
        P[i] = s;
    }
    if (!prop) continue;
    if (found) throw AmbiguousH("two planes contracted to points");
    found = ContractedPlane{h, primitive(P), c};
  }
  return found;
}

// ---------------- classify / canonicalize / invert ----------------

namespace {

Tuple4 inverse_from(const QuadMap& m, const Structure& st) {
  if (st.generic) {
    GenericFrame f = generic_frame(m, st);
    Tuple4 Np{parse_poly("x0*x3"), parse_poly("x1*x3"), parse_poly("x2*x3"), f.qt};
    return apply_left(*inverse(f.Y), apply_right(Np, *inverse(f.Ap)));
  }
  TangFrame f = tang_frame(m, st);
  if (st.mult == 1) {
    PRVType t;
    Mat B = tang1_rows(m, st, f, t);
    Mat A = solve_or_throw(m, normal_form(t), B);
    return apply_left(*inverse(B), apply_right(table_inverse(t), *inverse(A)));
  }
  // mult 2: [y0 y3 + kbar(y1, y2), y1 y3, y2 y3, y3^2] with y = (p, wa, wb, m3 h)
  Mat Y = rows_of({f.p, f.wa, f.wb, scaled(f.h, f.m3)});
  Poly k = kbar_poly(f);
  Poly y03 = parse_poly("x0*x3");
  Tuple4 Np{y03 + k, parse_poly("x1*x3"), parse_poly("x2*x3"), parse_poly("x3^2")};
  Tuple4 Ni{y03 - k, Np[1], Np[2], Np[3]};
  Mat A = solve_or_throw(m, Np, Y);
  return apply_left(*inverse(Y), apply_right(Ni, *inverse(A)));
}

}  // namespace

ClassificationReport classify(const QuadMap& m) {
  ClassificationReport r;
  Validation v = validate(m);
  if (v.kind == Validation::Kind::Lin) {
    r.type = PRVType::Lin;
    r.lin_factor = v.common;
    r.lin_matrix = v.residual;
    r.gamma = gamma_description(PRVType::Lin);
    auto inv = inverse(v.residual);
    r.inverse = linear_tuple(*inv);
    r.certified = cross_minors_zero(compose(r.inverse, linear_tuple(v.residual)), identity_tuple());
    return r;
  }
  Structure st = analyze(m);
  r.type = st.type;
  r.H = st.cp.h;
  r.P = st.cp.P;
  r.P_I = st.PI;
  r.cI = st.cp.cI;
  r.cI_rank = st.rank;
  r.cI_mult = st.generic ? 0 : st.mult;
  r.jac = st.jac;
  r.gamma = gamma_description(st.type);
  if (st.generic) {
    Poly h2 = st.cp.h * st.cp.h;
    auto S = st.jac.expand().divide_exact(h2);
    r.S_or_Pi = S->primitive();
    r.C_desc = "S is contracted onto a conic C";
  } else if (st.mult == 1) {
    for (const auto& [l, mu] : st.jac.linear_factors)
      if (mu == 1) r.S_or_Pi = l;
    r.C_desc = "Pi is contracted onto a line";
  } else {
    r.C_desc = "no surface contracted to a curve";
  }
  r.inverse = inverse_from(m, st);
  r.certified = cross_minors_zero(compose(r.inverse, m.comps), identity_tuple());
  if (!r.certified) throw NotBidegree22("inverse round trip failed");
  auto hi = contracted_plane(QuadMap{r.inverse, ""});
  if (!hi) throw NotBidegree22("inverse has no contracted plane");
  r.H_I = hi->h;
  return r;
}

QuadMap invert(const QuadMap& m) {
  Validation v = validate(m);
  if (v.kind == Validation::Kind::Lin) {
    auto inv = inverse(v.residual);
    return QuadMap{linear_tuple(*inv), m.label.empty() ? "" : m.label + "^-1"};
  }
  Structure st = analyze(m);
  return QuadMap{inverse_from(m, st), m.label.empty() ? "" : m.label + "^-1"};
}

Canonical canonicalize(const QuadMap& m) {
  Structure st = analyze(m);
  if (!st.generic) {
    TangFrame f = tang_frame(m, st);
    if (st.mult == 1) {
      PRVType t;
      Mat B = tang1_rows(m, st, f, t);
      return canon_from(m, t, B);
    }
    Poly k = kbar_poly(f);
    auto fr = extract_linear_factors(k);
    Vec y3 = scaled(f.h, f.m3);
    auto in_x = [&](const Poly& l) {  // l in (x1, x2) = (wa, wb)
      Vec c = lin_coeffs(l);
      return add(scaled(f.wa, c[1]), scaled(f.wb, c[2]));
    };
    if (st.type == PRVType::TangP) {
      if (fr.linear_factors.size() != 1 || fr.linear_factors[0].second != 2)
        throw NotBidegree22("tang(//) conic is not a double line");
      Vec l = in_x(fr.linear_factors[0].first);
      Rat kappa = fr.unit * fr.residual.constant_term();
      Vec other = independent({f.h, l, f.wa}) ? f.wa : f.wb;
      return canon_from(m, PRVType::TangP, rows_of({other, scaled(f.p, -kappa.inv()), l, y3}));
    }
    int nl = 0;
    for (auto& [l, mu] : fr.linear_factors) nl += mu;
    if (nl != 2) throw NoRationalNormalForm("osc2(x): the two lines of C_I are not defined over Q");
    Vec l1 = in_x(fr.linear_factors[0].first), l2 = in_x(fr.linear_factors[1].first);
    Rat kappa = fr.unit * fr.residual.constant_term();
    return canon_from(m, PRVType::Osc2X, rows_of({f.p, scaled(l1, -kappa), l2, y3}));
  }
  GenericFrame g = generic_frame(m, st);
  Mat Y3(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) Y3(i, j) = g.Y(i, j);
  Vec hrow = g.Y.row(3);
  // z = C y on the first three coordinates
  auto finish = [&](PRVType t, const Mat& C) {
    Mat Z = C * Y3;
    std::vector<Vec> rws;
    for (int i = 0; i < 3; ++i) rws.push_back(Z.row(i));
    rws.push_back(hrow);
    return canon_from(m, t, rows_of(rws));
  };
  auto from_lines = [&](const std::vector<Vec>& lines, PRVType t) {
    // lines in y0..y2 coordinates (4-vectors with last entry 0); placed at positions 3-n..2
    std::vector<Vec> three;
    for (auto& l : lines) three.push_back(Vec{l[0], l[1], l[2]});
    auto basis = complete_basis(three, 3);
    std::vector<Vec> ordered;
    for (size_t i = lines.size(); i < basis.size(); ++i) ordered.push_back(basis[i]);
    for (auto& l : three) ordered.push_back(l);
    return finish(t, rows_of(ordered));
  };
  if (st.type == PRVType::GenO) {
    Mat G = gram(g.qt);
    Mat G3(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G3(i, j) = G(i, j);
    // already c (y0^2 - y1 y2)?
    if (G3(0, 1).is_zero() && G3(0, 2).is_zero() && G3(1, 1).is_zero() && G3(2, 2).is_zero() &&
        !G3(0, 0).is_zero() && G3(1, 2) == -G3(0, 0) / Rat(2))
      return finish(PRVType::GenO, Mat::identity(3));
    auto p = isotropic_vector(G3);
    if (!p) throw NoRationalNormalForm("gen(O): the conic C_I has no rational point");
    Vec r;
    for (int i = 0; i < 3; ++i) {
      Vec e(3);
      e[i] = 1;
      if (!bilinear(G3, *p, e).is_zero()) {
        r = e;
        break;
      }
    }
    Rat bpr = bilinear(G3, *p, r);
    Vec rp = add(scaled(*p, bilinear(G3, r, r)), scaled(r, Rat(-2) * bpr));
    Mat perp(2, 3);
    Vec gp = G3.apply(*p), grp = G3.apply(rp);
    for (int j = 0; j < 3; ++j) perp(0, j) = gp[j], perp(1, j) = grp[j];
    Vec w = nullspace(perp).at(0);
    Rat lam = -bilinear(G3, w, w) / (Rat(2) * bilinear(G3, *p, rp));
    Mat M = rows_of({w, *p, scaled(rp, lam)}).transpose();  // y = M z
    return finish(PRVType::GenO, *inverse(M));
  }
  auto fr = extract_linear_factors(g.qt);
  if (st.type == PRVType::GenX) {
    int nl = 0;
    for (auto& [l, mu] : fr.linear_factors) nl += mu;
    if (nl != 2) throw NoRationalNormalForm("gen(x): the two lines of C_I are not defined over Q");
    return from_lines({lin_coeffs(fr.linear_factors[0].first), lin_coeffs(fr.linear_factors[1].first)},
                      PRVType::GenX);
  }
  return from_lines({lin_coeffs(fr.linear_factors.at(0).first)}, PRVType::GenP);
}

// ---------------- composition ----------------

std::optional<Mat> solve_left(const Tuple4& m, const Tuple4& basis) {
  std::map<Mono, int> idx;
  auto reg = [&](const Poly& p) {
    for (const auto& [mo, c] : p.terms()) idx.try_emplace(mo, (int)idx.size());
  };
  for (auto& p : basis) reg(p);
  for (auto& p : m) reg(p);
  int R = (int)idx.size();
  Mat M(R, 4);
  for (int j = 0; j < 4; ++j)
    for (const auto& [mo, c] : basis[j].terms()) M(idx[mo], j) = c;
  Mat A(4, 4);
  for (int i = 0; i < 4; ++i) {
    Vec b(R);
    for (const auto& [mo, c] : m[i].terms()) b[idx[mo]] = c;
    auto x = solve(M, b);
    if (!x) return std::nullopt;
    for (int j = 0; j < 4; ++j) A(i, j) = (*x)[j];
  }
  return A;
}

namespace {
std::vector<Mono> monomials(int d) {
  std::vector<Mono> out;
  for (int a = d; a >= 0; --a)
    for (int b = d - a; b >= 0; --b)
      for (int c = d - a - b; c >= 0; --c) out.push_back(Mono::x(a, b, c, d - a - b - c));
  return out;
}
}  // namespace

std::optional<Tuple4> reduce_tuple(const Tuple4& raw) {
  int D = -1;
  for (auto& c : raw)
    if (!c.is_zero()) D = std::max(D, c.xdeg_max());
  if (D <= 1) return std::nullopt;
  static const int pr[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int d = 1; d < D; ++d) {
    auto mons = monomials(d);
    int nm = (int)mons.size();
    std::map<std::pair<int, Mono>, int> rowid;
    std::vector<std::tuple<int, int, Rat>> entries;
    for (int k = 0; k < 6; ++k) {
      int i = pr[k][0], j = pr[k][1];
      // raw_i r_j - raw_j r_i
      for (int u = 0; u < nm; ++u) {
        for (const auto& [mo, c] : raw[i].terms()) {
          int row = rowid.try_emplace({k, mo * mons[u]}, (int)rowid.size()).first->second;
          entries.emplace_back(row, j * nm + u, c);
        }
        for (const auto& [mo, c] : raw[j].terms()) {
          int row = rowid.try_emplace({k, mo * mons[u]}, (int)rowid.size()).first->second;
          entries.emplace_back(row, i * nm + u, -c);
        }
      }
    }
    Mat M((int)rowid.size(), 4 * nm);
    for (auto& [r, c, v] : entries) M(r, c) += v;
    auto ns = nullspace(M);
    if (ns.empty()) continue;
    Tuple4 r;
    for (int i = 0; i < 4; ++i) {
      std::vector<Poly::Term> t;
      for (int u = 0; u < nm; ++u)
        if (!ns[0][i * nm + u].is_zero()) t.emplace_back(mons[u], ns[0][i * nm + u]);
      r[i] = Poly::from_terms(t);
    }
    return r;
  }
  return std::nullopt;
}

Composition compose_maps(const Tuple4& f, const Tuple4& g) {
  Composition c;
  c.raw = compose(f, g);
  c.reduced = reduce_tuple(c.raw);
  if (c.reduced) {
    for (int i = 0; i < 4; ++i)
      if (!(*c.reduced)[i].is_zero()) {
        c.common = *c.raw[i].divide_exact((*c.reduced)[i]);
        break;
      }
    // normalize: common primitive, scalar moved into reduced
    Rat k = c.common.content();
    if (c.common.lead().second.sign() < 0) k = -k;
    c.common = c.common.scale(k.inv());
    for (auto& p : *c.reduced) p = p.scale(k);
    if (c.common.xdeg_max() <= 4) c.chain = extract_linear_factors(c.common);
  } else {
    c.common = Poly(1);
    c.chain.residual = Poly(1);
  }
  return c;
}

}  // namespace cr3
