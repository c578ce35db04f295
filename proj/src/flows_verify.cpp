#include <cmath>
#include <random>

#include "cremona3/flows.hpp"

namespace cr3 {

GroupLawReport verify_group_law(const SymbolicFlow& f) {
  GroupLawReport r;
  r.U = f.U;
  Tuple4 phi_s, shifted;
  for (int i = 0; i < 4; ++i) {
    phi_s[i] = rename_slot(f.comps[i], r.U, 1);
    shifted[i] = substitute_time_shift(f.comps[i], r.U);
  }
  Tuple4 raw = compose(phi_s, f.comps);  // phi_s o phi_t
  r.failing_minor = first_nonzero_minor(raw, shifted);
  r.holds = !r.failing_minor;
  if (!r.holds) return r;
  // cofactor from the shortest matched pair
  int best = -1;
  for (int i = 0; i < 4; ++i)
    if (!shifted[i].is_zero() && (best < 0 || shifted[i].size() < shifted[best].size())) best = i;
  if (best < 0) {
    r.holds = false;
    return r;
  }
  r.component = best;
  r.cofactor_num = raw[best];
  r.cofactor_den = shifted[best];
  r.cofactor = raw[best].divide_exact(shifted[best]);
  return r;
}

bool verify_identity_at_zero(const SymbolicFlow& f) {
  std::vector<std::pair<int, Rat>> a{{f.tvar(), Rat(0)}};
  for (const auto& g : f.gens) a.emplace_back(f.U.var(Universe::gen_name(g, 0)), Rat(1));
  Tuple4 z;
  bool any = false;
  for (int i = 0; i < 4; ++i) {
    z[i] = f.comps[i].eval(a);
    any |= !z[i].is_zero();
  }
  return any && cross_minors_zero(z, identity_tuple());
}

Tuple4 inverse_flow(const SymbolicFlow& f, Universe& U) {
  int t = U.var("t");
  std::vector<int> gv;
  for (const auto& g : f.gens) gv.push_back(U.var(Universe::gen_name(g, 0)));
  Tuple4 out;
  Mono lift;
  for (int i = 0; i < 4; ++i) {
    std::vector<Poly::Term> terms;
    for (const auto& [m, c] : f.comps[i].terms()) {
      Mono n = m;
      Rat cc = c;
      if (n[t] % 2) cc = -cc;
      for (int v : gv) n[v] = (int8_t)-n[v];
      for (int v : gv)
        if (n[v] < 0 && -n[v] > lift[v]) lift[v] = (int8_t)-n[v];
      terms.emplace_back(n, cc);
    }
    out[i] = Poly::from_terms(std::move(terms));
  }
  for (auto& c : out) c = c.mul_mono(lift, Rat(1));
  return out;
}

bool verify_inverse(const SymbolicFlow& f) {
  Universe U = f.U;
  Tuple4 inv = inverse_flow(f, U);
  Tuple4 c = compose(inv, f.comps);
  bool any = false;
  for (const auto& p : c) any |= !p.is_zero();
  return any && cross_minors_zero(c, identity_tuple());
}

namespace {

using DVec = std::array<double, 4>;

DVec eval_flow_double(const SymbolicFlow& f, double tau, const std::vector<double>& base, const DVec& x) {
  std::vector<double> vals = base;
  vals[f.tvar()] = tau;
  for (const auto& g : f.gens)
    vals[f.U.var(Universe::gen_name(g, 0))] = std::exp(f.params.rates.at(g).to_double() * tau);
  for (int i = 0; i < 4; ++i) vals[i] = x[i];
  DVec y;
  for (int i = 0; i < 4; ++i) y[i] = eval_double(f.comps[i], vals);
  return y;
}

DVec normalized(const DVec& v) {
  double m = 0;
  for (double a : v) m = std::max(m, std::fabs(a));
  DVec r = v;
  if (m > 0)
    for (double& a : r) a /= m;
  return r;
}

}  // namespace

NumericReport numeric_group_law(const SymbolicFlow& f, int samples, unsigned seed) {
  NumericReport rep;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), cst(-2.0, 2.0);
  for (int k = 0; k < samples; ++k) {
    std::vector<double> base(kVars, 0.0);
    for (const auto& c : f.symbolic) base[f.U.var(c)] = cst(rng);
    double t = unit(rng), s = unit(rng);
    DVec x{unit(rng), unit(rng), unit(rng), unit(rng)};
    DVec a = normalized(eval_flow_double(f, s, base, eval_flow_double(f, t, base, x)));
    DVec b = normalized(eval_flow_double(f, t + s, base, x));
    double err = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) err = std::max(err, std::fabs(a[i] * b[j] - a[j] * b[i]));
    rep.max_err = std::max(rep.max_err, err);
    ++rep.samples;
  }
  rep.ok = rep.max_err <= 1e-9;
  return rep;
}

namespace {
const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
}

std::pair<Rat, std::map<std::string, Rat>> sample_fiber(const SymbolicFlow& f, int k) {
  static const Rat ts[] = {Rat(1), Rat(2), Rat(-1), Rat(3), Rat(1, 2), Rat(-2), Rat(5),
                           Rat(2, 3), Rat(-3), Rat(7), Rat(-1, 3), Rat(4)};
  Rat t0 = ts[k % 12] + Rat(k / 12);
  std::map<std::string, Rat> g;
  for (size_t i = 0; i < f.gens.size(); ++i) g[f.gens[i]] = Rat(kPrimes[(i + 2 * k) % 20]);
  if (k % 3 == 2)
    for (auto& [_, v] : g) v = v.inv();
  return {t0, g};
}

QuadMap evaluate_member(const SymbolicFlow& f, const Rat& t0, const std::map<std::string, Rat>& gens,
                        const std::map<std::string, Rat>& consts) {
  std::vector<std::pair<int, Rat>> a{{f.tvar(), t0}};
  for (size_t i = 0; i < f.gens.size(); ++i) {
    const auto& g = f.gens[i];
    Rat v = gens.count(g) ? gens.at(g) : Rat(kPrimes[i % 20]);
    if (v.is_zero()) throw std::invalid_argument("generator " + g + " assigned 0");
    a.emplace_back(f.U.var(Universe::gen_name(g, 0)), v);
  }
  for (size_t i = 0; i < f.symbolic.size(); ++i) {
    const auto& c = f.symbolic[i];
    a.emplace_back(f.U.var(c), consts.count(c) ? consts.at(c) : generic_constant((int)i));
  }
  Poly cl = f.clearing.eval(a);
  if (cl.is_zero()) throw DegenerateFiber(f.label() + ": clearing factor vanishes on this fiber");
  QuadMap m;
  m.label = f.label() + " @ t=" + t0.str();
  for (int i = 0; i < 4; ++i) {
    m.comps[i] = f.comps[i].eval(a);
    if (!is_x_rational(m.comps[i])) throw std::invalid_argument("evaluate_member: unassigned symbol left");
  }
  if (validate(m).kind == Validation::Kind::Degenerate)
    throw DegenerateFiber(f.label() + ": degenerate fiber (" + validate(m).reason + ")");
  return m;
}

}  // namespace cr3
