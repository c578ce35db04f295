#include "cremona3/forms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <stdexcept>

#include "cremona3/numth.hpp"

namespace cr3 {

Poly FactorizationResult::expand() const {
  Poly r = residual.scale(unit);
  for (const auto& [l, m] : linear_factors) r = r * l.pow(m);
  return r;
}

Poly diff(const Poly& f, int v) {
  std::vector<Poly::Term> out;
  for (const auto& [m, c] : f.terms()) {
    int k = m[v];
    if (!k) continue;
    Mono n = m;
    n[v] = (int8_t)(k - 1);
    out.emplace_back(n, c * Rat(k));
  }
  return Poly::from_terms(std::move(out));
}

Poly det4(const std::array<Tuple4, 4>& m) {
  // Laplace along rows {0,1} / {2,3}
  static const int P[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Poly top[6], bot[6];
  for (int k = 0; k < 6; ++k) {
    int a = P[k][0], b = P[k][1];
    top[k] = m[0][a] * m[1][b] - m[0][b] * m[1][a];
    bot[k] = m[2][a] * m[3][b] - m[2][b] * m[3][a];
  }
  // complement of column pair k is 5-k; sign of (a,b,c,d) permutation
  static const int S[6] = {1, -1, 1, 1, -1, 1};
  Poly d;
  for (int k = 0; k < 6; ++k) {
    Poly t = top[k] * bot[5 - k];
    d = S[k] > 0 ? d + t : d - t;
  }
  return d;
}

Poly jacobian_det(const Tuple4& c) {
  std::array<Tuple4, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = diff(c[i], j);
  return det4(m);
}

Vec lin_coeffs(const Poly& l) {
  Vec v(4);
  for (const auto& [m, c] : l.terms()) {
    if (m.xdeg() != 1 || !m.coeff_part().is_one())
      throw std::invalid_argument("lin_coeffs: not a rational linear form");
    for (int i = 0; i < 4; ++i)
      if (m[i]) v[i] = c;
  }
  return v;
}

Poly lin_form(const Vec& v) {
  std::vector<Poly::Term> t;
  for (int i = 0; i < 4; ++i)
    if (!v[i].is_zero()) t.emplace_back(Mono::var(i), v[i]);
  return Poly::from_terms(std::move(t));
}

bool is_x_rational(const Poly& f) {
  for (const auto& [m, c] : f.terms())
    if (!m.coeff_part().is_one()) return false;
  return true;
}

Rat eval_at(const Poly& f, const Vec& p) {
  Rat s = 0;
  for (const auto& [m, c] : f.terms()) {
    Rat v = c;
    for (int i = 0; i < 4 && !v.is_zero(); ++i)
      if (m[i]) v *= p[i].pow(m[i]);
    s += v;
  }
  return s;
}

Vec eval_tuple(const Tuple4& f, const Vec& p) {
  Vec v(4);
  for (int i = 0; i < 4; ++i) v[i] = eval_at(f[i], p);
  return v;
}

Tuple4 identity_tuple() { return {Poly::x(0), Poly::x(1), Poly::x(2), Poly::x(3)}; }

Tuple4 linear_tuple(const Mat& a) {
  Tuple4 r;
  for (int i = 0; i < 4; ++i) r[i] = lin_form(a.row(i));
  return r;
}

Tuple4 apply_left(const Mat& a, const Tuple4& f) {
  Tuple4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!a(i, j).is_zero()) r[i] += f[j].scale(a(i, j));
  return r;
}

Poly subst_linear(const Poly& f, const Mat& b) { return f.subst_x(linear_tuple(b)); }

Tuple4 apply_right(const Tuple4& f, const Mat& b) {
  Tuple4 im = linear_tuple(b), r;
  for (int i = 0; i < 4; ++i) r[i] = f[i].subst_x(im);
  return r;
}

Poly restrict_to_plane(const Poly& f, const Poly& h) {
  Vec v = lin_coeffs(h);
  int k = -1;
  for (int i = 3; i >= 0; --i)
    if (!v[i].is_zero()) {
      k = i;
      break;
    }
  if (k < 0) throw std::invalid_argument("restrict_to_plane: zero plane");
  Tuple4 im = identity_tuple();
  Poly sol;
  for (int i = 0; i < 4; ++i)
    if (i != k && !v[i].is_zero()) sol += Poly::x(i).scale(-v[i] / v[k]);
  im[k] = sol;
  return f.subst_x(im);
}

std::optional<Poly> divides_linear(const Poly& f, const Poly& h) {
  if (!restrict_to_plane(f, h).is_zero()) return std::nullopt;
  return f.divide_exact(h);
}

// ---------- rational roots of binary forms ----------

namespace {

using UPoly = std::vector<Rat>;  // ascending coefficients

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly umod(UPoly a, const UPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t sh = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

UPoly udiv(UPoly a, const UPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  UPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t sh = a.size() - b.size();
    q[sh] = f;
    for (size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return q;
}

UPoly ugcd(UPoly a, UPoly b) {
  trim(a), trim(b);
  while (!b.empty()) {
    UPoly r = umod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Rat ueval(const UPoly& p, const Rat& x) {
  Rat s = 0;
  for (size_t i = p.size(); i-- > 0;) s = s * x + p[i];
  return s;
}

std::vector<mpz_class> to_integer(const UPoly& p) {
  mpz_class l = 1;
  for (const auto& c : p) {
    mpz_class d = c.den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<mpz_class> z;
  for (const auto& c : p) z.push_back(c.num() * (l / c.den()));
  return z;
}

// approximate real roots of a squarefree polynomial (Durand-Kerner)
std::vector<long double> approx_real_roots(const UPoly& p) {
  int n = (int)p.size() - 1;
  std::vector<long double> out;
  if (n < 1) return out;
  if (n == 1) {
    out.push_back(-p[0].to_ldouble() / p[1].to_ldouble());
    return out;
  }
  using C = std::complex<long double>;
  std::vector<long double> a(n + 1);
  for (int i = 0; i <= n; ++i) a[i] = p[i].to_ldouble() / p[n].to_ldouble();
  std::vector<C> z(n);
  C seed(0.4L, 0.9L);
  long double R = 1;
  for (int i = 0; i < n; ++i) R = std::max(R, 1 + std::abs(a[i]));
  for (int i = 0; i < n; ++i) z[i] = R * std::pow(seed, (long double)i);
  auto ev = [&](C x) {
    C s = 1;
    for (int i = n - 1; i >= 0; --i) s = s * x + a[i];
    return s;
  };
  for (int it = 0; it < 2000; ++it) {
    long double delta = 0;
    for (int i = 0; i < n; ++i) {
      C den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) == 0) den = C(1e-30L, 0);
      C step = ev(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step) / (1 + std::abs(z[i])));
    }
    if (delta < 1e-18L) break;
  }
  for (auto& r : z)
    if (std::abs(r.imag()) <= 1e-6L * (1 + std::abs(r.real()))) out.push_back(r.real());
  return out;
}

// rational roots of a univariate polynomial (each once)
std::vector<Rat> rational_roots(UPoly f) {
  trim(f);
  std::vector<Rat> roots;
  if (f.size() <= 1) return roots;
  // x = 0
  if (f[0].is_zero()) {
    roots.push_back(Rat(0));
    size_t k = 0;
    while (f[k].is_zero()) ++k;
    f.erase(f.begin(), f.begin() + k);
  }
  if (f.size() <= 1) return roots;
  UPoly df(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) df[i - 1] = f[i] * Rat((long long)i);
  UPoly g = ugcd(f, df);
  UPoly sf = g.size() > 1 ? udiv(f, g) : f;
  auto z = to_integer(sf);
  const mpz_class& a0 = z.front();
  const mpz_class& an = z.back();
  std::set<std::pair<mpz_class, mpz_class>> seen;
  std::vector<long double> fl;
  long double scale = 0;
  for (const auto& c : sf) fl.push_back(c.to_ldouble()), scale = std::max(scale, std::fabs(fl.back()));
  auto test = [&](const mpz_class& p, const mpz_class& q) {
    if (q == 0) return;
    {
      // cheap float rejection before the exact test
      long double x = p.get_d() / q.get_d(), v = 0, mag = 0, ax = std::fabs(x);
      for (size_t i = fl.size(); i-- > 0;) v = v * x + fl[i], mag = mag * ax + std::fabs(fl[i]);
      if (std::fabs(v) > 1e-9L * mag + 1e-300L) return;
    }
    Rat x(mpq_class(p, q));
    auto key = std::make_pair(x.num(), x.den());
    if (seen.count(key)) return;
    seen.insert(key);
    if (ueval(sf, x).is_zero()) roots.push_back(x);
  };
  auto dq = divisors(an);
  size_t n_a0 = 0;
  std::vector<mpz_class> dp;
  if (mpz_sizeinbase(a0.get_mpz_t(), 2) < 64) {
    dp = divisors(a0);
    n_a0 = dp.size();
  }
  if (n_a0 && n_a0 * dq.size() <= 20000) {
    for (const auto& q : dq)
      for (const auto& p : dp) test(p, q), test(-p, q);
  } else {
    // numeric localization of numerators; exactness from the final test
    for (long double r : approx_real_roots(sf))
      for (const auto& q : dq) {
        long double pv = std::round(r * q.get_d());
        for (int off = -1; off <= 1; ++off) {
          mpz_class p;
          mpz_set_d(p.get_mpz_t(), (double)(pv + off));
          if (p != 0 && mpz_divisible_p(a0.get_mpz_t(), p.get_mpz_t())) test(p, q);
        }
      }
  }
  return roots;
}

}  // namespace

std::vector<std::pair<Vec, int>> binary_form_roots(const std::vector<Rat>& c0) {
  // F(p,q) = sum c[i] p^i q^(d-i); root (p:q)
  std::vector<std::pair<Vec, int>> out;
  UPoly f = c0;
  int d = (int)f.size() - 1;
  bool all_zero = std::all_of(f.begin(), f.end(), [](const Rat& r) { return r.is_zero(); });
  if (all_zero) throw std::invalid_argument("binary_form_roots: zero form");
  // root at infinity (1:0): multiplicity = number of vanishing top coefficients
  int inf = 0;
  while (f[d - inf].is_zero()) ++inf;
  if (inf) out.push_back({Vec{Rat(1), Rat(0)}, inf});
  UPoly g(f.begin(), f.end() - inf);
  for (const Rat& x : rational_roots(g)) {
    int m = 0;
    UPoly lin{-x, Rat(1)};
    UPoly h = g;
    while (h.size() > 1 && ueval(h, x).is_zero()) {
      h = udiv(h, lin);
      ++m;
    }
    out.push_back({Vec{Rat(x.num()), Rat(x.den())}, m});
  }
  return out;
}

// ---------- linear factor extraction ----------

namespace {

std::vector<Rat> binary_coeffs(const Poly& f, const Tuple4& line, int d) {
  // line maps x0 -> p, x1 -> q parametrization
  Poly g = f.subst_x(line);
  std::vector<Rat> c(d + 1);
  for (const auto& [m, v] : g.terms()) c[m[0]] = v;
  return c;
}

Vec normalize_lin(const Vec& v) { return primitive(v); }

struct ProbeResult {
  std::vector<Vec> planes;
  bool degenerate = false;
};

// f vanishes at two fixed rational points of the plane L = 0
bool vanishes_on_samples(const Poly& f, const Vec& L) {
  static const long long pts[2][4] = {{3, -7, 11, 5}, {-2, 13, 4, -9}};
  int k = 3;
  while (L[k].is_zero()) --k;
  for (auto& pt : pts) {
    Vec p(4);
    Rat s = 0;
    for (int i = 0; i < 4; ++i)
      if (i != k) p[i] = Rat(pt[i]), s += L[i] * p[i];
    p[k] = -s / L[k];
    if (!eval_at(f, p).is_zero()) return false;
  }
  return true;
}

ProbeResult probe(const Poly& f, int d) {
  ProbeResult res;
  Poly P = Poly::x(0), Q = Poly::x(1), Z;
  Tuple4 l1{P, Q, Z, Z}, l2{Z, Z, P, Q}, l3{P, Q, Q, P};
  std::vector<Rat> b1 = binary_coeffs(f, l1, d), b2 = binary_coeffs(f, l2, d),
                   b3 = binary_coeffs(f, l3, d);
  auto zero = [](const std::vector<Rat>& b) {
    return std::all_of(b.begin(), b.end(), [](const Rat& r) { return r.is_zero(); });
  };
  if (zero(b1) || zero(b2) || zero(b3)) {
    res.degenerate = true;
    return res;
  }
  // root (p0:q0) -> linear factor q0*p - p0*q, coefficients (q0, -p0) on (p, q)
  auto facs = [](const std::vector<Rat>& b) {
    std::vector<Vec> r;
    for (auto& [pt, m] : binary_form_roots(b)) r.push_back(Vec{pt[1], -pt[0]});
    return r;
  };
  auto F1 = facs(b1), F2 = facs(b2), F3 = facs(b3);
  std::set<std::vector<std::string>> seen;
  for (const auto& a : F1)
    for (const auto& b : F2)
      for (const auto& c : F3) {
        // L = (a0, a1, lam*b0, lam*b1); on line 3: (a0 + lam b1) p + (a1 + lam b0) q ~ c
        Rat den = c[1] * b[1] - c[0] * b[0];
        Rat num = c[0] * a[1] - c[1] * a[0];
        if (den.is_zero()) {
          if (num.is_zero()) res.degenerate = true;
          continue;
        }
        Rat lam = num / den;
        if (lam.is_zero()) continue;
        Vec L = normalize_lin(Vec{a[0], a[1], lam * b[0], lam * b[1]});
        std::vector<std::string> key;
        for (auto& x : L) key.push_back(x.str());
        if (seen.count(key)) continue;
        seen.insert(key);
        if (vanishes_on_samples(f, L) && restrict_to_plane(f, lin_form(L)).is_zero()) res.planes.push_back(L);
      }
  return res;
}

}  // namespace

FactorizationResult extract_linear_factors(const Poly& f, unsigned seed) {
  if (f.is_zero()) throw std::invalid_argument("extract_linear_factors: zero form");
  if (!is_x_rational(f)) throw std::invalid_argument("extract_linear_factors: non-rational coefficients");
  int d = f.xdeg_max();
  if (!f.x_homogeneous(d)) throw std::invalid_argument("extract_linear_factors: not homogeneous");
  if (d > 4) throw std::invalid_argument("extract_linear_factors: degree > 4");
  FactorizationResult res;
  std::vector<Vec> planes;
  if (d > 0) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(-4, 4);
    Mat g = Mat::identity(4);
    for (int attempt = 0; attempt < 40; ++attempt) {
      Poly fg = subst_linear(f, g);
      ProbeResult pr = probe(fg, d);
      if (!pr.degenerate || attempt == 39) {
        Mat gi = *inverse(g);
        for (const auto& Lp : pr.planes) {
          Vec L(4);  // row vector L' * g^{-1}
          for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) L[j] += Lp[i] * gi(i, j);
          planes.push_back(primitive(L));
        }
        break;
      }
      do {
        for (auto& x : g.a) x = Rat(dist(rng));
      } while (det(g).is_zero());
    }
  }
  std::sort(planes.begin(), planes.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < 4; ++i)
      if (a[i] != b[i]) return b[i] < a[i];
    return false;
  });
  planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
  Poly rest = f;
  for (const auto& L : planes) {
    Poly l = lin_form(L);
    int m = 0;
    while (rest.xdeg_max() >= 1) {
      auto q = divides_linear(rest, l);
      if (!q) break;
      rest = *q;
      ++m;
    }
    if (m) res.linear_factors.push_back({l, m});
  }
  Rat c = rest.content();
  if (rest.lead().second.sign() < 0) c = -c;
  res.unit = c;
  res.residual = rest.scale(c.inv());
  return res;
}

// ---------- quadratic forms ----------

Mat gram(const Poly& q) {
  Mat m(4, 4);
  for (const auto& [mo, c] : q.terms()) {
    if (mo.xdeg() != 2 || !mo.coeff_part().is_one()) throw std::invalid_argument("gram: not a rational quadric");
    int i = -1, j = -1;
    for (int k = 0; k < 4; ++k)
      for (int r = 0; r < mo[k]; ++r) (i < 0 ? i : j) = k;
    if (i == j)
      m(i, i) = c;
    else
      m(i, j) = m(j, i) = c / Rat(2);
  }
  return m;
}

Poly from_gram(const Mat& m) {
  Poly q;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      Rat c = i == j ? m(i, i) : m(i, j) + m(j, i);
      if (!c.is_zero()) q += Poly::monomial(Mono::var(i) * Mono::var(j), c);
    }
  return q;
}

int quad_rank(const Poly& q, int nvars) {
  (void)nvars;  // the 3-variable case has a zero row in the 4x4 Gram matrix
  return rank(gram(q));
}

Poly compose_form(const Poly& f, const Tuple4& phi) { return f.subst_x(phi); }

Tuple4 compose(const Tuple4& f, const Tuple4& g) {
  Tuple4 r;
  for (int i = 0; i < 4; ++i) r[i] = f[i].subst_x(g);
  return r;
}

namespace {
const int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
}

std::vector<Poly> cross_minors_serial(const Tuple4& a, const Tuple4& b) {
  std::vector<Poly> m(6);
  for (int k = 0; k < 6; ++k) {
    int i = kPairs[k][0], j = kPairs[k][1];
    m[k] = a[i] * b[j] - a[j] * b[i];
  }
  return m;
}

std::vector<Poly> cross_minors_parallel(const Tuple4& a, const Tuple4& b) {
  std::vector<Poly> m(6);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < 6; ++k) {
    int i = kPairs[k][0], j = kPairs[k][1];
    m[k] = mul_serial(a[i], b[j]) - mul_serial(a[j], b[i]);
  }
  return m;
}

bool cross_minors_zero(const Tuple4& a, const Tuple4& b) {
  for (const auto& m : cross_minors_parallel(a, b))
    if (!m.is_zero()) return false;
  return true;
}

std::optional<Poly> first_nonzero_minor(const Tuple4& a, const Tuple4& b) {
  for (auto& m : cross_minors_parallel(a, b))
    if (!m.is_zero()) return m;
  return std::nullopt;
}

}  // namespace cr3
