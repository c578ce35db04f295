#include "cremona3/numth.hpp"

#include <algorithm>
#include <stdexcept>

namespace cr3 {

namespace {

mpz_class pollard_brent(const mpz_class& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  mpz_class y = seed % n, c = (seed * 7 + 1) % n, m = 64, g = 1, r = 1, q = 1, x, ys;
  if (c == 0) c = 1;
  auto f = [&](const mpz_class& v) { return mpz_class((v * v + c) % n); };
  while (g == 1) {
    x = y;
    for (mpz_class i = 0; i < r; ++i) y = f(y);
    mpz_class k = 0;
    while (k < r && g == 1) {
      ys = y;
      mpz_class lim = std::min(m, mpz_class(r - k));
      for (mpz_class i = 0; i < lim; ++i) {
        y = f(y);
        q = (q * abs(x - y)) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      mpz_class d = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void factor_rec(const mpz_class& n, std::map<mpz_class, int>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    out[n]++;
    return;
  }
  for (unsigned long s = 2;; ++s) {
    mpz_class d = pollard_brent(n, s);
    if (d != n && d != 1) {
      factor_rec(d, out);
      factor_rec(n / d, out);
      return;
    }
  }
}

}  // namespace

std::map<mpz_class, int> factor_int(const mpz_class& n0) {
  if (n0 == 0) throw std::domain_error("factor_int(0)");
  mpz_class n = abs(n0);
  std::map<mpz_class, int> out;
  for (unsigned long p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out[mpz_class(p)]++;
      n /= p;
    }
  }
  factor_rec(n, out);
  return out;
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> d{1};
  for (auto& [p, e] : factor_int(n)) {
    size_t k = d.size();
    mpz_class pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (size_t j = 0; j < k; ++j) d.push_back(d[j] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::optional<mpz_class> exact_sqrt(const mpz_class& n) {
  if (n < 0) return std::nullopt;
  mpz_class r = sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

std::optional<mpz_class> sqrt_mod_prime(const mpz_class& a0, const mpz_class& p) {
  mpz_class a = ((a0 % p) + p) % p;
  if (a == 0) return mpz_class(0);
  if (p == 2) return a;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
  // Tonelli-Shanks
  mpz_class q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) q /= 2, ++s;
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  mpz_class m = s, c, t, r, e;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  while (t != 1) {
    unsigned long i = 0;
    mpz_class tt = t;
    while (tt != 1) tt = tt * tt % p, ++i;
    mpz_class b = c;
    for (unsigned long j = 0; j + i + 1 < m.get_ui(); ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

std::optional<mpz_class> sqrt_mod(const mpz_class& a, const mpz_class& n0) {
  mpz_class n = abs(n0);
  if (n == 1) return mpz_class(0);
  mpz_class x = 0, mod = 1;
  for (auto& [p, e] : factor_int(n)) {
    if (e != 1) throw std::domain_error("sqrt_mod: modulus not squarefree");
    auto r = sqrt_mod_prime(a, p);
    if (!r) return std::nullopt;
    // CRT: x = x mod `mod`, x = r mod p
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), mod.get_mpz_t(), p.get_mpz_t());
    mpz_class k = ((*r - x) % p + p) % p * inv % p;
    x += mod * k;
    mod *= p;
  }
  return x;
}

std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n) {
  if (n == 0) return {0, 1};
  mpz_class s = n < 0 ? -1 : 1, k = 1;
  for (auto& [p, e] : factor_int(n)) {
    for (int i = 0; i < e / 2; ++i) k *= p;
    if (e % 2) s *= p;
  }
  return {s, k};
}

}  // namespace cr3
