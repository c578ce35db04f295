#include "cremona3/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cr3 {

bool Mono::is_one() const {
  for (auto v : e)
    if (v) return false;
  return true;
}

bool Mono::nonneg() const {
  for (auto v : e)
    if (v < 0) return false;
  return true;
}

Mono Mono::operator*(const Mono& o) const {
  Mono r;
  for (int i = 0; i < kVars; ++i) {
    int s = e[i] + o.e[i];
    if (s > 127 || s < -127) throw std::overflow_error("Mono: exponent overflow");
    r.e[i] = (int8_t)s;
  }
  return r;
}

bool Mono::divides(const Mono& o) const {
  for (int i = 0; i < kVars; ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

Mono Mono::operator/(const Mono& o) const {
  Mono r;
  for (int i = 0; i < kVars; ++i) r.e[i] = (int8_t)(e[i] - o.e[i]);
  return r;
}

Mono Mono::x_part() const {
  Mono r;
  for (int i = 0; i < kX; ++i) r.e[i] = e[i];
  return r;
}

Mono Mono::coeff_part() const {
  Mono r = *this;
  for (int i = 0; i < kX; ++i) r.e[i] = 0;
  return r;
}

size_t MonoHash::operator()(const Mono& m) const {
  uint64_t w[3];
  static_assert(sizeof(m.e) == sizeof(w));
  std::memcpy(w, m.e.data(), sizeof(w));
  uint64_t h = w[0] * 0x9E3779B97F4A7C15ULL;
  h ^= (w[1] + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2));
  h ^= (w[2] + 0x94D049BB133111EBULL + (h << 6) + (h >> 2));
  return (size_t)(h ^ (h >> 31));
}

// ---------------- Universe ----------------

int Universe::add(const Symbol& s) {
  int f = find(s.name);
  if (f >= 0) return f;
  if (kX + (int)syms_.size() >= kVars) throw std::length_error("Universe: too many symbols");
  syms_.push_back(s);
  return kX + (int)syms_.size() - 1;
}

int Universe::find(const std::string& name) const {
  for (size_t i = 0; i < syms_.size(); ++i)
    if (syms_[i].name == name) return kX + (int)i;
  return -1;
}

int Universe::var(const std::string& name) const {
  int f = find(name);
  if (f < 0) throw std::out_of_range("Universe: unknown symbol " + name);
  return f;
}

std::string Universe::var_name(int v) const {
  if (v < kX) return "x" + std::to_string(v);
  if (v - kX < (int)syms_.size()) return syms_[v - kX].name;
  return "z" + std::to_string(v);
}

bool Universe::operator==(const Universe& o) const {
  if (syms_.size() != o.syms_.size()) return false;
  for (size_t i = 0; i < syms_.size(); ++i)
    if (syms_[i].name != o.syms_[i].name || syms_[i].kind != o.syms_[i].kind ||
        syms_[i].label != o.syms_[i].label || syms_[i].slot != o.syms_[i].slot)
      return false;
  return true;
}

std::string Universe::time_name(int slot) {
  static const char* n[] = {"t", "s", "t'"};
  return n[slot];
}

std::string Universe::gen_name(const std::string& label, int slot) {
  static const char* p[] = {"u_", "v_", "w_"};
  return p[slot] + label;
}

int Universe::time(int slot) {
  return add(Symbol{time_name(slot), SymKind::Time, time_name(slot), slot});
}

int Universe::gen(const std::string& label, int slot) {
  return add(Symbol{gen_name(label, slot), SymKind::Gen, label, slot});
}

// ---------------- Poly ----------------

namespace {
std::atomic<size_t> g_par_threshold{1u << 16};

bool desc(const Poly::Term& a, const Poly::Term& b) { return b.first < a.first; }

std::vector<Poly::Term> merge_sorted(std::vector<Poly::Term>&& v) {
  std::sort(v.begin(), v.end(), desc);
  std::vector<Poly::Term> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
      if (out.back().second.is_zero()) out.pop_back();
    } else if (!t.second.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return out;
}
}  // namespace

void set_parallel_threshold(size_t n) { g_par_threshold = n; }
size_t parallel_threshold() { return g_par_threshold; }

Poly::Poly(const Rat& c) {
  if (!c.is_zero()) t_.emplace_back(Mono{}, c);
}

Poly Poly::monomial(const Mono& m, const Rat& c) {
  Poly p;
  if (!c.is_zero()) p.t_.emplace_back(m, c);
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  p.t_ = merge_sorted(std::move(terms));
  return p;
}

bool Poly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first.is_one()); }

Rat Poly::constant_term() const {
  if (!t_.empty() && t_.back().first.is_one()) return t_.back().second;
  return Rat(0);
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.second = -t.second;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.t_.reserve(a.t_.size() + b.t_.size());
  size_t i = 0, j = 0;
  while (i < a.t_.size() && j < b.t_.size()) {
    const auto& x = a.t_[i];
    const auto& y = b.t_[j];
    if (y.first < x.first) {
      r.t_.push_back(x);
      ++i;
    } else if (x.first < y.first) {
      r.t_.push_back(y);
      ++j;
    } else {
      Rat s = x.second + y.second;
      if (!s.is_zero()) r.t_.emplace_back(x.first, std::move(s));
      ++i, ++j;
    }
  }
  for (; i < a.t_.size(); ++i) r.t_.push_back(a.t_[i]);
  for (; j < b.t_.size(); ++j) r.t_.push_back(b.t_[j]);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly mul_serial(const Poly& a, const Poly& b) {
  if (a.t_.empty() || b.t_.empty()) return Poly();
  if (a.t_.size() == 1) return b.mul_mono(a.t_[0].first, a.t_[0].second);
  if (b.t_.size() == 1) return a.mul_mono(b.t_[0].first, b.t_[0].second);
  std::unordered_map<Mono, Rat, MonoHash> acc;
  acc.reserve(std::min<size_t>(a.t_.size() * b.t_.size(), 1u << 22));
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) {
      auto [it, fresh] = acc.try_emplace(x.first * y.first);
      if (fresh)
        it->second = x.second * y.second;
      else
        it->second += x.second * y.second;
    }
  std::vector<Poly::Term> v;
  v.reserve(acc.size());
  for (auto& kv : acc)
    if (!kv.second.is_zero()) v.emplace_back(kv.first, std::move(kv.second));
  std::sort(v.begin(), v.end(), desc);
  Poly r;
  r.t_ = std::move(v);
  return r;
}

Poly mul_parallel(const Poly& a, const Poly& b) {
#ifdef _OPENMP
  const Poly& big = a.size() >= b.size() ? a : b;
  const Poly& small = a.size() >= b.size() ? b : a;
  int nt = omp_get_max_threads();
  if (nt <= 1 || big.size() < 2) return mul_serial(a, b);
  int chunks = std::min<int>(nt * 2, (int)big.size());
  std::vector<Poly> part(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < chunks; ++c) {
    size_t lo = big.size() * c / chunks, hi = big.size() * (c + 1) / chunks;
    Poly piece;
    piece.t_.assign(big.t_.begin() + lo, big.t_.begin() + hi);
    part[c] = mul_serial(piece, small);
  }
  // pairwise tree merge, deterministic order
  for (int step = 1; step < chunks; step *= 2) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; c += 2 * step)
      if (c + step < chunks) part[c] = part[c] + part[c + step];
  }
  return part[0];
#else
  return mul_serial(a, b);
#endif
}

Poly operator*(const Poly& a, const Poly& b) {
#ifdef _OPENMP
  if (a.size() * b.size() >= g_par_threshold && !omp_in_parallel()) return mul_parallel(a, b);
#endif
  return mul_serial(a, b);
}

Poly Poly::scale(const Rat& c) const {
  if (c.is_zero()) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.second *= c;
  return r;
}

Poly Poly::mul_mono(const Mono& m, const Rat& c) const {
  if (c.is_zero()) return Poly();
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.emplace_back(t.first * m, t.second * c);
  return r;  // multiplication by a monomial preserves lex order
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly r(1), b(*this);
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].first != b.t_[i].first || a.t_[i].second != b.t_[i].second) return false;
  return true;
}

int Poly::xdeg_max() const {
  int d = -1;
  for (const auto& t : t_) d = std::max(d, t.first.xdeg());
  return d;
}

bool Poly::x_homogeneous(int d) const {
  for (const auto& t : t_)
    if (t.first.xdeg() != d) return false;
  return true;
}

bool Poly::x_free() const {
  for (const auto& t : t_)
    if (!t.first.x_free()) return false;
  return true;
}

bool Poly::uses_var(int v) const {
  for (const auto& t : t_)
    if (t.first[v]) return true;
  return false;
}

int Poly::max_exp(int v) const {
  int m = 0;
  bool first = true;
  for (const auto& t : t_) {
    if (first || t.first[v] > m) m = t.first[v];
    first = false;
  }
  return m;
}

int Poly::min_exp(int v) const {
  int m = 0;
  bool first = true;
  for (const auto& t : t_) {
    if (first || t.first[v] < m) m = t.first[v];
    first = false;
  }
  return m;
}

bool Poly::nonneg() const {
  for (const auto& t : t_)
    if (!t.first.nonneg()) return false;
  return true;
}

Poly Poly::x_coeff(const Mono& xm) const {
  std::vector<Term> v;
  for (const auto& t : t_)
    if (t.first.x_part() == xm) v.emplace_back(t.first.coeff_part(), t.second);
  Poly p;
  p.t_ = std::move(v);  // order preserved within fixed x-part
  return p;
}

std::vector<std::pair<Mono, Poly>> Poly::x_split() const {
  std::map<Mono, std::vector<Term>> g;
  for (const auto& t : t_) g[t.first.x_part()].emplace_back(t.first.coeff_part(), t.second);
  std::vector<std::pair<Mono, Poly>> out;
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    Poly p;
    p.t_ = std::move(it->second);
    out.emplace_back(it->first, std::move(p));
  }
  return out;
}

Poly Poly::subst(int v, const Poly& q) const {
  std::map<int, std::vector<Term>> by;
  for (const auto& t : t_) {
    Mono m = t.first;
    int k = m[v];
    m[v] = 0;
    by[k].emplace_back(m, t.second);
  }
  Poly r;
  std::map<int, Poly> pw;
  for (auto& [k, terms] : by) {
    if (k < 0) throw std::domain_error("Poly::subst: negative exponent");
    auto it = pw.find(k);
    if (it == pw.end()) it = pw.emplace(k, q.pow(k)).first;
    r += Poly::from_terms(std::move(terms)) * it->second;
  }
  return r;
}

Poly Poly::subst_x(const std::array<Poly, 4>& im) const {
  std::map<Mono, Poly> cache;
  auto image_of = [&](const Mono& xm) -> const Poly& {
    auto it = cache.find(xm);
    if (it != cache.end()) return it->second;
    Poly r(1);
    for (int i = 0; i < kX; ++i)
      if (xm[i]) r = r * im[i].pow(xm[i]);
    return cache.emplace(xm, std::move(r)).first->second;
  };
  Poly r;
  for (const auto& [xm, c] : x_split()) r += c * image_of(xm);
  return r;
}

Poly Poly::eval(const std::vector<std::pair<int, Rat>>& assign) const {
  std::vector<Term> v;
  v.reserve(t_.size());
  for (const auto& t : t_) {
    Mono m = t.first;
    Rat c = t.second;
    for (const auto& [var, val] : assign) {
      int k = m[var];
      if (k) {
        c *= val.pow(k);
        m[var] = 0;
      }
    }
    if (!c.is_zero()) v.emplace_back(m, std::move(c));
  }
  return from_terms(std::move(v));
}

Poly Poly::map_mono(const std::function<Poly(const Mono&)>& f) const {
  Poly r;
  for (const auto& t : t_) r += f(t.first).scale(t.second);
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& g) const {
  if (g.is_zero()) throw std::domain_error("divide_exact: zero divisor");
  if (is_zero()) return Poly();
  const Mono& lm = g.t_[0].first;
  const Rat lc_inv = g.t_[0].second.inv();
  std::map<Mono, Rat, std::greater<Mono>> rem;
  for (const auto& t : t_) rem.emplace(t.first, t.second);
  Poly q;
  size_t guard = 0;
  const size_t limit = 4 * (t_.size() + 16) * (g.t_.size() + 1) + 1000000;
  while (!rem.empty()) {
    if (++guard > limit) return std::nullopt;
    auto it = rem.begin();
    if (!lm.divides(it->first)) return std::nullopt;
    Mono qm = it->first / lm;
    if (!qm.nonneg() && nonneg() && g.nonneg()) return std::nullopt;
    Rat qc = it->second * lc_inv;
    for (const auto& gt : g.t_) {
      Mono m = gt.first * qm;
      Rat c = gt.second * qc;
      auto [jt, fresh] = rem.try_emplace(m);
      if (fresh)
        jt->second = -c;
      else {
        jt->second -= c;
        if (jt->second.is_zero()) rem.erase(jt);
      }
    }
    q.t_.emplace_back(qm, std::move(qc));
  }
  return q;
}

Rat Poly::content() const {
  if (t_.empty()) return Rat(0);
  mpz_class g = 0, l = 1;
  for (const auto& t : t_) {
    mpz_class n = t.second.num(), d = t.second.den();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return Rat(mpq_class(g, l));
}

Poly Poly::primitive() const {
  if (t_.empty()) return *this;
  Rat c = content();
  if (t_[0].second.sign() < 0) c = -c;
  return scale(c.inv());
}

Poly Poly::monic() const {
  if (t_.empty()) return *this;
  return scale(t_[0].second.inv());
}

std::string Poly::str(const Universe* u) const {
  if (t_.empty()) return "0";
  // print in graded order: total x-degree desc then storage order
  std::vector<const Term*> ord;
  for (const auto& t : t_) ord.push_back(&t);
  std::stable_sort(ord.begin(), ord.end(), [](const Term* a, const Term* b) {
    int da = 0, db = 0;
    for (int i = 0; i < kVars; ++i) da += a->first[i], db += b->first[i];
    return da > db;
  });
  std::ostringstream os;
  bool first = true;
  for (const Term* t : ord) {
    Rat c = t->second;
    bool neg = c.sign() < 0;
    if (neg) c = -c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool unit = t->first.is_one();
    if (!c.is_one() || unit) {
      os << c.str();
      if (!unit) os << "*";
    }
    bool firstv = true;
    for (int j = 0; j < kVars; ++j) {
      int i = (j + kX) % kVars;  // coefficient symbols first
      int k = t->first[i];
      if (!k) continue;
      if (!firstv) os << "*";
      firstv = false;
      os << (u ? u->var_name(i) : (i < kX ? "x" + std::to_string(i) : "z" + std::to_string(i)));
      if (k != 1) os << "^" << k;
    }
  }
  return os.str();
}

}  // namespace cr3
