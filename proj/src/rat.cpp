#include "cremona3/rat.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cr3 {

namespace {
using i128 = __int128;

bool fits(i128 v) { return v >= INT64_MIN + 1 && v <= INT64_MAX; }

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class z_from(long long v) {
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), v);
  return z;
}

mpz_class z_from128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
  mpz_class hi, lo;
  mpz_set_ui(hi.get_mpz_t(), (unsigned long)(u >> 64));
  mpz_set_ui(lo.get_mpz_t(), (unsigned long)(u & 0xffffffffffffffffULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}
}  // namespace

Rat::Rat(long long n, long long d) {
  if (d == 0) throw std::domain_error("Rat: zero denominator");
  i128 nn = n, dd = d;
  if (dd < 0) nn = -nn, dd = -dd;
  i128 g = gcd128(nn, dd);
  if (g > 1) nn /= g, dd /= g;
  if (fits(nn) && fits(dd)) {
    n_ = (long long)nn;
    d_ = (long long)dd;
  } else {
    mpq_class q(z_from128(nn), z_from128(dd));
    q.canonicalize();
    set_big(q);
  }
}

Rat::Rat(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  set_big(c);
}

void Rat::set_big(const mpq_class& q) {
  const mpz_class& nz = q.get_num();
  const mpz_class& dz = q.get_den();
  if (mpz_fits_slong_p(nz.get_mpz_t()) && mpz_fits_slong_p(dz.get_mpz_t())) {
    long nv = mpz_get_si(nz.get_mpz_t());
    long dv = mpz_get_si(dz.get_mpz_t());
    if (nv != INT64_MIN) {
      n_ = nv;
      d_ = dv;
      big_.reset();
      return;
    }
  }
  n_ = 0;
  d_ = 1;
  big_ = std::make_unique<mpq_class>(q);
}

Rat Rat::parse(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rat: cannot parse '" + s + "'");
  if (q.get_den() == 0) throw std::domain_error("Rat: zero denominator");
  return Rat(q);
}

bool Rat::is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }

int Rat::sign() const {
  if (big_) return sgn(*big_);
  return (n_ > 0) - (n_ < 0);
}

mpq_class Rat::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(z_from(n_), z_from(d_));
}
mpz_class Rat::num() const { return big_ ? big_->get_num() : z_from(n_); }
mpz_class Rat::den() const { return big_ ? big_->get_den() : z_from(d_); }

double Rat::to_double() const { return big_ ? big_->get_d() : (double)n_ / (double)d_; }

long double Rat::to_ldouble() const {
  if (!big_) return (long double)n_ / (long double)d_;
  // scale to keep precision for huge parts
  long en, ed;
  double mn = mpz_get_d_2exp(&en, big_->get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, big_->get_den_mpz_t());
  return std::ldexp((long double)mn / (long double)md, (int)(en - ed));
}

std::string Rat::str() const {
  if (big_) return big_->get_str();
  if (d_ == 1) return std::to_string(n_);
  return std::to_string(n_) + "/" + std::to_string(d_);
}

Rat Rat::operator-() const {
  if (big_) return Rat(mpq_class(-*big_));
  Rat r;
  r.n_ = -n_;
  r.d_ = d_;
  return r;
}

Rat Rat::inv() const {
  if (is_zero()) throw std::domain_error("Rat: inverse of zero");
  if (big_) return Rat(mpq_class(1 / *big_));
  return Rat(d_, n_);
}

Rat operator+(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    if (a.d_ == 1 && b.d_ == 1) {
      i128 s = (i128)a.n_ + b.n_;
      if (fits(s)) return Rat((long long)s);
    }
    i128 n = (i128)a.n_ * b.d_ + (i128)b.n_ * a.d_;
    i128 d = (i128)a.d_ * b.d_;
    // both |a.n*b.d| and |d| < 2^126, safe
    i128 g = gcd128(n, d);
    if (g > 1) n /= g, d /= g;
    Rat r;
    if (fits(n) && fits(d)) {
      r.n_ = (long long)n;
      r.d_ = (long long)d;
    } else {
      r.set_big(mpq_class(z_from128(n), z_from128(d)));
    }
    return r;
  }
  Rat r;
  r.set_big(a.to_mpq() + b.to_mpq());
  return r;
}

Rat& Rat::operator+=(const Rat& b) { return *this = *this + b; }

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    if (a.d_ == 1 && b.d_ == 1) {
      i128 p = (i128)a.n_ * b.n_;
      if (fits(p)) return Rat((long long)p);
      Rat r;
      r.set_big(mpq_class(z_from128(p)));
      return r;
    }
    long long g1 = std::gcd(a.n_, b.d_);
    long long g2 = std::gcd(b.n_, a.d_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    i128 n = (i128)(a.n_ / g1) * (b.n_ / g2);
    i128 d = (i128)(a.d_ / g2) * (b.d_ / g1);
    Rat r;
    if (fits(n) && fits(d)) {
      r.n_ = (long long)n;
      r.d_ = (long long)d;
    } else {
      r.set_big(mpq_class(z_from128(n), z_from128(d)));
    }
    return r;
  }
  Rat r;
  r.set_big(a.to_mpq() * b.to_mpq());
  return r;
}

Rat operator/(const Rat& a, const Rat& b) { return a * b.inv(); }

bool operator==(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: big only when it does not fit
}

bool operator<(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) return (i128)a.n_ * b.d_ < (i128)b.n_ * a.d_;
  return a.to_mpq() < b.to_mpq();
}

Rat Rat::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  Rat r(1), b(*this);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace cr3
