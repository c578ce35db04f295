#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>

namespace cr3 {

// Exact rational. Values whose numerator and denominator fit in int64 stay
// on a fast path; anything larger lives in an mpq_class.
class Rat {
 public:
  Rat() = default;
  Rat(long long n) : n_(n) {}  // NOLINT
  Rat(int n) : n_(n) {}        // NOLINT
  Rat(long long n, long long d);
  explicit Rat(const mpq_class& q);
  explicit Rat(const mpz_class& z) : Rat(mpq_class(z)) {}
  static Rat parse(const std::string& s);  // "3", "-2/5"

  Rat(const Rat& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rat(Rat&&) noexcept = default;
  Rat& operator=(const Rat& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rat& operator=(Rat&&) noexcept = default;

  bool is_zero() const { return !big_ && n_ == 0; }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  bool is_small() const { return !big_; }
  bool is_integer() const;
  int sign() const;

  mpq_class to_mpq() const;
  mpz_class num() const;
  mpz_class den() const;
  double to_double() const;
  long double to_ldouble() const;
  std::string str() const;

  // small-path accessors; valid only when is_small()
  long long small_num() const { return n_; }
  long long small_den() const { return d_; }

  Rat operator-() const;
  Rat inv() const;
  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);
  Rat& operator+=(const Rat& b);
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }
  friend bool operator==(const Rat& a, const Rat& b);
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b);
  Rat pow(int e) const;
  Rat abs() const { return sign() < 0 ? -*this : *this; }

 private:
  void set_big(const mpq_class& q);  // demotes to small when it fits
  long long n_ = 0;
  long long d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace cr3
