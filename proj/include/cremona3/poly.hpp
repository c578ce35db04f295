#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cremona3/rat.hpp"

namespace cr3 {

constexpr int kVars = 24;  // x0..x3 then up to 20 coefficient symbols
constexpr int kX = 4;

struct Mono {
  std::array<int8_t, kVars> e{};

  int8_t operator[](int i) const { return e[i]; }
  int8_t& operator[](int i) { return e[i]; }
  int xdeg() const { return e[0] + e[1] + e[2] + e[3]; }
  bool x_free() const { return !e[0] && !e[1] && !e[2] && !e[3]; }
  bool is_one() const;
  bool nonneg() const;
  Mono operator*(const Mono& o) const;
  bool divides(const Mono& o) const;
  Mono operator/(const Mono& o) const;
  Mono x_part() const;
  Mono coeff_part() const;
  friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }
  friend bool operator!=(const Mono& a, const Mono& b) { return a.e != b.e; }
  // lex with x0 largest; descending order is the storage order
  friend bool operator<(const Mono& a, const Mono& b) { return a.e < b.e; }
  friend bool operator>(const Mono& a, const Mono& b) { return b.e < a.e; }
  static Mono var(int i, int k = 1) {
    Mono m;
    m.e[i] = (int8_t)k;
    return m;
  }
  static Mono x(int a, int b, int c, int d) {
    Mono m;
    m.e[0] = (int8_t)a, m.e[1] = (int8_t)b, m.e[2] = (int8_t)c, m.e[3] = (int8_t)d;
    return m;
  }
};

struct MonoHash {
  size_t operator()(const Mono& m) const;
};

enum class SymKind { Time, Gen, Param };

struct Symbol {
  std::string name;   // internal name, unique
  SymKind kind = SymKind::Param;
  std::string label;  // rate label for generators, time name for Time
  int slot = 0;       // 0: t, 1: s, 2: t'
};

// Symbol table for the coefficient variables (indices kX..kVars-1).
class Universe {
 public:
  int add(const Symbol& s);  // returns variable index, reuses existing name
  int find(const std::string& name) const;  // -1 if absent
  int var(const std::string& name) const;   // throws if absent
  const Symbol& sym(int var) const { return syms_.at(var - kX); }
  int size() const { return (int)syms_.size(); }
  const std::vector<Symbol>& symbols() const { return syms_; }
  std::string var_name(int var) const;
  bool operator==(const Universe& o) const;

  static std::string time_name(int slot);
  static std::string gen_name(const std::string& label, int slot);
  int time(int slot);  // adds if missing
  int gen(const std::string& label, int slot);

 private:
  std::vector<Symbol> syms_;
};

class Poly {
 public:
  using Term = std::pair<Mono, Rat>;
  Poly() = default;
  Poly(const Rat& c);  // NOLINT
  Poly(long long c) : Poly(Rat(c)) {}  // NOLINT
  Poly(int c) : Poly(Rat(c)) {}        // NOLINT
  static Poly var(int i) { return monomial(Mono::var(i), Rat(1)); }
  static Poly x(int i) { return var(i); }
  static Poly monomial(const Mono& m, const Rat& c);
  static Poly from_terms(std::vector<Term> terms);  // sorts and merges

  const std::vector<Term>& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Rat constant_term() const;
  const Term& lead() const { return t_.front(); }

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }
  Poly scale(const Rat& c) const;
  Poly mul_mono(const Mono& m, const Rat& c) const;
  Poly pow(int e) const;
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // structure
  int xdeg_max() const;
  bool x_homogeneous(int d) const;
  bool x_free() const;
  bool uses_var(int v) const;
  int max_exp(int v) const;
  int min_exp(int v) const;
  bool nonneg() const;
  // coefficient (in the coefficient ring) of an x-monomial
  Poly x_coeff(const Mono& xm) const;
  std::vector<std::pair<Mono, Poly>> x_split() const;  // by x-part, ordered

  // substitution and evaluation
  Poly subst(int v, const Poly& q) const;
  Poly subst_x(const std::array<Poly, 4>& images) const;  // x_i -> images[i]
  Poly eval(const std::vector<std::pair<int, Rat>>& assign) const;  // partial
  Poly map_mono(const std::function<Poly(const Mono&)>& f) const;

  std::optional<Poly> divide_exact(const Poly& g) const;
  Rat content() const;  // positive gcd of numerators / lcm of denominators
  Poly primitive() const;  // content 1, leading coefficient positive
  Poly monic() const;      // leading coefficient 1

  std::string str(const Universe* u = nullptr) const;

 private:
  std::vector<Term> t_;  // strictly descending in Mono order
  friend Poly mul_serial(const Poly& a, const Poly& b);
  friend Poly mul_parallel(const Poly& a, const Poly& b);
};

Poly mul_serial(const Poly& a, const Poly& b);
Poly mul_parallel(const Poly& a, const Poly& b);
// work threshold (|a|*|b|) above which operator* uses the parallel kernel
void set_parallel_threshold(size_t n);
size_t parallel_threshold();

using HForm = Poly;     // homogeneous in x0..x3
using CoeffPoly = Poly;  // no x variables

}  // namespace cr3
