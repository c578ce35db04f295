#include "cremona3/expr.hpp"

#include <cctype>

namespace cr3 {

namespace {

class Parser {
 public:
  Parser(const std::string& s, const ParseEnv& env) : s_(s), env_(env) {}

  Poly run() {
    Poly p = sum();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  const std::string& s_;
  const ParseEnv& env_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(i_) + " in '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Poly sum() {
    Poly acc;
    bool neg = false;
    skip();
    if (eat('-'))
      neg = true;
    else
      eat('+');
    acc = product();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+'))
        acc += product();
      else if (eat('-'))
        acc -= product();
      else
        return acc;
    }
  }

  Poly product() {
    Poly acc = power();
    for (;;) {
      if (eat('*')) {
        acc = acc * power();
      } else if (eat('/')) {
        Poly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
        acc = acc.scale(d.constant_term().inv());
      } else {
        return acc;
      }
    }
  }

  Poly power() {
    Poly b = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
      if (st == i_) fail("exponent expected");
      int e = std::stoi(s_.substr(st, i_ - st));
      if (neg) {
        if (b.size() != 1) fail("negative power of a non-monomial");
        Mono m;
        for (int k = 0; k < kVars; ++k) m[k] = (int8_t)(-b.lead().first[k] * e);
        return Poly::monomial(m, b.lead().second.pow(-e));
      }
      return b.pow(e);
    }
    return b;
  }

  Poly atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Poly p = sum();
      if (!eat(')')) fail("')' expected");
      return p;
    }
    if (c == '-') {  // unary minus inside products, e.g. 2*-x
      ++i_;
      return -power();
    }
    if (std::isdigit((unsigned char)c)) {
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
      return Poly(Rat(mpq_class(mpz_class(s_.substr(st, i_ - st)))));
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t st = i_;
      while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_' || s_[i_] == '\''))
        ++i_;
      std::string name = s_.substr(st, i_ - st);
      if (name == "E" && env_.exp) {
        skip();
        if (i_ >= s_.size() || s_[i_] != '(') fail("E( expected");
        int depth = 0;
        size_t a = i_ + 1;
        for (; i_ < s_.size(); ++i_) {
          if (s_[i_] == '(') ++depth;
          if (s_[i_] == ')' && --depth == 0) break;
        }
        if (i_ >= s_.size()) fail("unbalanced E(");
        std::string inner = s_.substr(a, i_ - a);
        ++i_;
        return env_.exp(inner);
      }
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3') return Poly::x(name[1] - '0');
      if (env_.ident)
        if (auto p = env_.ident(name)) return *p;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Poly parse_poly(const std::string& text, const ParseEnv& env) { return Parser(text, env).run(); }

Poly parse_poly(const std::string& text) { return parse_poly(text, ParseEnv{}); }

Poly parse_poly(const std::string& text, Universe& u) {
  ParseEnv env;
  env.ident = [&u](const std::string& n) -> std::optional<Poly> {
    int v = u.find(n);
    if (v < 0) v = u.add(Symbol{n, n == "t" ? SymKind::Time : SymKind::Param, n, 0});
    return Poly::var(v);
  };
  return parse_poly(text, env);
}

}  // namespace cr3
