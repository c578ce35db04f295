#pragma once
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "cremona3/poly.hpp"

namespace cr3 {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseEnv {
  // resolves identifiers other than x0..x3; nullopt -> error
  std::function<std::optional<Poly>(const std::string&)> ident;
  // E(<text>) hook; absent -> E is an ordinary identifier
  std::function<Poly(const std::string&)> exp;
};

Poly parse_poly(const std::string& text, const ParseEnv& env);
Poly parse_poly(const std::string& text);  // x0..x3 and rationals only
// symbols from the universe, adding unknown names as parameters
Poly parse_poly(const std::string& text, Universe& u);

}  // namespace cr3
