#pragma once
#include <gmpxx.h>

#include <map>
#include <optional>
#include <vector>

namespace cr3 {

// prime factorization of |n| (n != 0): trial division then Pollard-Brent
std::map<mpz_class, int> factor_int(const mpz_class& n);
std::vector<mpz_class> divisors(const mpz_class& n);  // positive divisors of |n|, sorted
std::optional<mpz_class> exact_sqrt(const mpz_class& n);
// x with x^2 = a mod p, p an odd prime, a a QR
std::optional<mpz_class> sqrt_mod_prime(const mpz_class& a, const mpz_class& p);
// x with x^2 = a mod n for squarefree odd/even n, via CRT; none if not a square
std::optional<mpz_class> sqrt_mod(const mpz_class& a, const mpz_class& n);
// squarefree part: n = s * k^2
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n);

}  // namespace cr3
