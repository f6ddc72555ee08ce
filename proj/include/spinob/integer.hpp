#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace spinob {

// Prime factorization of |n| (n != 0) in increasing prime order.
// Trial division followed by Pollard rho on the cofactor.
std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n);

std::vector<mpz_class> prime_divisors(const mpz_class& n);

// Squarefree integer s with n = s * t^2, sign(s) = sign(n).
mpz_class squarefree_part(const mpz_class& n);

// Squarefree integer in the class of a nonzero rational modulo Q*^2.
mpz_class squarefree_part(const mpq_class& x);

// Integer in the class of a nonzero rational modulo Q*^2 with the square factors of
// primes below the trial bound removed; squarefree when the cofactor is 1, prime or a square.
mpz_class partial_squarefree_part(const mpq_class& x);

bool is_rational_square(const mpq_class& x);

// Nonnegative rational square root when it exists.
bool rational_sqrt(const mpq_class& x, mpq_class& root);

bool is_prime(long n);

// x^2 + y^2 = p for a prime p = 1 mod 4 (Cornacchia).
std::pair<mpz_class, mpz_class> two_squares_prime(const mpz_class& p);
// x^2 + y^2 = n >= 0 when possible, through the Gaussian factorization of n.
bool two_squares(const mpz_class& n, mpz_class& x, mpz_class& y);

// p-adic valuation of a nonzero rational.
long valuation(const mpq_class& x, const mpz_class& p);

}  // namespace spinob
