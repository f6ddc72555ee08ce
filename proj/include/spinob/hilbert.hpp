#pragma once

#include <gmpxx.h>

#include <vector>

namespace spinob {

// Places of Q: a prime p, or kRealPlace for the archimedean one.
constexpr long kRealPlace = 0;

// Local Hilbert symbol (a, b)_v in {+1, -1} for nonzero rationals.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, long place);
// Legendre symbol (a / p) for odd p not dividing a.
int legendre(const mpz_class& a, long p);
// Places where (a, b) is ramified, primes ascending, kRealPlace last.
std::vector<long> ramified_places(const mpq_class& a, const mpq_class& b);
// Primes dividing 2ab plus the real place: the only candidates for ramification.
std::vector<long> relevant_places(const mpq_class& a, const mpq_class& b);
// a x^2 + b y^2 = c has a rational solution (Hasse-Minkowski for binary forms).
bool binary_form_represents(const mpq_class& a, const mpq_class& b, const mpq_class& c);

// x is a square in Q_v.
bool is_local_square(const mpq_class& x, long place);
// <a_1, ..., a_n> represents c over Q_v.
bool locally_represents(const std::vector<mpq_class>& a, const mpq_class& c, long place);
// <a_1, ..., a_n> represents c over Q: locally everywhere (Hasse-Minkowski).
bool form_represents(const std::vector<mpq_class>& a, const mpq_class& c);

}  // namespace spinob
