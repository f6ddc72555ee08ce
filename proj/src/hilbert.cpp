#include "spinob/hilbert.hpp"

#include <algorithm>

#include "spinob/error.hpp"
#include "spinob/integer.hpp"

namespace spinob {

int legendre(const mpz_class& a, long p) {
  mpz_class pp(p);
  return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

namespace {

// Split a squarefree integer as p^alpha * u.
void split(const mpz_class& a, long p, int& alpha, mpz_class& u) {
  alpha = mpz_divisible_ui_p(a.get_mpz_t(), p) ? 1 : 0;
  u = alpha ? mpz_class(a / p) : a;
}

int eps2(const mpz_class& u) {
  long r = mpz_fdiv_ui(u.get_mpz_t(), 8);
  return ((r - 1) / 2) % 2;
}

int omega2(const mpz_class& u) {
  long r = mpz_fdiv_ui(u.get_mpz_t(), 8);
  return ((r * r - 1) / 8) % 2;
}

}  // namespace

int hilbert_symbol(const mpq_class& a, const mpq_class& b, long place) {
  ensure(a != 0 && b != 0, ErrorCode::ZeroInput, "Hilbert symbol of zero");
  mpz_class sa = squarefree_part(a), sb = squarefree_part(b);
  if (place == kRealPlace) return (sa < 0 && sb < 0) ? -1 : 1;
  ensure(place > 1 && is_prime(place), ErrorCode::InvalidConfig, std::to_string(place) + " is not a place of Q");
  int alpha, beta;
  mpz_class u, v;
  split(sa, place, alpha, u);
  split(sb, place, beta, v);
  if (place == 2) {
    int e = eps2(u) * eps2(v) + alpha * omega2(v) + beta * omega2(u);
    return e % 2 ? -1 : 1;
  }
  int s = (alpha * beta * ((place - 1) / 2)) % 2 ? -1 : 1;
  if (beta) s *= legendre(u, place);
  if (alpha) s *= legendre(v, place);
  return s;
}

std::vector<long> relevant_places(const mpq_class& a, const mpq_class& b) {
  std::vector<long> places{2};
  for (const auto& x : {squarefree_part(a), squarefree_part(b)})
    for (const auto& p : prime_divisors(x)) {
      ensure(p.fits_slong_p(), ErrorCode::InvalidConfig, "prime too large for a place index");
      places.push_back(p.get_si());
    }
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  places.push_back(kRealPlace);
  return places;
}

std::vector<long> ramified_places(const mpq_class& a, const mpq_class& b) {
  std::vector<long> out;
  for (long v : relevant_places(a, b))
    if (hilbert_symbol(a, b, v) == -1) out.push_back(v);
  return out;
}

bool binary_form_represents(const mpq_class& a, const mpq_class& b, const mpq_class& c) {
  ensure(a != 0 && b != 0 && c != 0, ErrorCode::ZeroInput, "binary form with a zero coefficient");
  if (is_rational_square(-a * b)) return true;
  return ramified_places(a * c, b * c).empty();
}

bool is_local_square(const mpq_class& x, long place) {
  ensure(x != 0, ErrorCode::ZeroInput, "square test of zero");
  if (place == kRealPlace) return x > 0;
  mpz_class s = squarefree_part(x);
  if (mpz_divisible_ui_p(s.get_mpz_t(), place)) return false;
  if (place == 2) return mpz_fdiv_ui(s.get_mpz_t(), 8) == 1;
  return legendre(s, place) == 1;
}

bool locally_represents(const std::vector<mpq_class>& a, const mpq_class& c, long place) {
  ensure(!a.empty() && c != 0, ErrorCode::ZeroInput, "representation by an empty form or of zero");
  std::size_t n = a.size();
  if (place == kRealPlace) return std::any_of(a.begin(), a.end(), [&](const mpq_class& x) { return sgn(x) == sgn(c); });
  if (n >= 4) return true;
  mpq_class d = 1;
  int eps = 1;
  for (std::size_t i = 0; i < n; ++i) {
    d *= a[i];
    for (std::size_t j = i + 1; j < n; ++j) eps *= hilbert_symbol(a[i], a[j], place);
  }
  switch (n) {
    case 1: return is_local_square(c / d, place);
    case 2: return hilbert_symbol(c, -d, place) == eps;
    default: return !is_local_square(-c / d, place) || hilbert_symbol(-1, -d, place) == eps;
  }
}

bool form_represents(const std::vector<mpq_class>& a, const mpq_class& c) {
  std::vector<long> places{2};
  for (const auto& x : a)
    for (long p : relevant_places(x, c)) places.push_back(p);
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  return std::all_of(places.begin(), places.end(), [&](long v) { return locally_represents(a, c, v); });
}

}  // namespace spinob
