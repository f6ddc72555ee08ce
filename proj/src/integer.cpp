#include "spinob/integer.hpp"

#include <algorithm>
#include <map>

#include "spinob/error.hpp"

namespace spinob {
namespace {

constexpr unsigned long kTrialBound = 10000;

mpz_class pollard_rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto step = [&](mpz_class& v) {
      v = (v * v + c) % n;
    };
    while (d == 1) {
      step(x);
      step(y);
      step(y);
      mpz_class diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_into(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    ++out[n];
    return;
  }
  mpz_class root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    std::map<mpz_class, unsigned> half;
    factor_into(root, half);
    for (const auto& [p, e] : half) out[p] += 2 * e;
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n_in) {
  mpz_class n = abs(n_in);
  std::map<mpz_class, unsigned> out;
  for (unsigned long p = 2; p <= kTrialBound && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[mpz_class(p)];
      n /= p;
    }
  }
  if (n > 1) factor_into(n, out);
  return {out.begin(), out.end()};
}

std::vector<mpz_class> prime_divisors(const mpz_class& n) {
  std::vector<mpz_class> ps;
  for (const auto& [p, e] : factor(n)) ps.push_back(p);
  return ps;
}

mpz_class squarefree_part(const mpz_class& n) {
  mpz_class s = sgn(n) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor(n))
    if (e % 2 == 1) s *= p;
  return s;
}

mpz_class squarefree_part(const mpq_class& x) {
  return squarefree_part(mpz_class(x.get_num() * x.get_den()));
}

mpz_class partial_squarefree_part(const mpq_class& x) {
  mpz_class n = x.get_num() * x.get_den(), out = sgn(n);
  n = abs(n);
  for (unsigned long p = 2; p < kTrialBound && p * p <= n; ++p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e % 2) out *= p;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) return out;
  return out * n;
}

bool is_rational_square(const mpq_class& x) {
  if (sgn(x) < 0) return false;
  return mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

bool rational_sqrt(const mpq_class& x, mpq_class& root) {
  if (!is_rational_square(x)) return false;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  root = mpq_class(n, d);
  root.canonicalize();
  return true;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::pair<mpz_class, mpz_class> two_squares_prime(const mpz_class& p) {
  mpz_class e = (p - 1) / 4, r, c = 2;
  while (true) {
    mpz_powm(r.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if ((r * r) % p == p - 1) break;
    ++c;
  }
  mpz_class a = p, b = r, lim = sqrt(p);
  while (b > lim) {
    mpz_class t = a % b;
    a = b;
    b = t;
  }
  mpz_class rest = p - b * b, y = sqrt(rest);
  ensure(y * y == rest, ErrorCode::AssertionFailure, "Cornacchia failed for " + p.get_str());
  return {b, y};
}

bool two_squares(const mpz_class& n, mpz_class& x, mpz_class& y) {
  if (n < 0) return false;
  if (n == 0) {
    x = y = 0;
    return true;
  }
  mpz_class a = 1, b = 0;
  auto mul = [&](const mpz_class& c, const mpz_class& d) {
    mpz_class t = a * c - b * d;
    b = a * d + b * c;
    a = t;
  };
  for (const auto& [p, e] : factor(n)) {
    if (p == 2) {
      for (unsigned i = 0; i < e; ++i) mul(1, 1);
    } else if (p % 4 == 1) {
      auto [c, d] = two_squares_prime(p);
      for (unsigned i = 0; i < e; ++i) mul(c, d);
    } else {
      if (e % 2) return false;
      for (unsigned i = 0; i < e / 2; ++i) mul(p, 0);
    }
  }
  x = abs(a);
  y = abs(b);
  ensure(x * x + y * y == n, ErrorCode::AssertionFailure, "two-squares decomposition does not verify");
  return true;
}

long valuation(const mpq_class& x, const mpz_class& p) {
  long v = 0;
  mpz_class num = x.get_num(), den = x.get_den();
  while (num != 0 && mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
    num /= p;
    ++v;
  }
  while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
    den /= p;
    --v;
  }
  return v;
}

}  // namespace spinob
