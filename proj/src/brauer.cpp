#include "spinob/brauer.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "spinob/integer.hpp"

namespace spinob {

QuaternionClass quaternion_class(const FieldElement& a, const FieldElement& b) {
  ensure(&a.field() == &b.field(), ErrorCode::NotInField, "quaternion entries in different fields");
  ensure(!a.is_zero() && !b.is_zero(), ErrorCode::ZeroInput, "quaternion algebra with a zero entry");
  const Field& k = a.field();
  QuaternionClass q{a, b, {}};
  if (k.kind() == Field::Kind::Rationals) {
    q.ramification = ramified_places(a.rational(), b.rational());
    ensure(q.ramification.size() % 2 == 0, ErrorCode::AssertionFailure, "odd number of ramified places");
    return q;
  }
  ensure(k.is_finite() && k.characteristic() != 2, ErrorCode::UnsupportedField,
         "quaternion classes over " + k.name() + " are not supported");
  return q;
}

bool is_split(const QuaternionClass& q) { return q.ramification.empty(); }

int hasse_invariant(const QuadSpace& space, long place) {
  ensure(space.field().kind() == Field::Kind::Rationals, ErrorCode::UnsupportedField, "Hasse invariants need Q");
  const auto& d = space.diagonal();
  int s = 1;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) s *= hilbert_symbol(d[i].rational(), d[j].rational(), place);
  return s;
}

bool rational_forms_isometric(const QuadSpace& a, const QuadSpace& b) {
  ensure(a.field().kind() == Field::Kind::Rationals && b.field().kind() == Field::Kind::Rationals,
         ErrorCode::UnsupportedField, "Hasse-Minkowski comparison needs Q");
  if (a.dimension() != b.dimension()) return false;
  auto negatives = [](const QuadSpace& s) {
    return std::count_if(s.diagonal().begin(), s.diagonal().end(),
                         [](const FieldElement& x) { return x.rational() < 0; });
  };
  if (negatives(a) != negatives(b)) return false;
  mpq_class da = 1, db = 1;
  std::set<long> places{2};
  for (const auto* s : {&a, &b})
    for (const auto& x : s->diagonal()) {
      (s == &a ? da : db) *= x.rational();
      for (long p : relevant_places(x.rational(), 1)) places.insert(p);
    }
  if (squarefree_part(da) != squarefree_part(db)) return false;
  for (long p : places)
    if (p != kRealPlace && hasse_invariant(a, p) != hasse_invariant(b, p)) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::string corestriction_status_name(CorestrictionStatus s) {
  switch (s) {
    case CorestrictionStatus::Checked: return "Checked";
    case CorestrictionStatus::SkippedNonSplit: return "SkippedNonSplit";
    case CorestrictionStatus::SkippedUndecided: return "SkippedUndecided";
    case CorestrictionStatus::SkippedSplitZ: return "SkippedSplitZ";
  }
  return "?";
}

namespace {

// Sign of a + b sqrt(m) (sigma = +1) or a - b sqrt(m) (sigma = -1), m > 0.
int real_sign(const mpq_class& a, const mpq_class& b, long m, int sigma) {
  mpq_class bb = sigma * b;
  if (a * a > bb * bb * m) return sgn(a);
  return sgn(bb);
}

// x, y in Z[sqrt m] / c of height <= bound with x^2 - d y^2 = f1.
std::optional<std::pair<FieldElement, FieldElement>> norm_certificate(long d, long m, const FieldElement& f1,
                                                                      long bound) {
  const Field& L = f1.field();
  mpq_class fa = f1.re().rational(), fb = f1.im().rational();
  mpz_class na = fa.get_num(), da = fa.get_den(), nb = fb.get_num(), db = fb.get_den();
  for (long c = 1; c <= bound; ++c)
    for (long x0 = -bound; x0 <= bound; ++x0)
      for (long x1 = -bound; x1 <= bound; ++x1)
        for (long y0 = -bound; y0 <= bound; ++y0)
          for (long y1 = -bound; y1 <= bound; ++y1) {
            mpz_class re = x0 * x0 + m * x1 * x1 - d * (y0 * y0 + m * y1 * y1);
            mpz_class im = 2 * x0 * x1 - 2 * d * y0 * y1;
            if (re * da != na * c * c || im * db != nb * c * c) continue;
            auto elt = [&](long u, long v) { return L.make(L.base()->from_int(u), L.base()->from_int(v)) / L.from_int(c); };
            FieldElement x = elt(x0, x1), y = elt(y0, y1);
            ensure(x * x - L.from_int(d) * y * y == f1, ErrorCode::AssertionFailure, "norm certificate does not verify");
            return std::make_pair(x, y);
          }
  return std::nullopt;
}

}  // namespace

CorestrictionResult corestriction_consequence_check(const mpq_class& d, long m, const FieldElement& f1, long bound) {
  const Field& L = Field::qsqrt(m);
  ensure(&f1.field() == &L, ErrorCode::NotInField, "f1 must lie in " + L.name());
  ensure(!f1.is_zero() && d != 0, ErrorCode::ZeroInput, "corestriction check with a zero entry");
  CorestrictionResult r;
  r.norm_f1 = norm(f1, Field::rationals()).rational();
  mpz_class ds = squarefree_part(d);
  if (ds == 1 || ds == m) {
    r.status = CorestrictionStatus::SkippedSplitZ;
    r.note = "d is a square in " + L.name();
    return r;
  }
  mpq_class fa = f1.re().rational(), fb = f1.im().rational();
  if (m > 0 && ds < 0)
    for (int sigma : {1, -1})
      if (real_sign(fa, fb, m, sigma) < 0) {
        r.status = CorestrictionStatus::SkippedNonSplit;
        r.note = "ramified at the real place sqrt(" + std::to_string(m) + ") -> " + (sigma > 0 ? "+" : "-");
        return r;
      }
  ensure(ds.fits_slong_p(), ErrorCode::InvalidConfig, "d too large");
  auto cert = norm_certificate(ds.get_si(), m, f1, bound);
  if (!cert) {
    r.status = CorestrictionStatus::SkippedUndecided;
    r.note = "no norm certificate within height " + std::to_string(bound);
    return r;
  }
  r.status = CorestrictionStatus::Checked;
  // f1 = x^2 - ds y^2 and d = ds t^2 give f1 = x^2 - d (y / t)^2.
  mpq_class t2 = d / mpq_class(ds);
  mpq_class t;
  ensure(rational_sqrt(t2, t), ErrorCode::AssertionFailure, "d / squarefree(d) is not a square");
  r.x = cert->first;
  r.y = cert->second / L.from_rational(t);
  r.ramification = ramified_places(d, r.norm_f1);
  r.consequence = r.ramification.empty();
  return r;
}

CorestrictionRun corestriction_property_run(std::uint64_t seed, std::size_t count, long bound) {
  static const long kD[] = {-1, -2, -3, 2, 3, 5, 6, 7, -5, -6, 10, -7};
  static const long kM[] = {2, 3, 5, 6, 7, 10, 13, -1, -2, -3, -5};
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  CorestrictionRun run;
  for (std::size_t attempts = 0; run.checked.size() < count && attempts < 200 * count; ++attempts) {
    long d = kD[rng() % std::size(kD)], m = kM[rng() % std::size(kM)];
    if (d == m) continue;
    const Field& L = Field::qsqrt(m);
    auto small = [&] { return L.make(L.base()->from_int(pick(-3, 3)), L.base()->from_int(pick(-3, 3))); };
    FieldElement f1;
    if (rng() % 2) {
      f1 = small();
    } else {
      FieldElement x = small(), y = small();
      f1 = x * x - L.from_int(d) * y * y;
    }
    if (f1.is_zero()) continue;
    CorestrictionInstance inst{d, m, f1, corestriction_consequence_check(d, m, f1, bound)};
    if (inst.result.status != CorestrictionStatus::Checked) {
      ++run.skipped;
      continue;
    }
    if (!inst.result.consequence) ++run.failures;
    run.checked.push_back(std::move(inst));
  }
  return run;
}

bool dieudonne_split_check(const Similitude& g) {
  const QuadSpace& s = g.space();
  ensure(s.field().kind() == Field::Kind::Rationals, ErrorCode::UnsupportedField, "Dieudonne check needs Q");
  ensure(!g.is_proper(), ErrorCode::ProperSimilitude, "similitude is proper");
  return ramified_places(discriminant_value(s).rational(), g.multiplier().rational()).empty();
}

}  // namespace spinob
