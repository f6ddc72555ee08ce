#include "spinob/exactfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "spinob/integer.hpp"

namespace spinob {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::NotAnExtension: return "NotAnExtension";
    case ErrorCode::NotInField: return "NotInField";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::IsotropicVector: return "IsotropicVector";
    case ErrorCode::NotAnIsometry: return "NotAnIsometry";
    case ErrorCode::NotASimilitude: return "NotASimilitude";
    case ErrorCode::ImproperIsometry: return "ImproperIsometry";
    case ErrorCode::ProperSimilitude: return "ProperSimilitude";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NoAnisotropicVector: return "NoAnisotropicVector";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NotInCliffordGroup: return "NotInCliffordGroup";
    case ErrorCode::WrongParity: return "WrongParity";
    case ErrorCode::NotInU: return "NotInU";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::SplitDiscriminant: return "SplitDiscriminant";
    case ErrorCode::SplitDiscriminantOverL: return "SplitDiscriminantOverL";
    case ErrorCode::MalformedTower: return "MalformedTower";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::InconsistentLift: return "InconsistentLift";
    case ErrorCode::MultiplierNotInBase: return "MultiplierNotInBase";
    case ErrorCode::Hilbert90Failure: return "Hilbert90Failure";
    case ErrorCode::NotInImageOfI: return "NotInImageOfI";
    case ErrorCode::AssertionFailure: return "AssertionFailure";
  }
  return "Unknown";
}

namespace {

using Residues = FieldElement::Residues;

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

long mod(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

// Polynomial helpers over F_p for the modulus search; coefficients low to high.
std::vector<long> poly_mod(std::vector<long> a, const std::vector<long>& b, long p) {
  auto trim = [](std::vector<long>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  long lead_inv = 1;
  {
    long l = b.back();
    for (long t = 1; t < p; ++t)
      if ((l * t) % p == 1) lead_inv = t;
  }
  while (a.size() >= b.size()) {
    long coef = (a.back() * lead_inv) % p;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = mod(a[shift + i] - coef * b[i], p);
    trim(a);
  }
  return a;
}

bool is_irreducible(const std::vector<long>& f, long p) {
  int m = static_cast<int>(f.size()) - 1;
  for (int k = 1; 2 * k <= m; ++k) {
    std::uint64_t count = ipow(p, k);
    for (std::uint64_t n = 0; n < count; ++n) {
      std::vector<long> g(k + 1);
      std::uint64_t t = n;
      for (int i = 0; i < k; ++i) {
        g[i] = static_cast<long>(t % p);
        t /= p;
      }
      g[k] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<long> least_irreducible(long p, int m) {
  std::uint64_t count = ipow(p, m);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::vector<long> f(m + 1);
    std::uint64_t t = n;
    for (int i = 0; i < m; ++i) {
      f[i] = static_cast<long>(t % p);
      t /= p;
    }
    f[m] = 1;
    if (is_irreducible(f, p)) {
      f.pop_back();
      return f;
    }
  }
  throw MathError(ErrorCode::InvalidField, "no irreducible polynomial found");
}

}  // namespace

struct FieldRegistry {
  static std::mutex& mutex() {
    static std::mutex mu;
    return mu;
  }
  static std::map<std::string, std::unique_ptr<Field>>& table() {
    static std::map<std::string, std::unique_ptr<Field>> t;
    return t;
  }

  template <class Build>
  static const Field& intern(const std::string& key, Build build) {
    {
      std::lock_guard<std::mutex> lock(mutex());
      auto it = table().find(key);
      if (it != table().end()) return *it->second;
    }
    // Built outside the lock: construction may intern sub-fields.
    std::unique_ptr<Field> f(new Field());
    build(*f);
    const Field* result;
    {
      std::lock_guard<std::mutex> lock(mutex());
      auto [it, inserted] = table().emplace(key, std::move(f));
      result = it->second.get();
    }
    if (result->is_finite() && !result->nonsquare_) {
      // Cached once; concurrent first use computes the same value.
      std::uint64_t q = result->order();
      for (std::uint64_t i = 1; i < q; ++i) {
        FieldElement x = result->element_at(i);
        if (!x.pow(mpz_class(static_cast<unsigned long>((q - 1) / 2))).is_one()) {
          std::lock_guard<std::mutex> lock(mutex());
          if (!result->nonsquare_) result->nonsquare_ = std::make_unique<FieldElement>(x);
          break;
        }
      }
    }
    return *result;
  }
};

Field::~Field() = default;

const Field& Field::rationals() {
  return FieldRegistry::intern("Q", [](Field& f) {
    f.kind_ = Kind::Rationals;
    f.name_ = "Q";
  });
}

const Field& Field::qsqrt(long d) {
  ensure(d != 0 && d != 1, ErrorCode::InvalidField, "Q(sqrt d) needs d != 0, 1");
  ensure(squarefree_part(mpz_class(d)) == d, ErrorCode::InvalidField,
         "Q(sqrt d) needs squarefree d, got " + std::to_string(d));
  return FieldRegistry::intern("Q(sqrt(" + std::to_string(d) + "))", [d](Field& f) {
    f.kind_ = Kind::QuadExtOfRationals;
    f.d_ = d;
    f.base_ = &Field::rationals();
    f.delta_ = std::make_unique<FieldElement>(Field::rationals().from_int(d));
    f.name_ = "Q(sqrt(" + std::to_string(d) + "))";
  });
}

const Field& Field::prime(long p) {
  ensure(p > 2 && is_prime(p), ErrorCode::InvalidField,
         "prime field needs an odd prime, got " + std::to_string(p));
  ensure(p < (1L << 15), ErrorCode::InvalidField, "prime too large for residue arithmetic");
  return FieldRegistry::intern("F_" + std::to_string(p), [p](Field& f) {
    f.kind_ = Kind::PrimeField;
    f.p_ = p;
    f.m_ = 1;
    f.modulus_ = {0};
    f.name_ = "F_" + std::to_string(p);
  });
}

const Field& Field::finite(long p, int m) {
  if (m == 1) return prime(p);
  const Field& fp = prime(p);
  ensure(m >= 1 && m <= kMaxFiniteDegree, ErrorCode::InvalidField, "unsupported degree " + std::to_string(m));
  std::string name = "F_" + std::to_string(p) + "^" + std::to_string(m);
  return FieldRegistry::intern(name, [&](Field& f) {
    f.kind_ = Kind::FiniteField;
    f.p_ = p;
    f.m_ = m;
    f.base_ = &fp;
    f.modulus_ = least_irreducible(p, m);
    f.name_ = name;
  });
}

const Field& Field::quadratic(const FieldElement& delta) {
  const Field& base = delta.field();
  ensure(!delta.is_zero(), ErrorCode::InvalidField, "quadratic extension by zero");
  if (base.kind() == Kind::Rationals) {
    const mpq_class& q = delta.rational();
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) {
      long d = q.get_num().get_si();
      if (d != 1 && squarefree_part(mpz_class(d)) == d) return qsqrt(d);
    }
  }
  ensure(!is_square(delta), ErrorCode::InvalidField,
         "quadratic extension by a square " + delta.to_string() + " of " + base.name());
  std::string name = base.name() + "(sqrt(" + delta.to_string() + "))";
  return FieldRegistry::intern(name, [&](Field& f) {
    f.kind_ = Kind::Quadratic;
    f.p_ = base.characteristic();
    f.base_ = &base;
    f.delta_ = std::make_unique<FieldElement>(delta);
    f.name_ = name;
  });
}

int Field::absolute_degree() const {
  switch (kind_) {
    case Kind::Rationals:
    case Kind::PrimeField: return 1;
    case Kind::FiniteField: return m_;
    default: return 2 * base_->absolute_degree();
  }
}

std::uint64_t Field::order() const {
  ensure(is_finite(), ErrorCode::UnsupportedField, name_ + " is infinite");
  if (is_quadratic_kind()) {
    std::uint64_t b = base_->order();
    return b * b;
  }
  return ipow(p_, m_);
}

const FieldElement& Field::delta() const {
  ensure(is_quadratic_kind(), ErrorCode::NotAnExtension, name_ + " is not quadratic");
  return *delta_;
}

FieldElement Field::zero() const { return from_int(0); }
FieldElement Field::one() const { return from_int(1); }

FieldElement Field::from_int(long n) const {
  switch (kind_) {
    case Kind::Rationals: return FieldElement(this, mpq_class(n));
    case Kind::PrimeField:
    case Kind::FiniteField: {
      Residues r;
      r.c[0] = static_cast<std::int32_t>(mod(n, p_));
      return FieldElement(this, r);
    }
    default: return make(base_->from_int(n), base_->zero());
  }
}

FieldElement Field::from_rational(const mpq_class& q) const {
  switch (kind_) {
    case Kind::Rationals: {
      mpq_class c = q;
      c.canonicalize();
      return FieldElement(this, c);
    }
    case Kind::PrimeField:
    case Kind::FiniteField: {
      mpz_class den = q.get_den() % p_;
      ensure(den != 0, ErrorCode::ZeroInput, "denominator divisible by characteristic");
      mpz_class num = q.get_num() % p_;
      return from_int(num.get_si()) / from_int(den.get_si());
    }
    default: return make(base_->from_rational(q), base_->zero());
  }
}

FieldElement Field::generator() const {
  if (is_quadratic_kind()) return make(base_->zero(), base_->one());
  ensure(kind_ == Kind::FiniteField, ErrorCode::InvalidField, name_ + " has no generator");
  Residues r;
  r.c[1] = 1;
  return FieldElement(this, r);
}

FieldElement Field::make(const FieldElement& a, const FieldElement& b) const {
  ensure(is_quadratic_kind(), ErrorCode::NotAnExtension, name_ + " is not quadratic");
  ensure(&a.field() == base_ && &b.field() == base_, ErrorCode::NotInField, "coordinates not in base field");
  return FieldElement(this, std::make_shared<const FieldElement::Pair>(FieldElement::Pair{a, b}));
}

FieldElement Field::from_residues(const std::vector<long>& coeffs) const {
  ensure(kind_ == Kind::PrimeField || kind_ == Kind::FiniteField, ErrorCode::InvalidField,
         name_ + " has no residue coordinates");
  ensure(static_cast<int>(coeffs.size()) <= m_, ErrorCode::DimensionMismatch, "too many residue coordinates");
  Residues r;
  for (std::size_t i = 0; i < coeffs.size(); ++i) r.c[i] = static_cast<std::int32_t>(mod(coeffs[i], p_));
  return FieldElement(this, r);
}

FieldElement Field::element_at(std::uint64_t index) const {
  ensure(is_finite(), ErrorCode::UnsupportedField, name_ + " is infinite");
  if (is_quadratic_kind()) {
    std::uint64_t b = base_->order();
    return make(base_->element_at(index % b), base_->element_at(index / b));
  }
  Residues r;
  for (int i = 0; i < m_; ++i) {
    r.c[i] = static_cast<std::int32_t>(index % p_);
    index /= p_;
  }
  return FieldElement(this, r);
}

std::uint64_t Field::index_of(const FieldElement& x) const {
  if (is_quadratic_kind()) return base_->index_of(x.re()) + base_->order() * base_->index_of(x.im());
  std::uint64_t idx = 0;
  for (int i = m_ - 1; i >= 0; --i) idx = idx * p_ + x.residue(i);
  return idx;
}

std::vector<FieldElement> Field::elements() const {
  std::vector<FieldElement> out;
  std::uint64_t q = order();
  out.reserve(q);
  for (std::uint64_t i = 0; i < q; ++i) out.push_back(element_at(i));
  return out;
}

std::vector<FieldElement> Field::nonzero_elements() const {
  auto all = elements();
  all.erase(all.begin());
  return all;
}

FieldElement Field::least_nonsquare() const {
  ensure(is_finite() && nonsquare_, ErrorCode::UnsupportedField, name_ + " has no cached nonsquare");
  return *nonsquare_;
}

FieldElement Field::multiplicative_generator() const {
  std::uint64_t q = order();
  auto primes = prime_divisors(mpz_class(static_cast<unsigned long>(q - 1)));
  for (std::uint64_t i = 1; i < q; ++i) {
    FieldElement x = element_at(i);
    bool ok = true;
    for (const auto& r : primes) {
      mpz_class e = mpz_class(static_cast<unsigned long>(q - 1)) / r;
      if (x.pow(e).is_one()) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw MathError(ErrorCode::AssertionFailure, "no multiplicative generator");
}

// ---------------------------------------------------------------------------

bool FieldElement::is_zero() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, mpq_class>) return sgn(v) == 0;
        else if constexpr (std::is_same_v<T, Residues>) return v == Residues{};
        else if constexpr (std::is_same_v<T, std::shared_ptr<const Pair>>) return v->a.is_zero() && v->b.is_zero();
        else return true;
      },
      v_);
}

bool FieldElement::is_one() const { return *this == field_->one(); }

const mpq_class& FieldElement::rational() const {
  ensure(std::holds_alternative<mpq_class>(v_), ErrorCode::NotInField, "not a rational element");
  return std::get<mpq_class>(v_);
}

const FieldElement& FieldElement::re() const {
  ensure(field_->is_quadratic_kind(), ErrorCode::NotAnExtension, "re() on " + field_->name());
  return std::get<std::shared_ptr<const Pair>>(v_)->a;
}

const FieldElement& FieldElement::im() const {
  ensure(field_->is_quadratic_kind(), ErrorCode::NotAnExtension, "im() on " + field_->name());
  return std::get<std::shared_ptr<const Pair>>(v_)->b;
}

std::int32_t FieldElement::residue(int i) const { return std::get<Residues>(v_).c[i]; }

FieldElement FieldElement::operator+(const FieldElement& o) const {
  ensure(field_ == o.field_, ErrorCode::NotInField, "field mismatch in +");
  switch (field_->kind()) {
    case Field::Kind::Rationals: return FieldElement(field_, mpq_class(rational() + o.rational()));
    case Field::Kind::PrimeField:
    case Field::Kind::FiniteField: {
      Residues r;
      const auto& a = std::get<Residues>(v_);
      const auto& b = std::get<Residues>(o.v_);
      long p = field_->characteristic();
      for (int i = 0; i < field_->residue_degree(); ++i) r.c[i] = static_cast<std::int32_t>((a.c[i] + b.c[i]) % p);
      return FieldElement(field_, r);
    }
    default: return field_->make(re() + o.re(), im() + o.im());
  }
}

FieldElement FieldElement::operator-() const {
  switch (field_->kind()) {
    case Field::Kind::Rationals: return FieldElement(field_, mpq_class(-rational()));
    case Field::Kind::PrimeField:
    case Field::Kind::FiniteField: {
      Residues r;
      const auto& a = std::get<Residues>(v_);
      long p = field_->characteristic();
      for (int i = 0; i < field_->residue_degree(); ++i) r.c[i] = static_cast<std::int32_t>((p - a.c[i]) % p);
      return FieldElement(field_, r);
    }
    default: return field_->make(-re(), -im());
  }
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  ensure(field_ == o.field_, ErrorCode::NotInField, "field mismatch in *");
  switch (field_->kind()) {
    case Field::Kind::Rationals: return FieldElement(field_, mpq_class(rational() * o.rational()));
    case Field::Kind::PrimeField: {
      Residues r;
      r.c[0] = static_cast<std::int32_t>(
          (static_cast<long>(std::get<Residues>(v_).c[0]) * std::get<Residues>(o.v_).c[0]) % field_->characteristic());
      return FieldElement(field_, r);
    }
    case Field::Kind::FiniteField: {
      const auto& a = std::get<Residues>(v_);
      const auto& b = std::get<Residues>(o.v_);
      const long p = field_->characteristic();
      const int m = field_->residue_degree();
      const auto& modulus = field_->modulus();
      std::array<long, 2 * Field::kMaxFiniteDegree> t{};
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i + j] += static_cast<long>(a.c[i]) * b.c[j];
      for (int k = 2 * m - 2; k >= m; --k) {
        long coef = t[k] % p;
        if (coef != 0)
          for (int i = 0; i < m; ++i) t[k - m + i] -= coef * modulus[i];
        t[k] = 0;
      }
      Residues r;
      for (int i = 0; i < m; ++i) r.c[i] = static_cast<std::int32_t>(mod(t[i], p));
      return FieldElement(field_, r);
    }
    default: {
      const FieldElement& a = re();
      const FieldElement& b = im();
      const FieldElement& c = o.re();
      const FieldElement& d = o.im();
      return field_->make(a * c + field_->delta() * b * d, a * d + b * c);
    }
  }
}

FieldElement FieldElement::inverse() const {
  ensure(!is_zero(), ErrorCode::ZeroInput, "inverse of zero");
  switch (field_->kind()) {
    case Field::Kind::Rationals: return FieldElement(field_, mpq_class(1 / rational()));
    case Field::Kind::PrimeField:
    case Field::Kind::FiniteField:
      return pow(mpz_class(static_cast<unsigned long>(field_->order() - 2)));
    default: {
      FieldElement n = re() * re() - field_->delta() * im() * im();
      FieldElement ninv = n.inverse();
      return field_->make(re() * ninv, -(im() * ninv));
    }
  }
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

FieldElement FieldElement::pow(const mpz_class& e) const {
  if (sgn(e) < 0) return inverse().pow(mpz_class(-e));
  FieldElement result = field_->one();
  FieldElement base = *this;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) result = result * base;
    if (i + 1 < bits) base = base * base;
  }
  return result;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (field_ != o.field_) return false;
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, mpq_class>) return v == std::get<mpq_class>(o.v_);
        else if constexpr (std::is_same_v<T, Residues>) return v == std::get<Residues>(o.v_);
        else if constexpr (std::is_same_v<T, std::shared_ptr<const Pair>>) {
          const auto& w = std::get<std::shared_ptr<const Pair>>(o.v_);
          return v == w || (v->a == w->a && v->b == w->b);
        } else return true;
      },
      v_);
}

std::string FieldElement::to_string() const {
  if (!field_) return "<invalid>";
  switch (field_->kind()) {
    case Field::Kind::Rationals: return rational().get_str();
    case Field::Kind::PrimeField: return std::to_string(residue(0));
    case Field::Kind::FiniteField: {
      std::ostringstream os;
      bool first = true;
      for (int i = field_->residue_degree() - 1; i >= 0; --i) {
        long c = residue(i);
        if (c == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) os << c;
        else {
          if (c != 1) os << c << "*";
          os << "x";
          if (i > 1) os << "^" << i;
        }
      }
      return first ? "0" : os.str();
    }
    default: {
      std::string s = field_->kind() == Field::Kind::QuadExtOfRationals
                          ? "sqrt(" + std::to_string(field_->d()) + ")"
                          : "sqrt(" + field_->delta().to_string() + ")";
      if (im().is_zero()) return re().to_string();
      std::string b = im().is_one() ? s : "(" + im().to_string() + ")*" + s;
      if (re().is_zero()) return b;
      return "(" + re().to_string() + ")+" + b;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::optional<FieldElement> finite_sqrt(const FieldElement& x) {
  const Field& f = x.field();
  if (x.is_zero()) return x;
  const mpz_class q(static_cast<unsigned long>(f.order()));
  if (!x.pow(mpz_class((q - 1) / 2)).is_one()) return std::nullopt;
  // Tonelli-Shanks.
  mpz_class t = q - 1;
  long s = 0;
  while (mpz_even_p(t.get_mpz_t())) {
    t /= 2;
    ++s;
  }
  FieldElement c = f.least_nonsquare().pow(t);
  FieldElement r = x.pow(mpz_class((t + 1) / 2));
  FieldElement tt = x.pow(t);
  long big_m = s;
  while (!tt.is_one()) {
    long i = 0;
    FieldElement probe = tt;
    while (!probe.is_one()) {
      probe = probe.square();
      ++i;
    }
    FieldElement b = c;
    for (long k = 0; k < big_m - i - 1; ++k) b = b.square();
    r = r * b;
    c = b.square();
    tt = tt * c;
    big_m = i;
  }
  return r;
}

std::optional<FieldElement> quadratic_sqrt(const FieldElement& x) {
  const Field& f = x.field();
  const Field& k = *f.base();
  const FieldElement& delta = f.delta();
  const FieldElement& a = x.re();
  const FieldElement& b = x.im();
  if (x.is_zero()) return x;
  if (b.is_zero()) {
    if (auto r = sqrt(a)) return f.make(*r, k.zero());
    if (auto r = sqrt(a / delta)) return f.make(k.zero(), *r);
    return std::nullopt;
  }
  auto r = sqrt(a * a - delta * b * b);
  if (!r) return std::nullopt;
  FieldElement half = k.from_int(2).inverse();
  for (const FieldElement& root : {*r, -*r}) {
    FieldElement t = (a + root) * half;
    if (t.is_zero()) continue;
    if (auto u = sqrt(t)) {
      FieldElement cand = f.make(*u, b / (k.from_int(2) * *u));
      if (cand * cand == x) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<FieldElement> sqrt(const FieldElement& x) {
  const Field& f = x.field();
  if (f.is_finite()) return finite_sqrt(x);
  if (f.kind() == Field::Kind::Rationals) {
    mpq_class root;
    if (rational_sqrt(x.rational(), root)) return f.from_rational(root);
    return std::nullopt;
  }
  return quadratic_sqrt(x);
}

bool is_square(const FieldElement& x) {
  ensure(!x.is_zero(), ErrorCode::ZeroInput, "is_square(0)");
  const Field& f = x.field();
  if (f.is_finite()) {
    const mpz_class q(static_cast<unsigned long>(f.order()));
    return x.pow(mpz_class((q - 1) / 2)).is_one();
  }
  return sqrt(x).has_value();
}

int relative_degree(const Field& field, const Field& sub) {
  if (&field == &sub) return 1;
  if (field.is_quadratic_kind()) return 2 * relative_degree(*field.base(), sub);
  if (field.kind() == Field::Kind::FiniteField && sub.kind() == Field::Kind::PrimeField &&
      field.characteristic() == sub.characteristic())
    return field.residue_degree();
  throw MathError(ErrorCode::NotAnExtension, field.name() + " over " + sub.name());
}

FieldElement automorphism(const FieldElement& x, const Field& sub, int i) {
  const Field& f = x.field();
  if (&f == &sub) return x;
  if (f.is_quadratic_kind()) {
    if (f.base() == &sub) return i % 2 == 0 ? x : f.make(x.re(), -x.im());
    return f.make(automorphism(x.re(), sub, i), automorphism(x.im(), sub, i));
  }
  if (f.kind() == Field::Kind::FiniteField && sub.kind() == Field::Kind::PrimeField &&
      f.characteristic() == sub.characteristic()) {
    FieldElement y = x;
    for (int k = 0; k < i % f.residue_degree(); ++k) y = y.pow(f.characteristic());
    return y;
  }
  throw MathError(ErrorCode::NotAnExtension, f.name() + " over " + sub.name());
}

namespace {

void check_simple_tower(const Field& f, const Field& sub) {
  bool ok = &f == &sub || (f.is_quadratic_kind() && f.base() == &sub) ||
            (f.kind() == Field::Kind::FiniteField && sub.kind() == Field::Kind::PrimeField &&
             f.characteristic() == sub.characteristic());
  ensure(ok, ErrorCode::NotAnExtension, f.name() + " over " + sub.name() + " is not a supported extension");
}

}  // namespace

FieldElement norm(const FieldElement& z, const Field& sub) {
  check_simple_tower(z.field(), sub);
  int deg = relative_degree(z.field(), sub);
  FieldElement prod = z;
  for (int i = 1; i < deg; ++i) prod = prod * automorphism(z, sub, i);
  return restrict_to(prod, sub);
}

FieldElement trace(const FieldElement& z, const Field& sub) {
  check_simple_tower(z.field(), sub);
  int deg = relative_degree(z.field(), sub);
  FieldElement sum = z;
  for (int i = 1; i < deg; ++i) sum = sum + automorphism(z, sub, i);
  return restrict_to(sum, sub);
}

FieldElement galois_conj(const FieldElement& z) {
  const Field& f = z.field();
  if (f.is_quadratic_kind()) return f.make(z.re(), -z.im());
  if (f.kind() == Field::Kind::FiniteField) return z.pow(f.characteristic());
  return z;
}

FieldElement embed(const FieldElement& x, const Field& into) {
  const Field& f = x.field();
  if (&f == &into) return x;
  if (into.is_quadratic_kind()) return into.make(embed(x, *into.base()), into.base()->zero());
  if (into.kind() == Field::Kind::FiniteField && f.kind() == Field::Kind::PrimeField &&
      f.characteristic() == into.characteristic())
    return into.from_int(x.residue(0));
  throw MathError(ErrorCode::NotAnExtension, "cannot embed " + f.name() + " into " + into.name());
}

FieldElement restrict_to(const FieldElement& x, const Field& sub) {
  const Field& f = x.field();
  if (&f == &sub) return x;
  if (f.is_quadratic_kind()) {
    ensure(x.im().is_zero(), ErrorCode::NotInField, x.to_string() + " not in " + sub.name());
    return restrict_to(x.re(), sub);
  }
  if (f.kind() == Field::Kind::FiniteField && sub.kind() == Field::Kind::PrimeField &&
      f.characteristic() == sub.characteristic()) {
    for (int i = 1; i < f.residue_degree(); ++i)
      ensure(x.residue(i) == 0, ErrorCode::NotInField, x.to_string() + " not in " + sub.name());
    return sub.from_int(x.residue(0));
  }
  throw MathError(ErrorCode::NotAnExtension, f.name() + " over " + sub.name());
}

bool lies_in(const FieldElement& x, const Field& sub) {
  try {
    restrict_to(x, sub);
    return true;
  } catch (const MathError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------

namespace {

// Rational c viewed in Q(sqrt d): c and c*d share a class, keep the simpler.
mpz_class rational_rep_in_qsqrt(const mpq_class& c, long d) {
  mpz_class a = partial_squarefree_part(c);
  mpz_class b = partial_squarefree_part(mpq_class(a * d));
  auto key = [](const mpz_class& v) { return std::make_pair(mpz_class(abs(v)), sgn(v) < 0); };
  return key(b) < key(a) ? b : a;
}

FieldElement reduce_class(const FieldElement& x) {
  const Field& f = x.field();
  if (f.is_finite()) return is_square(x) ? f.one() : f.least_nonsquare();
  if (f.kind() == Field::Kind::Rationals) return f.from_rational(mpq_class(partial_squarefree_part(x.rational())));
  if (is_square(x)) return f.one();
  const Field& k = *f.base();
  // If N(x) = s^2 then x * (Tr x + 2s) = (x + s)^2, so x is in the class of a base element.
  FieldElement n = x.re() * x.re() - f.delta() * x.im() * x.im();
  if (auto s = sqrt(n)) {
    FieldElement tr = k.from_int(2) * x.re();
    FieldElement c = tr + k.from_int(2) * *s;
    if (c.is_zero()) c = tr - k.from_int(2) * *s;
    if (f.kind() == Field::Kind::QuadExtOfRationals)
      return f.from_rational(mpq_class(rational_rep_in_qsqrt(c.rational(), f.d())));
    return embed(c, f);
  }
  if (f.kind() == Field::Kind::QuadExtOfRationals) {
    // x = c * (a' + b' sqrt d) with a', b' coprime integers and first nonzero one positive.
    const mpq_class& a = x.re().rational();
    const mpq_class& b = x.im().rational();
    mpz_class l, g;
    mpz_lcm(l.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    mpz_class ai = a.get_num() * (l / a.get_den());
    mpz_class bi = b.get_num() * (l / b.get_den());
    mpz_gcd(g.get_mpz_t(), ai.get_mpz_t(), bi.get_mpz_t());
    ai /= g;
    bi /= g;
    mpq_class c(g, l);
    c.canonicalize();
    if (sgn(ai) < 0 || (sgn(ai) == 0 && sgn(bi) < 0)) {
      ai = -ai;
      bi = -bi;
      c = -c;
    }
    mpz_class sc = rational_rep_in_qsqrt(c, f.d());
    return f.make(k.from_rational(mpq_class(sc * ai)), k.from_rational(mpq_class(sc * bi)));
  }
  return x;
}

}  // namespace

SquareClass::SquareClass(const FieldElement& x) {
  ensure(!x.is_zero(), ErrorCode::ZeroInput, "square class of zero");
  rep_ = reduce_class(x);
}

bool SquareClass::is_trivial() const { return is_square(rep_); }

SquareClass SquareClass::operator*(const SquareClass& o) const {
  ensure(&field() == &o.field(), ErrorCode::NotInField, "square classes over different fields");
  return SquareClass(rep_ * o.rep_);
}

bool SquareClass::operator==(const SquareClass& o) const {
  if (&field() != &o.field()) return false;
  return is_square(rep_ / o.rep_);
}

}  // namespace spinob
