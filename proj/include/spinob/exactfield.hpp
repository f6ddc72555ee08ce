#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinob/error.hpp"

namespace spinob {

class FieldElement;

// A base field or extension. Fields are interned: each distinct field exists
// once for the lifetime of the process, so identity is pointer identity.
//
// Supported kinds:
//   Rationals            Q
//   QuadExtOfRationals   Q(sqrt d), d squarefree, d != 0, 1
//   PrimeField           F_p, p odd prime
//   FiniteField          F_{p^m} = F_p[x]/(modulus), modulus the least monic
//                        irreducible of degree m in the ordering c_0 + c_1 p + ...
//   Quadratic            base(sqrt delta) for any supported base and nonsquare delta
class Field {
 public:
  enum class Kind { Rationals, QuadExtOfRationals, PrimeField, FiniteField, Quadratic };

  static constexpr int kMaxFiniteDegree = 8;

  static const Field& rationals();
  static const Field& qsqrt(long d);
  static const Field& prime(long p);
  static const Field& finite(long p, int m);
  // base(sqrt delta); returns qsqrt(d) when base is Q and delta a squarefree integer.
  static const Field& quadratic(const FieldElement& delta);

  ~Field();
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  Kind kind() const { return kind_; }
  long characteristic() const { return p_; }
  bool is_finite() const { return p_ != 0; }
  bool is_quadratic_kind() const { return kind_ == Kind::QuadExtOfRationals || kind_ == Kind::Quadratic; }
  // Degree over the prime field (finite) or over Q.
  int absolute_degree() const;
  // F_{p^m}: m.
  int residue_degree() const { return m_; }
  std::uint64_t order() const;
  const Field* base() const { return base_; }
  const FieldElement& delta() const;
  const std::vector<long>& modulus() const { return modulus_; }
  const std::string& name() const { return name_; }
  // Q(sqrt d): d.
  long d() const { return d_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long n) const;
  FieldElement from_rational(const mpq_class& q) const;
  // sqrt(delta) for quadratic kinds; the class of x for F_{p^m}.
  FieldElement generator() const;
  // a + b*sqrt(delta) with a, b in base().
  FieldElement make(const FieldElement& a, const FieldElement& b) const;
  FieldElement from_residues(const std::vector<long>& coeffs) const;

  // Enumeration of finite fields in index order (index of c_0 + c_1 x + ... is
  // sum c_i p^i; for quadratic kinds index(a) + |base| * index(b)).
  std::vector<FieldElement> elements() const;
  FieldElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& x) const;
  std::vector<FieldElement> nonzero_elements() const;
  FieldElement least_nonsquare() const;
  FieldElement multiplicative_generator() const;

 private:
  Field() = default;
  friend struct FieldRegistry;

  Kind kind_ = Kind::Rationals;
  long p_ = 0;
  int m_ = 1;
  long d_ = 0;
  const Field* base_ = nullptr;
  std::unique_ptr<FieldElement> delta_;
  std::vector<long> modulus_;
  std::string name_;
  mutable std::unique_ptr<FieldElement> nonsquare_;
};

// Exact element of a Field. Cheap to copy for finite fields; rational payloads
// are GMP values and quadratic payloads share an immutable coordinate pair.
class FieldElement {
 public:
  struct Residues {
    std::array<std::int32_t, Field::kMaxFiniteDegree> c{};
    bool operator==(const Residues&) const = default;
  };
  struct Pair;

  FieldElement() = default;

  const Field& field() const { return *field_; }
  bool valid() const { return field_ != nullptr; }
  bool is_zero() const;
  bool is_one() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const;
  FieldElement pow(const mpz_class& e) const;
  FieldElement pow(long e) const { return pow(mpz_class(e)); }
  FieldElement square() const { return *this * *this; }

  const mpq_class& rational() const;
  const FieldElement& re() const;
  const FieldElement& im() const;
  std::int32_t residue(int i) const;

  std::string to_string() const;

 private:
  friend class Field;
  using Payload = std::variant<std::monostate, mpq_class, Residues, std::shared_ptr<const Pair>>;

  FieldElement(const Field* f, Payload v) : field_(f), v_(std::move(v)) {}

  const Field* field_ = nullptr;
  Payload v_;
};

struct FieldElement::Pair {
  FieldElement a;
  FieldElement b;
};

using Vector = std::vector<FieldElement>;

bool is_square(const FieldElement& x);
std::optional<FieldElement> sqrt(const FieldElement& x);

// Relative degree [field : sub] for supported towers; throws NotAnExtension.
int relative_degree(const Field& field, const Field& sub);
// i-th element of Gal(field/sub) applied to x (Frobenius powers for finite
// towers, conjugation for quadratic steps, coefficientwise for a quadratic
// extension of an extension of sub).
FieldElement automorphism(const FieldElement& x, const Field& sub, int i);
FieldElement norm(const FieldElement& z, const Field& sub);
FieldElement trace(const FieldElement& z, const Field& sub);
// Nontrivial automorphism of a quadratic step; Frobenius for F_{p^m}/F_p.
FieldElement galois_conj(const FieldElement& z);

FieldElement embed(const FieldElement& x, const Field& into);
// Inverse of embed; throws NotInField when x does not come from sub.
FieldElement restrict_to(const FieldElement& x, const Field& sub);
bool lies_in(const FieldElement& x, const Field& sub);

// Element of k*/k*^2 (or Z*/Z*^2 for quadratic extensions).
class SquareClass {
 public:
  explicit SquareClass(const FieldElement& x);

  const Field& field() const { return rep_.field(); }
  const FieldElement& representative() const { return rep_; }
  bool is_trivial() const;
  SquareClass operator*(const SquareClass& o) const;
  SquareClass inverse() const { return *this; }
  bool operator==(const SquareClass& o) const;
  bool operator!=(const SquareClass& o) const { return !(*this == o); }
  std::string to_string() const { return rep_.to_string(); }

 private:
  FieldElement rep_;
};

inline SquareClass square_class(const FieldElement& x) { return SquareClass(x); }

}  // namespace spinob
