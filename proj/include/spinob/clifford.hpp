#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "spinob/similitude.hpp"

namespace spinob {

// C(V, q) with basis e_S, S a subset of {1..m} stored as a bitmask (bit i is
// e_{i+1}). Products follow e_i^2 = d_i and e_i e_j = -e_j e_i.
class CliffordAlgebra {
 public:
  static constexpr std::size_t kMaxDimension = 8;
  static std::shared_ptr<const CliffordAlgebra> create(const QuadSpace& space);

  const QuadSpace& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  std::size_t m() const { return space_.dimension(); }
  std::size_t size() const { return std::size_t{1} << m(); }
  unsigned full_mask() const { return static_cast<unsigned>(size() - 1); }

  // e_A e_B = sign * factor * e_{A xor B}.
  int sign(unsigned a, unsigned b) const;
  const FieldElement& factor(unsigned a, unsigned b) const { return factor_[a & b]; }

  // zeta = e_1 ... e_m; its square is a scalar.
  const FieldElement& zeta_square() const { return zeta_sq_; }
  // Z = k(zeta); throws SplitDiscriminant when zeta^2 is a square.
  const Field& center_field() const;
  // Masks ordered by size, then lexicographically by index list.
  const std::vector<unsigned>& ordered_masks() const { return order_; }
  const std::vector<unsigned>& even_masks() const { return even_; }

 private:
  explicit CliffordAlgebra(QuadSpace space);
  QuadSpace space_;
  std::vector<FieldElement> factor_;
  FieldElement zeta_sq_;
  std::vector<unsigned> order_, even_;
};

using AlgebraPtr = std::shared_ptr<const CliffordAlgebra>;

class CliffordElement {
 public:
  CliffordElement() = default;
  static CliffordElement zero(AlgebraPtr alg);
  static CliffordElement scalar(AlgebraPtr alg, const FieldElement& s);
  static CliffordElement one(AlgebraPtr alg);
  static CliffordElement basis(AlgebraPtr alg, unsigned mask);
  static CliffordElement vector(AlgebraPtr alg, const Vector& v);
  static CliffordElement zeta(AlgebraPtr alg);
  // a + b zeta for z = a + b sqrt(zeta^2) in the center field.
  static CliffordElement from_center(AlgebraPtr alg, const FieldElement& z);

  const AlgebraPtr& algebra() const { return alg_; }
  const FieldElement& coeff(unsigned mask) const { return c_[mask]; }
  const std::vector<FieldElement>& coefficients() const { return c_; }

  CliffordElement operator+(const CliffordElement& o) const;
  CliffordElement operator-(const CliffordElement& o) const;
  CliffordElement operator*(const CliffordElement& o) const;
  CliffordElement operator*(const FieldElement& s) const;
  CliffordElement operator-() const;
  bool operator==(const CliffordElement& o) const;
  bool operator!=(const CliffordElement& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_even() const;
  bool is_odd() const;
  bool is_scalar() const;
  // Grade-1 part only.
  bool is_vector() const;
  Vector vector_part() const;
  // Element of k + k zeta as a center-field element.
  std::optional<FieldElement> to_center() const;

  CliffordElement reversal() const;
  CliffordElement grade_involution() const;
  std::optional<CliffordElement> inverse() const;
  std::string to_string() const;

 private:
  CliffordElement(AlgebraPtr alg, std::vector<FieldElement> c) : alg_(std::move(alg)), c_(std::move(c)) {}
  AlgebraPtr alg_;
  std::vector<FieldElement> c_;
};

inline CliffordElement clifford_mul(const CliffordElement& a, const CliffordElement& b) { return a * b; }
inline CliffordElement embed_vector(AlgebraPtr alg, const Vector& v) { return CliffordElement::vector(std::move(alg), v); }
inline CliffordElement reversal(const CliffordElement& a) { return a.reversal(); }

// v -> gamma v gamma^{-1} (even gamma) or -gamma v gamma^{-1} (odd gamma).
// Throws NotInCliffordGroup.
Isometry vector_representation(const CliffordElement& gamma);

// v_1 ... v_{2r} from a Cartan-Dieudonne decomposition of h.
CliffordElement lift_isometry_to_gamma(AlgebraPtr alg, const Isometry& h);

// c even, in the Clifford group, with reversal(c) c = 1.
bool spin_membership(const CliffordElement& c);

// First row of the reduced echelon basis of c.Z (ordered_masks column order):
// a canonical representative of c modulo Z*.
CliffordElement normalize_mod_center(const CliffordElement& c);

// A unit of C_0 together with a proper similitude inducing the same
// automorphism of C_0: omega (v w) omega^{-1} = mu(g)^{-1} g(v) g(w).
class OmegaElement {
 public:
  // Checks the conjugation identity on all products e_i e_j; throws LiftFailure.
  OmegaElement(CliffordElement value, Similitude g);

  const CliffordElement& value() const { return value_; }
  const Similitude& similitude() const { return g_; }
  PGOPlusClass induced_class() const { return PGOPlusClass(g_); }

  OmegaElement operator*(const OmegaElement& o) const;
  // omega z for z in the center field.
  OmegaElement times_center(const FieldElement& z) const;

 private:
  struct Trusted {};
  OmegaElement(CliffordElement value, Similitude g, Trusted) : value_(std::move(value)), g_(std::move(g)) {}
  friend OmegaElement lift_similitude_to_omega(AlgebraPtr, const Similitude&);
  CliffordElement value_;
  Similitude g_;
};

// Solves omega (e_1 e_j) = mu^{-1} g(e_1) g(e_j) omega over C_0; the solution
// space is omega Z. Returns the normalize_mod_center representative.
OmegaElement lift_similitude_to_omega(AlgebraPtr alg, const Similitude& g);

// reversal(omega) omega, an element of the center field; throws NotScalar.
FieldElement mu_bar(const OmegaElement& omega);

// z with omega^2 = gamma z, gamma a lift of mu(g)^{-1} g^2; returned modulo k*
// (zeta coefficient scaled to 1, or 1 when z is in k).
FieldElement x_map(const OmegaElement& omega);

// (f, z) in k* x Z* with f^4 = N_{Z/k}(z).
struct UPoint {
  FieldElement f;
  FieldElement z;
};
// Throws NotInU.
UPoint make_upoint(const FieldElement& f, const FieldElement& z);

// (mu_bar(omega), a i(a)^{-1} mu_bar(omega)^2) with a = x_map(omega); m = 2 mod 4 only.
UPoint mu_star(const OmegaElement& omega);

}  // namespace spinob
