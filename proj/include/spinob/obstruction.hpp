#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinob/clifford.hpp"

namespace spinob {

// The data shared by every map of the obstruction diagrams: the form, its
// Clifford algebra and the discriminant field Z = k(zeta). Even dimension
// 2n only; the parity of n selects the U-valued (odd) or Z-valued (even) side.
class ObstructionContext {
 public:
  // Throws OddDimension / SplitDiscriminant.
  explicit ObstructionContext(const QuadSpace& space);
  const QuadSpace& space() const { return space_; }
  const AlgebraPtr& algebra() const { return alg_; }
  const Field& k() const { return space_.field(); }
  const Field& z() const { return *z_; }
  bool n_odd() const { return n_odd_; }

 private:
  QuadSpace space_;
  AlgebraPtr alg_;
  const Field* z_;
  bool n_odd_;
};

// A U-point (n odd) or an element of Z* (n even).
using Theta = std::variant<UPoint, FieldElement>;

Theta theta_mul(const Theta& a, const Theta& b);
Theta theta_div(const Theta& a, const Theta& b);
bool theta_equal(const Theta& a, const Theta& b);
std::string theta_to_string(const Theta& t);

// mu* (n odd) or mu_bar (n even).
Theta omega_map(const ObstructionContext& ctx, const OmegaElement& omega);

// Equality in U/U_0: a/b = (N z0, z0^4) for some z0 in Z*, decided exactly via
// fourth roots in Z.
bool u_equivalent(const UPoint& a, const UPoint& b);

class UClass {
 public:
  explicit UClass(UPoint rep) : rep_(std::move(rep)) {}
  const UPoint& representative() const { return rep_; }
  bool operator==(const UClass& o) const { return u_equivalent(rep_, o.rep_); }

 private:
  UPoint rep_;
};

// Over finite fields the least (index of f, index of z) point of the coset;
// elsewhere the point itself.
UClass u0_reduce(const UPoint& p);

// Equality of the classes of a and b: in U/U_0 (n odd) or Z*/Z*^2 (n even).
bool same_class(const ObstructionContext& ctx, const Theta& a, const Theta& b);

// S([g]): the image of a lift of g under mu* or mu_bar (a class representative).
Theta S_of(const ObstructionContext& ctx, const Similitude& g);
// [f, f^2] (n odd) or the inclusion k* -> Z* (n even).
Theta i_map(const ObstructionContext& ctx, const FieldElement& f);
// N(z0) with z0 / i(z0) = f^{-2} z (n odd) or N(z) (n even), modulo squares.
SquareClass j_map(const ObstructionContext& ctx, const Theta& t);

// z0 with z0 / i(z0) = w for w of norm 1; throws Hilbert90Failure otherwise.
FieldElement hilbert90(const FieldElement& w, const Field& k);

enum class SpecialStatus { Special, NotSpecial, Unknown };

struct SpecialResult {
  SpecialStatus status = SpecialStatus::Unknown;
  std::optional<Similitude> witness;
  SquareClass j_value;
  std::string note;
};

// j([theta]) = mu([g]) for some proper similitude g, found by the multiplier search.
SpecialResult is_special(const ObstructionContext& ctx, const Theta& theta, long bound = 50);

enum class SpinorStatus { Yes, No, Unknown };

struct SpinorNormDecision {
  SpinorStatus status = SpinorStatus::Unknown;
  // Yes: an even number of vectors with prod q(v_i) = alpha exactly.
  std::vector<Vector> vectors;
  std::string witness;
};

// Finite fields: exact. Q: Yes by bounded search, No only from the sign of a
// definite form, otherwise Unknown.
SpinorNormDecision is_spinor_norm(const QuadSpace& space, const FieldElement& alpha, long bound = 6);

enum class Verdict { SpinorNorm, NotSpinorNorm, Unknown };
std::string verdict_name(Verdict v);

struct ObstructionResult {
  Theta theta;
  Similitude witness;
  // [theta] = S([g]) i(alpha) exactly up to the U_0 / Z*^2 factor recorded in y:
  // n odd: theta / S = (alpha N(y), alpha^2 y^4); n even: theta / S = alpha y^2.
  FieldElement alpha;
  FieldElement y;
  Verdict verdict = Verdict::Unknown;
  SpinorNormDecision spinor;
  // SpinorNorm verdicts: omega over k with omega_map(omega) = theta exactly.
  std::optional<OmegaElement> certificate;
};

// Throws NotInImageOfI when theta S([g])^{-1} is not in the image of i.
ObstructionResult obstruction_alpha(const ObstructionContext& ctx, const Theta& theta, const Similitude& g,
                                    long bound = 6);

// Recomputes every exact identity recorded in a result.
bool verify_obstruction(const ObstructionContext& ctx, const ObstructionResult& r);

struct UCount {
  std::size_t u = 0;
  std::size_t u0 = 0;
};
// |U(k)| and |U_0(k)| by enumeration of k* x Z*.
UCount count_u(const ObstructionContext& ctx);

struct H1Description {
  std::uint64_t order = 0;
  std::vector<std::uint64_t> invariant_factors;
  std::uint64_t module_order = 0;
  std::uint64_t splitting_degree = 0;
};

// M / (F - 1) M for a finite cyclic-Galois module given by its elements (a
// multiplicative group of field elements) and the Frobenius action.
std::uint64_t coinvariants_order(const std::vector<FieldElement>& module,
                                 const std::function<FieldElement(const FieldElement&)>& frobenius);

// H^1(k, mu_4[Z]) for finite k as Frobenius coinvariants of
// mu_4[Z](kbar) = {(a, a^{-1}) : a^4 = 1}, with Frobenius (a, b) -> (b^q, a^q).
H1Description h1_mu4Z_finite_field(const QuadSpace& space);

}  // namespace spinob
