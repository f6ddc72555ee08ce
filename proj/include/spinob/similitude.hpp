#pragma once

#include <optional>
#include <random>
#include <vector>

#include "spinob/quadform.hpp"

namespace spinob {

// Linear g with q(g x) = mu(g) q(x), i.e. M^T G M = mu G.
class Similitude {
 public:
  // Validates the matrix and reads off the multiplier; throws NotASimilitude.
  Similitude(QuadSpace space, Matrix matrix);
  static Similitude identity(const QuadSpace& space);
  static Similitude scalar(const QuadSpace& space, const FieldElement& c);
  static Similitude from_isometry(const Isometry& g);

  const QuadSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  const FieldElement& multiplier() const { return mu_; }
  FieldElement determinant() const { return matrix_.determinant(); }
  // det = mu^n in dimension 2n; throws OddDimension.
  bool is_proper() const;
  Vector apply(const Vector& v) const { return matrix_ * v; }

  Similitude operator*(const Similitude& o) const;
  Similitude inverse() const;
  Similitude scaled(const FieldElement& c) const;
  // mu(g)^{-1} g^2 style conversions need the isometry view; throws NotAnIsometry.
  Isometry as_isometry() const { return Isometry(space_, matrix_); }
  bool operator==(const Similitude& o) const { return matrix_ == o.matrix_; }

 private:
  Similitude(QuadSpace space, Matrix matrix, FieldElement mu)
      : space_(std::move(space)), matrix_(std::move(matrix)), mu_(std::move(mu)) {}

  QuadSpace space_;
  Matrix matrix_;
  FieldElement mu_;
};

FieldElement multiplier(const Similitude& g);

// g * tau_{e_1}; throws ImproperIsometry when g is already proper.
Similitude correct_to_proper(const Similitude& g);

// Projective class of a proper similitude, stored with its first nonzero
// matrix entry scaled to 1.
class PGOPlusClass {
 public:
  explicit PGOPlusClass(const Similitude& g);
  const Similitude& representative() const { return rep_; }
  bool operator==(const PGOPlusClass& o) const { return rep_ == o.rep_; }

 private:
  Similitude rep_;
};

enum class SearchStatus { Found, NotFound, Unknown };

struct SimilitudeSearch {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<Similitude> similitude;
  // Human-readable reason for NotFound / Unknown.
  std::string note;
};

// Builds an isometry f.q -> q column by column: pick x_1 in V with
// q(x_1) = f d_1, pass to x_1^perp and repeat. Once f.q = q every partial
// choice extends, so failure at an exactly decided step proves nonexistence.
// Over Q the per-step search is bounded by the height bound.
SimilitudeSearch find_similitude_with_multiplier(const QuadSpace& space, const FieldElement& f, long bound = 50);

// Orthogonal basis of span(vectors) for a regular subspace.
std::vector<Vector> orthogonal_basis(const QuadSpace& space, std::vector<Vector> vectors);

// Random proper similitude: random multiplier (finite fields and Q) times a
// random proper isometry. Falls back to isometries and scalars when the
// multiplier search is inconclusive.
Similitude random_proper_similitude(const QuadSpace& space, std::mt19937_64& rng, long bound = 20);

// Canonical representatives of PGO+(q)(k) for finite k, in a deterministic
// order: s_f * h for h in SO(q) and one s_f per multiplier class.
std::vector<Similitude> enumerate_pgo_plus(const QuadSpace& space);

}  // namespace spinob
