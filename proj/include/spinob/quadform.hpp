#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "spinob/exactfield.hpp"
#include "spinob/linalg.hpp"

namespace spinob {

// Regular diagonal quadratic space <d_1, ..., d_m>.
class QuadSpace {
 public:
  QuadSpace(const Field& field, Vector diagonal);
  // Diagonalizes a symmetric Gram matrix (b(e_i, e_j) convention).
  static QuadSpace from_gram(const Matrix& gram);

  const Field& field() const { return *field_; }
  std::size_t dimension() const { return diag_.size(); }
  const Vector& diagonal() const { return diag_; }

  FieldElement evaluate(const Vector& v) const;
  // b(x, y) = (q(x + y) - q(x) - q(y)) / 2.
  FieldElement bilinear(const Vector& x, const Vector& y) const;
  Matrix gram() const { return Matrix::diagonal(diag_); }
  QuadSpace scaled(const FieldElement& f) const;
  QuadSpace base_change(const Field& into) const;
  std::string to_string() const;

  bool operator==(const QuadSpace& o) const { return field_ == o.field_ && diag_ == o.diag_; }

 private:
  const Field* field_;
  Vector diag_;
};

// (-1)^{m(m-1)/2} * prod d_i.
FieldElement discriminant_value(const QuadSpace& space);
SquareClass discriminant(const QuadSpace& space);

class Isometry {
 public:
  // Validates M^T G M = G exactly; throws NotAnIsometry.
  Isometry(QuadSpace space, Matrix matrix);
  static Isometry identity(const QuadSpace& space);

  const QuadSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  FieldElement determinant() const { return matrix_.determinant(); }
  bool is_proper() const { return determinant().is_one(); }
  Vector apply(const Vector& v) const { return matrix_ * v; }
  Isometry operator*(const Isometry& o) const;
  Isometry inverse() const;
  bool operator==(const Isometry& o) const { return matrix_ == o.matrix_; }

 private:
  struct Unchecked {};
  Isometry(QuadSpace space, Matrix matrix, Unchecked) : space_(std::move(space)), matrix_(std::move(matrix)) {}
  friend Isometry reflection(const QuadSpace&, const Vector&);

  QuadSpace space_;
  Matrix matrix_;
};

// tau_v(x) = x - (2 b(x, v) / q(v)) v; throws IsotropicVector.
Isometry reflection(const QuadSpace& space, const Vector& v);
Isometry compose_reflections(const QuadSpace& space, const std::vector<Vector>& vectors);

// Vectors v_1..v_r, r <= m, with g = tau_{v_1} ... tau_{v_r}. The default
// pivot takes the first candidate in basis order; passing a generator
// shuffles candidate order (a different, equally valid decomposition).
std::vector<Vector> cartan_dieudonne(const Isometry& g);
std::vector<Vector> cartan_dieudonne(const Isometry& g, std::mt19937_64& rng);

// Class of prod q(v_i) over a decomposition; throws ImproperIsometry.
SquareClass spinor_norm(const Isometry& g);
SquareClass spinor_norm_of_vectors(const QuadSpace& space, const std::vector<Vector>& vectors);

// Subgroup of k*/k*^2 generated by q(v) q(w); finite fields only.
std::vector<SquareClass> spinor_norm_group(const QuadSpace& space);

// Enumerates all vectors of a finite space in index order (first coordinate fastest).
void for_each_vector(const Field& field, std::size_t dim, const std::function<bool(const Vector&)>& visit);

// Uniform element of a finite field; small-height element otherwise.
FieldElement random_element(const Field& field, std::mt19937_64& rng);
Vector random_vector(const Field& field, std::size_t dim, std::mt19937_64& rng);
Vector random_anisotropic_vector(const QuadSpace& space, std::mt19937_64& rng);
// Product of 1..2m random reflections; forced proper when requested.
Isometry random_isometry(const QuadSpace& space, std::mt19937_64& rng, bool proper);

// O(q)(k) as the closure of all reflections (finite fields); throws
// DimensionTooLarge beyond the limit.
std::vector<Matrix> enumerate_orthogonal_group(const QuadSpace& space, std::size_t limit = 200000);

// Stable hash key for matrices over finite fields.
std::vector<std::uint64_t> matrix_key(const Matrix& m);

}  // namespace spinob
