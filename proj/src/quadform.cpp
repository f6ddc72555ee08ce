#include "spinob/quadform.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace spinob {

QuadSpace::QuadSpace(const Field& field, Vector diagonal) : field_(&field), diag_(std::move(diagonal)) {
  ensure(diag_.size() >= 2, ErrorCode::DimensionTooSmall, "quadratic space needs dimension >= 2");
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    ensure(&diag_[i].field() == field_, ErrorCode::NotInField, "diagonal entry in wrong field");
    ensure(!diag_[i].is_zero(), ErrorCode::ZeroInput, "diagonal[" + std::to_string(i) + "] is zero");
  }
}

QuadSpace QuadSpace::from_gram(const Matrix& gram) {
  const Field& f = gram.field();
  std::size_t m = gram.rows();
  ensure(m == gram.cols(), ErrorCode::DimensionMismatch, "Gram matrix not square");
  ensure(gram == gram.transpose(), ErrorCode::DimensionMismatch, "Gram matrix not symmetric");
  auto b = [&](const Vector& x, const Vector& y) { return dot(x, gram * y); };
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < m; ++i) basis.push_back(unit_vector(f, m, i));
  Vector diag;
  while (!basis.empty()) {
    // Find an anisotropic vector among the basis or pairwise sums.
    std::optional<Vector> v;
    for (const auto& x : basis)
      if (!b(x, x).is_zero()) {
        v = x;
        break;
      }
    for (std::size_t i = 0; !v && i < basis.size(); ++i)
      for (std::size_t j = i + 1; !v && j < basis.size(); ++j) {
        Vector s = add(basis[i], basis[j]);
        if (!b(s, s).is_zero()) v = s;
      }
    ensure(v.has_value(), ErrorCode::ZeroInput, "Gram matrix is singular");
    FieldElement qv = b(*v, *v);
    diag.push_back(qv);
    std::vector<Vector> rest;
    for (const auto& x : basis) {
      Vector y = sub(x, scale(*v, b(x, *v) / qv));
      if (!is_zero_vector(y)) rest.push_back(y);
    }
    // Drop dependent vectors.
    std::vector<Vector> indep;
    for (const auto& y : rest) {
      auto trial = indep;
      trial.push_back(y);
      if (Matrix::from_rows(f, trial).rank() == trial.size()) indep = std::move(trial);
    }
    ensure(indep.size() + diag.size() == m, ErrorCode::ZeroInput, "Gram matrix is singular");
    basis = std::move(indep);
  }
  return QuadSpace(f, diag);
}

FieldElement QuadSpace::evaluate(const Vector& v) const {
  ensure(v.size() == diag_.size(), ErrorCode::DimensionMismatch,
         "vector of length " + std::to_string(v.size()) + " in dimension " + std::to_string(diag_.size()));
  FieldElement s = field_->zero();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s += diag_[i] * v[i] * v[i];
  return s;
}

FieldElement QuadSpace::bilinear(const Vector& x, const Vector& y) const {
  ensure(x.size() == diag_.size() && y.size() == diag_.size(), ErrorCode::DimensionMismatch, "bilinear shapes");
  FieldElement s = field_->zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero() && !y[i].is_zero()) s += diag_[i] * x[i] * y[i];
  return s;
}

QuadSpace QuadSpace::scaled(const FieldElement& f) const { return QuadSpace(*field_, scale(diag_, f)); }

QuadSpace QuadSpace::base_change(const Field& into) const {
  Vector d;
  for (const auto& x : diag_) d.push_back(embed(x, into));
  return QuadSpace(into, d);
}

std::string QuadSpace::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < diag_.size(); ++i) s += (i ? "," : "") + diag_[i].to_string();
  return s + "> over " + field_->name();
}

FieldElement discriminant_value(const QuadSpace& space) {
  std::size_t m = space.dimension();
  FieldElement d = space.field().one();
  for (const auto& x : space.diagonal()) d *= x;
  return (m * (m - 1) / 2) % 2 == 0 ? d : -d;
}

SquareClass discriminant(const QuadSpace& space) { return SquareClass(discriminant_value(space)); }

// ---------------------------------------------------------------------------

Isometry::Isometry(QuadSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  std::size_t m = space_.dimension();
  ensure(matrix_.rows() == m && matrix_.cols() == m, ErrorCode::DimensionMismatch, "isometry matrix shape");
  Matrix g = space_.gram();
  ensure(matrix_.transpose() * g * matrix_ == g, ErrorCode::NotAnIsometry, "M^T G M != G");
}

Isometry Isometry::identity(const QuadSpace& space) {
  return Isometry(space, Matrix::identity(space.field(), space.dimension()), Unchecked{});
}

Isometry Isometry::operator*(const Isometry& o) const {
  ensure(space_ == o.space_, ErrorCode::DimensionMismatch, "isometries of different spaces");
  return Isometry(space_, matrix_ * o.matrix_, Unchecked{});
}

Isometry Isometry::inverse() const {
  // g^{-1} = G^{-1} g^T G for isometries.
  Matrix g = space_.gram();
  Matrix ginv = g;
  for (std::size_t i = 0; i < space_.dimension(); ++i) ginv(i, i) = g(i, i).inverse();
  return Isometry(space_, ginv * matrix_.transpose() * g, Unchecked{});
}

Isometry reflection(const QuadSpace& space, const Vector& v) {
  FieldElement qv = space.evaluate(v);
  ensure(!qv.is_zero(), ErrorCode::IsotropicVector, "reflection in isotropic vector " + vector_to_string(v));
  const Field& f = space.field();
  std::size_t m = space.dimension();
  Matrix r = Matrix::identity(f, m);
  FieldElement c = f.from_int(2) / qv;
  // tau_v(e_j) = e_j - (2 d_j v_j / q(v)) v.
  for (std::size_t j = 0; j < m; ++j) {
    if (v[j].is_zero()) continue;
    FieldElement coef = c * space.diagonal()[j] * v[j];
    for (std::size_t i = 0; i < m; ++i)
      if (!v[i].is_zero()) r(i, j) -= coef * v[i];
  }
  return Isometry(space, r, Isometry::Unchecked{});
}

Isometry compose_reflections(const QuadSpace& space, const std::vector<Vector>& vectors) {
  Isometry g = Isometry::identity(space);
  for (const auto& v : vectors) g = g * reflection(space, v);
  return g;
}

namespace {

std::vector<Vector> candidate_vectors(const QuadSpace& space) {
  const Field& f = space.field();
  std::size_t m = space.dimension();
  std::vector<Vector> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(unit_vector(f, m, i));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      c.push_back(add(unit_vector(f, m, i), unit_vector(f, m, j)));
      c.push_back(sub(unit_vector(f, m, i), unit_vector(f, m, j)));
    }
  return c;
}

struct Decomposer {
  const QuadSpace& space;
  std::vector<Vector> candidates;

  // Greedy step: a reflection sending g(x) back to x fixes x and keeps every
  // vector g already fixes. When all moved differences are isotropic, branch
  // on a reflection in an anisotropic candidate.
  std::optional<std::vector<Vector>> run(const Matrix& g, std::size_t budget) const {
    if (g.is_identity()) return std::vector<Vector>{};
    if (budget == 0) return std::nullopt;
    for (const auto& x : candidates) {
      Vector w = sub(x, g * x);
      if (is_zero_vector(w) || space.evaluate(w).is_zero()) continue;
      Matrix next = reflection(space, w).matrix() * g;
      auto rest = run(next, budget - 1);
      if (!rest) continue;
      rest->insert(rest->begin(), w);
      return rest;
    }
    if (budget < 2) return std::nullopt;
    for (const auto& u : candidates) {
      if (space.evaluate(u).is_zero()) continue;
      Matrix next = reflection(space, u).matrix() * g;
      auto rest = run(next, budget - 1);
      if (rest) {
        rest->insert(rest->begin(), u);
        return rest;
      }
    }
    return std::nullopt;
  }
};

std::vector<Vector> decompose(const Isometry& g, std::vector<Vector> candidates) {
  Decomposer d{g.space(), std::move(candidates)};
  auto result = d.run(g.matrix(), g.space().dimension());
  ensure(result.has_value(), ErrorCode::AssertionFailure,
         "Cartan-Dieudonne search exceeded dimension bound for " + g.matrix().to_string());
  return *result;
}

}  // namespace

std::vector<Vector> cartan_dieudonne(const Isometry& g) { return decompose(g, candidate_vectors(g.space())); }

std::vector<Vector> cartan_dieudonne(const Isometry& g, std::mt19937_64& rng) {
  auto c = candidate_vectors(g.space());
  for (std::size_t i = c.size(); i > 1; --i) std::swap(c[i - 1], c[rng() % i]);
  return decompose(g, std::move(c));
}

SquareClass spinor_norm_of_vectors(const QuadSpace& space, const std::vector<Vector>& vectors) {
  FieldElement prod = space.field().one();
  for (const auto& v : vectors) prod *= space.evaluate(v);
  return SquareClass(prod);
}

SquareClass spinor_norm(const Isometry& g) {
  ensure(g.is_proper(), ErrorCode::ImproperIsometry, "spinor norm of an improper isometry");
  return spinor_norm_of_vectors(g.space(), cartan_dieudonne(g));
}

void for_each_vector(const Field& field, std::size_t dim, const std::function<bool(const Vector&)>& visit) {
  std::uint64_t q = field.order();
  std::vector<std::uint64_t> idx(dim, 0);
  Vector v(dim, field.zero());
  while (true) {
    if (!visit(v)) return;
    std::size_t i = 0;
    while (i < dim) {
      if (++idx[i] < q) {
        v[i] = field.element_at(idx[i]);
        break;
      }
      idx[i] = 0;
      v[i] = field.zero();
      ++i;
    }
    if (i == dim) return;
  }
}

std::vector<SquareClass> spinor_norm_group(const QuadSpace& space) {
  const Field& f = space.field();
  ensure(f.is_finite(), ErrorCode::UnsupportedField,
         "spinor_norm_group enumerates vectors and needs a finite field, got " + f.name());
  std::vector<SquareClass> represented;
  auto add_class = [](std::vector<SquareClass>& set, const SquareClass& c) {
    if (std::find(set.begin(), set.end(), c) == set.end()) set.push_back(c);
  };
  for_each_vector(f, space.dimension(), [&](const Vector& v) {
    FieldElement qv = space.evaluate(v);
    if (!qv.is_zero()) add_class(represented, SquareClass(qv));
    return represented.size() < 2;  // |k*/k*^2| = 2 over a finite field
  });
  std::vector<SquareClass> group;
  for (const auto& a : represented)
    for (const auto& b : represented) add_class(group, a * b);
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) add_class(group, group[i] * group[j]);
  std::sort(group.begin(), group.end(), [&](const SquareClass& a, const SquareClass& b) {
    return f.index_of(a.representative()) < f.index_of(b.representative());
  });
  return group;
}

FieldElement random_element(const Field& field, std::mt19937_64& rng) {
  if (field.is_finite()) return field.element_at(rng() % field.order());
  switch (field.kind()) {
    case Field::Kind::Rationals: {
      long num = static_cast<long>(rng() % 9) - 4;
      long den = 1 + static_cast<long>(rng() % 3);
      return field.from_rational(mpq_class(num, den));
    }
    default: return field.make(random_element(*field.base(), rng), random_element(*field.base(), rng));
  }
}

Vector random_vector(const Field& field, std::size_t dim, std::mt19937_64& rng) {
  Vector v;
  for (std::size_t i = 0; i < dim; ++i) v.push_back(random_element(field, rng));
  return v;
}

Vector random_anisotropic_vector(const QuadSpace& space, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vector v = random_vector(space.field(), space.dimension(), rng);
    if (!space.evaluate(v).is_zero()) return v;
  }
  throw MathError(ErrorCode::NoAnisotropicVector, "random search failed in " + space.to_string());
}

Isometry random_isometry(const QuadSpace& space, std::mt19937_64& rng, bool proper) {
  std::size_t m = space.dimension();
  std::size_t count = 1 + rng() % (2 * m);
  if (proper && count % 2 == 1) ++count;
  std::vector<Vector> vs;
  for (std::size_t i = 0; i < count; ++i) vs.push_back(random_anisotropic_vector(space, rng));
  return compose_reflections(space, vs);
}

std::vector<std::uint64_t> matrix_key(const Matrix& m) {
  std::vector<std::uint64_t> key;
  key.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) key.push_back(m.field().index_of(m(i, j)));
  return key;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : k) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

std::vector<Matrix> enumerate_orthogonal_group(const QuadSpace& space, std::size_t limit) {
  const Field& f = space.field();
  ensure(f.is_finite(), ErrorCode::UnsupportedField, "orthogonal group enumeration needs a finite field");
  std::size_t m = space.dimension();
  // One reflection per anisotropic line: first nonzero coordinate equal to 1.
  std::vector<Matrix> gens;
  for_each_vector(f, m, [&](const Vector& v) {
    std::size_t i = 0;
    while (i < m && v[i].is_zero()) ++i;
    if (i < m && v[i].is_one() && !space.evaluate(v).is_zero()) gens.push_back(reflection(space, v).matrix());
    return true;
  });
  std::vector<Matrix> elements{Matrix::identity(f, m)};
  std::unordered_set<std::vector<std::uint64_t>, KeyHash> seen{matrix_key(elements.front())};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& r : gens) {
      Matrix next = elements[head] * r;
      if (seen.insert(matrix_key(next)).second) {
        ensure(elements.size() < limit, ErrorCode::DimensionTooLarge,
               "orthogonal group of " + space.to_string() + " exceeds enumeration limit");
        elements.push_back(std::move(next));
      }
    }
  }
  return elements;
}

}  // namespace spinob
