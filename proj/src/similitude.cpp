#include "spinob/similitude.hpp"

#include <set>

#include "spinob/hilbert.hpp"
#include "spinob/integer.hpp"

namespace spinob {

Similitude::Similitude(QuadSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  std::size_t m = space_.dimension();
  ensure(matrix_.rows() == m && matrix_.cols() == m, ErrorCode::DimensionMismatch, "similitude matrix shape");
  Matrix g = space_.gram();
  Matrix lhs = matrix_.transpose() * g * matrix_;
  mu_ = lhs(0, 0) / g(0, 0);
  ensure(!mu_.is_zero(), ErrorCode::NotASimilitude, "multiplier is zero");
  ensure(lhs == g.scaled(mu_), ErrorCode::NotASimilitude, "M^T G M is not a multiple of G");
}

Similitude Similitude::identity(const QuadSpace& space) {
  return Similitude(space, Matrix::identity(space.field(), space.dimension()), space.field().one());
}

Similitude Similitude::scalar(const QuadSpace& space, const FieldElement& c) {
  ensure(!c.is_zero(), ErrorCode::ZeroInput, "scalar similitude by zero");
  return Similitude(space, Matrix::identity(space.field(), space.dimension()).scaled(c), c * c);
}

Similitude Similitude::from_isometry(const Isometry& g) {
  return Similitude(g.space(), g.matrix(), g.space().field().one());
}

bool Similitude::is_proper() const {
  std::size_t m = space_.dimension();
  ensure(m % 2 == 0, ErrorCode::OddDimension, "properness needs even dimension, got " + std::to_string(m));
  return determinant() == mu_.pow(static_cast<long>(m / 2));
}

Similitude Similitude::operator*(const Similitude& o) const {
  ensure(space_ == o.space_, ErrorCode::DimensionMismatch, "similitudes of different spaces");
  return Similitude(space_, matrix_ * o.matrix_, mu_ * o.mu_);
}

Similitude Similitude::inverse() const {
  // g^{-1} = mu^{-1} G^{-1} g^T G.
  Matrix g = space_.gram();
  Matrix ginv = g;
  for (std::size_t i = 0; i < space_.dimension(); ++i) ginv(i, i) = g(i, i).inverse();
  FieldElement inv = mu_.inverse();
  return Similitude(space_, (ginv * matrix_.transpose() * g).scaled(inv), inv);
}

Similitude Similitude::scaled(const FieldElement& c) const {
  ensure(!c.is_zero(), ErrorCode::ZeroInput, "scaling a similitude by zero");
  return Similitude(space_, matrix_.scaled(c), mu_ * c * c);
}

FieldElement multiplier(const Similitude& g) { return g.multiplier(); }

Similitude correct_to_proper(const Similitude& g) {
  ensure(!g.is_proper(), ErrorCode::ImproperIsometry, "correct_to_proper expects an improper similitude");
  const QuadSpace& s = g.space();
  // Diagonal forms: e_1 is anisotropic.
  Similitude h = Similitude::from_isometry(reflection(s, unit_vector(s.field(), s.dimension(), 0)));
  Similitude out = g * h;
  ensure(out.is_proper(), ErrorCode::AssertionFailure, "reflection correction did not produce a proper similitude");
  return out;
}

PGOPlusClass::PGOPlusClass(const Similitude& g) : rep_(g) {
  ensure(g.is_proper(), ErrorCode::ImproperIsometry, "PGO+ class of an improper similitude");
  const Matrix& m = g.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) {
        rep_ = g.scaled(m(i, j).inverse());
        return;
      }
}

// ---------------------------------------------------------------------------

std::vector<Vector> orthogonal_basis(const QuadSpace& space, std::vector<Vector> basis) {
  std::vector<Vector> out;
  while (!basis.empty()) {
    std::size_t keep = basis.size(), drop = basis.size();
    Vector v;
    for (std::size_t i = 0; i < basis.size() && keep == basis.size(); ++i)
      if (!space.evaluate(basis[i]).is_zero()) {
        v = basis[i];
        keep = drop = i;
      }
    for (std::size_t i = 0; keep == basis.size() && i < basis.size(); ++i)
      for (std::size_t j = i + 1; keep == basis.size() && j < basis.size(); ++j) {
        Vector s = add(basis[i], basis[j]);
        if (!space.evaluate(s).is_zero()) {
          v = s;
          keep = i;
          drop = j;
        }
      }
    ensure(keep < basis.size(), ErrorCode::ZeroInput, "subspace is degenerate");
    FieldElement qv = space.evaluate(v);
    std::vector<Vector> rest;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (i == drop) continue;
      rest.push_back(sub(basis[i], scale(v, space.bilinear(basis[i], v) / qv)));
    }
    out.push_back(std::move(v));
    basis = std::move(rest);
  }
  return out;
}

namespace {

enum class StepResult { Found, Impossible, Exhausted };

struct Step {
  StepResult result;
  Vector coords;  // coordinates with respect to the current orthogonal basis
};

bool is_square_int(const mpz_class& r, mpz_class& root) {
  if (r < 0) return false;
  if (!mpz_perfect_square_p(r.get_mpz_t())) return false;
  root = sqrt(r);
  return true;
}

// Odometer over integer tuples with entries in [-h, h] (t in [1, h]) whose
// maximum absolute value is exactly h.
struct Shell {
  std::size_t k;
  long h;
  std::vector<long> n;  // n[0] = t > 0, n[1..] free
  bool first = true;

  bool next() {
    while (true) {
      if (first) {
        first = false;
        n.assign(k, -h);
        n[0] = 1;
      } else {
        std::size_t i = 0;
        while (i < k) {
          long hi = h;
          if (n[i] < hi) {
            ++n[i];
            break;
          }
          n[i] = i == 0 ? 1 : -h;
          ++i;
        }
        if (i == k) return false;
      }
      long mx = 0;
      for (long x : n) mx = std::max(mx, std::labs(x));
      if (mx == h) return true;
    }
  }
};

// Solve sum a_i y_i^2 = c over Q with y_i = n_i / t.
Step rational_step(const std::vector<FieldElement>& a, const FieldElement& c, long bound, long budget) {
  const Field& f = c.field();
  std::size_t k = a.size();
  if (k == 1) {
    mpq_class r;
    if (rational_sqrt((c / a[0]).rational(), r)) return {StepResult::Found, {f.from_rational(r)}};
    return {StepResult::Impossible, {}};
  }
  std::vector<mpq_class> ar;
  for (const auto& x : a) ar.push_back(x.rational());
  if (!form_represents(ar, c.rational())) return {StepResult::Impossible, {}};

  mpz_class l = c.rational().get_den();
  for (const auto& x : a) l = lcm(l, mpz_class(x.rational().get_den()));
  std::vector<mpz_class> A;
  for (const auto& x : a) A.push_back(mpz_class(x.rational() * l));
  mpz_class C(c.rational() * l);

  long evaluations = 0;
  for (long h = 1; h <= bound; ++h) {
    Shell shell{k, h, {}};
    while (shell.next()) {
      if (++evaluations > budget) return {StepResult::Exhausted, {}};
      const auto& n = shell.n;
      mpz_class r = C * n[0] * n[0];
      for (std::size_t i = 1; i < k; ++i) r -= A[i - 1] * n[i] * n[i];
      if (r % A[k - 1] != 0) continue;
      mpz_class root;
      if (!is_square_int(r / A[k - 1], root)) continue;
      Vector y;
      for (std::size_t i = 1; i < k; ++i) y.push_back(f.from_rational(mpq_class(n[i], n[0])));
      y.push_back(f.from_rational(mpq_class(root, mpz_class(n[0]))));
      return {StepResult::Found, y};
    }
  }
  return {StepResult::Exhausted, {}};
}

Step finite_step(const std::vector<FieldElement>& a, const FieldElement& c) {
  const Field& f = c.field();
  if (a.size() == 1) {
    auto r = sqrt(c / a[0]);
    if (r) return {StepResult::Found, {*r}};
    return {StepResult::Impossible, {}};
  }
  // Binary regular forms over a finite field represent every nonzero scalar.
  for (const auto& y1 : f.elements()) {
    FieldElement r = (c - a[0] * y1 * y1) / a[1];
    std::optional<FieldElement> y2 = r.is_zero() ? std::optional<FieldElement>(f.zero()) : sqrt(r);
    if (!y2) continue;
    Vector y(a.size(), f.zero());
    y[0] = y1;
    y[1] = *y2;
    return {StepResult::Found, y};
  }
  return {StepResult::Impossible, {}};
}

// Other characteristic-zero fields: small rational coordinates, last one by sqrt.
Step generic_step(const std::vector<FieldElement>& a, const FieldElement& c, long bound, long budget) {
  const Field& f = c.field();
  std::size_t k = a.size();
  auto last = [&](const FieldElement& rest) -> std::optional<FieldElement> {
    FieldElement r = rest / a[k - 1];
    if (r.is_zero()) return f.zero();
    return sqrt(r);
  };
  if (k == 1) {
    auto r = last(c);
    if (r) return {StepResult::Found, {*r}};
    return {StepResult::Impossible, {}};
  }
  long evaluations = 0;
  for (long h = 1; h <= bound; ++h) {
    Shell shell{k, h, {}};
    while (shell.next()) {
      if (++evaluations > budget) return {StepResult::Exhausted, {}};
      Vector y;
      FieldElement rest = c;
      for (std::size_t i = 1; i < k; ++i) {
        y.push_back(f.from_rational(mpq_class(shell.n[i], shell.n[0])));
        rest -= a[i - 1] * y.back() * y.back();
      }
      auto r = last(rest);
      if (!r) continue;
      y.push_back(*r);
      return {StepResult::Found, y};
    }
  }
  return {StepResult::Exhausted, {}};
}

}  // namespace

namespace {

// Diagonal split into equal pairs <d, d>: the rotation-scaling block
// (x, y) -> (a x - b y, b x + a y) on each pair has multiplier a^2 + b^2 = f.
std::optional<Similitude> paired_similitude(const QuadSpace& space, const FieldElement& f) {
  const auto& d = space.diagonal();
  std::size_t m = d.size();
  if (m % 2) return std::nullopt;
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i].rational() < d[j].rational(); });
  for (std::size_t i = 0; i < m; i += 2)
    if (d[order[i]] != d[order[i + 1]]) return std::nullopt;
  mpq_class q = f.rational();
  mpz_class den = q.get_den(), x, y;
  if (!two_squares(mpz_class(q.get_num() * den), x, y)) return std::nullopt;
  const Field& k = space.field();
  FieldElement a = k.from_rational(mpq_class(x, den)), b = k.from_rational(mpq_class(y, den));
  Matrix g(k, m, m);
  for (std::size_t t = 0; t < m; t += 2) {
    std::size_t i = order[t], j = order[t + 1];
    g(i, i) = a;
    g(i, j) = -b;
    g(j, i) = b;
    g(j, j) = a;
  }
  return Similitude(space, g);
}

}  // namespace

SimilitudeSearch find_similitude_with_multiplier(const QuadSpace& space, const FieldElement& f, long bound) {
  ensure(!f.is_zero(), ErrorCode::ZeroInput, "multiplier must be nonzero");
  ensure(&f.field() == &space.field(), ErrorCode::NotInField, "multiplier in wrong field");
  const Field& k = space.field();
  std::size_t m = space.dimension();
  SimilitudeSearch out;
  auto finish = [&](Similitude g) {
    if (m % 2 == 0 && !g.is_proper()) g = correct_to_proper(g);
    ensure(g.multiplier() == f, ErrorCode::AssertionFailure, "constructed similitude has the wrong multiplier");
    out.status = SearchStatus::Found;
    out.similitude = std::move(g);
    return out;
  };
  if (auto c = sqrt(f)) return finish(Similitude::scalar(space, *c));
  if (k.kind() == Field::Kind::Rationals)
    if (auto g = paired_similitude(space, f)) return finish(*g);

  long budget = k.is_finite() ? 0 : (k.kind() == Field::Kind::Rationals ? 3000000 : 20000);
  std::vector<Vector> w;
  for (std::size_t i = 0; i < m; ++i) w.push_back(unit_vector(k, m, i));
  std::vector<Vector> columns;
  for (std::size_t i = 0; i < m; ++i) {
    FieldElement target = f * space.diagonal()[i];
    std::vector<FieldElement> a;
    for (const auto& v : w) a.push_back(space.evaluate(v));
    Step step = k.is_finite() ? finite_step(a, target)
                : k.kind() == Field::Kind::Rationals ? rational_step(a, target, bound, budget)
                                                     : generic_step(a, target, std::min(bound, 6L), budget);
    if (step.result != StepResult::Found) {
      out.status = step.result == StepResult::Impossible ? SearchStatus::NotFound : SearchStatus::Unknown;
      out.note = (step.result == StepResult::Impossible ? "no vector of value " : "search bound reached for value ") +
                 target.to_string() + " in a complement of dimension " + std::to_string(w.size());
      return out;
    }
    Vector x = zero_vector(k, m);
    std::size_t pivot = 0;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (!step.coords[j].is_zero()) {
        x = add(x, scale(w[j], step.coords[j]));
        pivot = j;
      }
    columns.push_back(x);
    std::vector<Vector> rest;
    FieldElement qx = space.evaluate(x);
    for (std::size_t j = 0; j < w.size(); ++j)
      if (j != pivot) rest.push_back(sub(w[j], scale(x, space.bilinear(w[j], x) / qx)));
    w = orthogonal_basis(space, rest);
  }
  return finish(Similitude(space, Matrix::from_columns(k, columns)));
}

namespace {

std::optional<Similitude> block_similitude(const QuadSpace& space, std::mt19937_64& rng) {
  std::size_t m = space.dimension();
  if (m % 2) return std::nullopt;
  const auto& d = space.diagonal();
  FieldElement c = d[0] * d[1];
  for (std::size_t i = 2; i < m; i += 2)
    if (d[i] * d[i + 1] != c) return std::nullopt;
  const Field& k = space.field();
  FieldElement a = random_element(k, rng), b = random_element(k, rng);
  if ((a * a + c * b * b).is_zero()) return std::nullopt;
  Matrix g(k, m, m);
  for (std::size_t i = 0; i < m; i += 2) {
    // (x, y) -> (a x - d2 b y, d1 b x + a y), multiplier a^2 + d1 d2 b^2.
    g(i, i) = a;
    g(i, i + 1) = -d[i + 1] * b;
    g(i + 1, i) = d[i] * b;
    g(i + 1, i + 1) = a;
  }
  return Similitude(space, g);
}

}  // namespace

Similitude random_proper_similitude(const QuadSpace& space, std::mt19937_64& rng, long bound) {
  const Field& k = space.field();
  Similitude h = Similitude::from_isometry(random_isometry(space, rng, true));
  std::optional<Similitude> s;
  if (k.is_finite() || k.kind() == Field::Kind::Rationals) {
    FieldElement f = random_element(k, rng);
    if (!f.is_zero()) {
      auto r = find_similitude_with_multiplier(space, f, bound);
      if (r.similitude) s = r.similitude;
    }
  } else {
    s = block_similitude(space, rng);
  }
  if (!s) {
    FieldElement c = random_element(k, rng);
    s = Similitude::scalar(space, c.is_zero() ? k.one() : c);
  }
  return *s * h;
}

std::vector<Similitude> enumerate_pgo_plus(const QuadSpace& space) {
  const Field& k = space.field();
  ensure(k.is_finite(), ErrorCode::UnsupportedField, "PGO+ enumeration needs a finite field");
  ensure(space.dimension() % 2 == 0, ErrorCode::OddDimension, "PGO+ needs even dimension");
  std::vector<Similitude> shifts{Similitude::identity(space)};
  auto s = find_similitude_with_multiplier(space, k.least_nonsquare());
  if (s.similitude) shifts.push_back(*s.similitude);
  std::vector<Similitude> out;
  std::set<std::vector<std::uint64_t>> seen;
  for (const auto& m : enumerate_orthogonal_group(space)) {
    if (!m.determinant().is_one()) continue;
    Similitude h(space, m);
    for (const auto& shift : shifts) {
      PGOPlusClass c(shift * h);
      if (seen.insert(matrix_key(c.representative().matrix())).second) out.push_back(c.representative());
    }
  }
  return out;
}

}  // namespace spinob
