#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "spinob/quadform.hpp"

using namespace spinob;

namespace {

QuadSpace form(const Field& f, std::initializer_list<long> d) {
  Vector v;
  for (long x : d) v.push_back(f.from_int(x));
  return QuadSpace(f, v);
}

Vector vec(const Field& f, std::initializer_list<long> d) {
  Vector v;
  for (long x : d) v.push_back(f.from_int(x));
  return v;
}

// Leibniz expansion, independent of the elimination-based determinant.
FieldElement leibniz_det(const Matrix& m) {
  std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  FieldElement total = m.field().zero();
  do {
    FieldElement term = m.field().one();
    for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
    long inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    total += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Legendre-style class index over F_p: 0 for squares, 1 otherwise.
int legendre_class(const FieldElement& x) {
  long p = x.field().characteristic();
  return x.pow((p - 1) / 2).is_one() ? 0 : 1;
}

}  // namespace

TEST_CASE("evaluate") {
  const Field& q = Field::rationals();
  const Field& f3 = Field::prime(3);
  CHECK(form(q, {1, 1}).evaluate(vec(q, {1, 0})) == q.one());
  CHECK(form(f3, {1, 1, 1, 2}).evaluate(vec(f3, {1, 1, 1, 1})) == f3.from_int(2));
  CHECK(form(q, {1, 1, 1, 1, 1, 1}).evaluate(vec(q, {1, 1, 1, 1, 1, 1})) == q.from_int(6));
  CHECK_THROWS_AS(form(q, {1, 1}).evaluate(vec(q, {1, 0, 0})), MathError);
}

TEST_CASE("bilinear form is the polarization of q") {
  std::mt19937_64 rng(7);
  const Field& f5 = Field::prime(5);
  QuadSpace s = form(f5, {1, 2, 3});
  for (int t = 0; t < 30; ++t) {
    Vector x = random_vector(f5, 3, rng), y = random_vector(f5, 3, rng);
    FieldElement polar = (s.evaluate(add(x, y)) - s.evaluate(x) - s.evaluate(y)) / f5.from_int(2);
    CHECK(s.bilinear(x, y) == polar);
  }
}

TEST_CASE("degenerate and malformed spaces are rejected") {
  const Field& q = Field::rationals();
  CHECK_THROWS_AS(form(q, {1, 0, 2}), MathError);
  CHECK_THROWS_AS(form(q, {1}), MathError);
}

TEST_CASE("reflection") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 1});
  Isometry r = reflection(s, vec(q, {1, 0}));
  CHECK(r.matrix() == Matrix::diagonal(vec(q, {-1, 1})));
  CHECK_THROWS_AS(reflection(form(q, {1, -1}), vec(q, {1, 1})), MathError);

  std::mt19937_64 rng(11);
  const Field& f5 = Field::prime(5);
  QuadSpace s5 = form(f5, {1, 2, 3, 4});
  for (int t = 0; t < 20; ++t) {
    Vector v = random_anisotropic_vector(s5, rng);
    Isometry tv = reflection(s5, v);
    CHECK(leibniz_det(tv.matrix()) == f5.from_int(-1));
    CHECK((tv * tv).matrix().is_identity());
    // Validated construction.
    CHECK_NOTHROW(Isometry(s5, tv.matrix()));
  }
  QuadSpace s2 = form(Field::qsqrt(2), {1, 3, 1});
  for (int t = 0; t < 10; ++t) {
    Vector v = random_anisotropic_vector(s2, rng);
    Isometry tv = reflection(s2, v);
    CHECK((tv * tv).matrix().is_identity());
    CHECK(tv.determinant() == s2.field().from_int(-1));
  }
}

TEST_CASE("cartan_dieudonne examples") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 2, 3});
  CHECK(cartan_dieudonne(Isometry::identity(s)).empty());

  Vector v = vec(q, {1, 1, 2});
  auto one = cartan_dieudonne(reflection(s, v));
  REQUIRE(one.size() == 1);
  // Proportional to v.
  CHECK(one[0][0] * v[1] == one[0][1] * v[0]);
  CHECK(one[0][0] * v[2] == one[0][2] * v[0]);

  const Field& f3 = Field::prime(3);
  QuadSpace s12 = form(f3, {1, 2});
  Isometry minus(s12, Matrix::identity(f3, 2).scaled(f3.from_int(-1)));
  auto two = cartan_dieudonne(minus);
  CHECK(two.size() == 2);
  CHECK(compose_reflections(s12, two) == minus);
}

TEST_CASE("recomposition, parity and length bound on random isometries") {
  std::vector<QuadSpace> spaces = {
      form(Field::prime(3), {1, 1, 1, 2}),  form(Field::prime(3), {1, 1, 1, 1, 1, 1}),
      form(Field::prime(5), {1, 1, 1, 1}),  form(Field::prime(5), {1, 2, 3}),
      form(Field::rationals(), {1, 1, 1, 1}), form(Field::rationals(), {1, -1, 2, 3}),
      form(Field::finite(3, 2), {1, 1, 1, 1}),
  };
  std::mt19937_64 rng(2024);
  for (const auto& s : spaces) {
    int trials = s.field().is_finite() ? 100 : 30;
    for (int t = 0; t < trials; ++t) {
      Isometry g = random_isometry(s, rng, rng() % 2 == 0);
      auto vs = cartan_dieudonne(g);
      CHECK(vs.size() <= s.dimension());
      CHECK((vs.size() % 2 == 0) == g.is_proper());
      for (const auto& v : vs) CHECK_FALSE(s.evaluate(v).is_zero());
      CHECK(compose_reflections(s, vs) == g);
    }
  }
}

TEST_CASE("spinor norm examples") {
  const Field& q = Field::rationals();
  QuadSpace q6 = form(q, {1, 1, 1, 1, 1, 1});
  CHECK(spinor_norm(Isometry::identity(q6)).is_trivial());
  auto e = [&](const QuadSpace& s, std::size_t i) { return unit_vector(s.field(), s.dimension(), i); };
  CHECK(spinor_norm(reflection(q6, e(q6, 0)) * reflection(q6, e(q6, 1))).is_trivial());

  const Field& f3 = Field::prime(3);
  QuadSpace s12 = form(f3, {1, 2});
  SquareClass sn = spinor_norm(reflection(s12, e(s12, 0)) * reflection(s12, e(s12, 1)));
  CHECK(sn == square_class(f3.from_int(2)));
  CHECK_FALSE(sn.is_trivial());

  CHECK_THROWS_AS(spinor_norm(reflection(s12, e(s12, 0))), MathError);
}

TEST_CASE("spinor norm is decomposition independent and multiplicative") {
  std::vector<QuadSpace> spaces = {form(Field::prime(3), {1, 1, 1, 2}), form(Field::prime(5), {1, 2, 2, 1}),
                                   form(Field::rationals(), {1, 2, 3, 5})};
  std::mt19937_64 rng(99);
  for (const auto& s : spaces) {
    int trials = s.field().is_finite() ? 100 : 25;
    for (int t = 0; t < trials; ++t) {
      Isometry g = random_isometry(s, rng, true);
      Isometry h = random_isometry(s, rng, true);
      auto other = cartan_dieudonne(g, rng);
      CHECK(compose_reflections(s, other) == g);
      CHECK(spinor_norm_of_vectors(s, other) == spinor_norm(g));
      CHECK(spinor_norm(g * h) == spinor_norm(g) * spinor_norm(h));
    }
  }
}

TEST_CASE("discriminant sign convention") {
  const Field& f3 = Field::prime(3);
  const Field& q = Field::rationals();
  // m = 4: exponent 6, disc = 2, a nonsquare mod 3.
  CHECK(discriminant_value(form(f3, {1, 1, 1, 2})) == f3.from_int(2));
  CHECK_FALSE(discriminant(form(f3, {1, 1, 1, 2})).is_trivial());
  // m = 6: exponent 15.
  CHECK(discriminant_value(form(q, {1, 1, 1, 1, 1, 1})) == q.from_int(-1));
  CHECK(discriminant_value(form(q, {1, 1})) == q.from_int(-1));
}

TEST_CASE("spinor_norm_group matches pair enumeration") {
  struct Case {
    QuadSpace space;
  };
  for (const auto& s : {form(Field::prime(3), {1, 1, 1, 2}), form(Field::prime(5), {1, 1}),
                        form(Field::prime(3), {1, 1}), form(Field::prime(7), {1, 3})}) {
    const Field& f = s.field();
    std::set<int> oracle;
    std::vector<Vector> aniso;
    for_each_vector(f, s.dimension(), [&](const Vector& v) {
      if (!s.evaluate(v).is_zero()) aniso.push_back(v);
      return true;
    });
    for (const auto& v : aniso)
      for (const auto& w : aniso) oracle.insert(legendre_class(s.evaluate(v) * s.evaluate(w)));
    auto group = spinor_norm_group(s);
    std::set<int> got;
    for (const auto& c : group) got.insert(legendre_class(c.representative()));
    CHECK(got == oracle);
  }
  // <1,1,1,2> over F_3 represents both classes.
  CHECK(spinor_norm_group(form(Field::prime(3), {1, 1, 1, 2})).size() == 2);
  CHECK_THROWS_AS(spinor_norm_group(form(Field::rationals(), {1, 1})), MathError);
}

TEST_CASE("orthogonal group enumeration") {
  const Field& f3 = Field::prime(3);
  // Brute force over all matrices for small spaces.
  for (const auto& s : {form(f3, {1, 1}), form(f3, {1, 2}), form(f3, {1, 1, 2})}) {
    std::size_t m = s.dimension();
    std::size_t count = 0;
    Matrix g = s.gram();
    for_each_vector(f3, m * m, [&](const Vector& entries) {
      Matrix a(f3, m, m);
      for (std::size_t i = 0; i < m * m; ++i) a(i / m, i % m) = entries[i];
      if (a.transpose() * g * a == g) ++count;
      return true;
    });
    CHECK(enumerate_orthogonal_group(s).size() == count);
  }
  // |O^-(4, 3)| = 2 q^2 (q^2 + 1)(q^2 - 1) = 1440.
  auto o4 = enumerate_orthogonal_group(form(f3, {1, 1, 1, 2}));
  CHECK(o4.size() == 1440);
  CHECK(std::count_if(o4.begin(), o4.end(), [](const Matrix& m) { return m.determinant().is_one(); }) == 720);
  CHECK_THROWS_AS(enumerate_orthogonal_group(form(f3, {1, 1, 1, 1, 1, 1}), 5000), MathError);
}

TEST_CASE("from_gram diagonalizes") {
  const Field& q = Field::rationals();
  Matrix g = Matrix::from_rows(q, {vec(q, {0, 1}), vec(q, {1, 0})});
  QuadSpace s = QuadSpace::from_gram(g);
  CHECK(s.dimension() == 2);
  // Hyperbolic plane: discriminant class -(-1) ... det = -1, disc = (-1)^1 * det = 1.
  CHECK(discriminant(s).is_trivial());
}
