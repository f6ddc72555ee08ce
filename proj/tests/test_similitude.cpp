#include <set>

#include "doctest.h"
#include "spinob/similitude.hpp"

using namespace spinob;

namespace {

QuadSpace form(const Field& f, std::initializer_list<long> d) {
  Vector v;
  for (long x : d) v.push_back(f.from_int(x));
  return QuadSpace(f, v);
}

// Exists M with M^T G M = f G, by running over every matrix.
bool brute_force_realizable(const QuadSpace& s, const FieldElement& f) {
  const Field& k = s.field();
  std::size_t m = s.dimension();
  Matrix g = s.gram(), target = g.scaled(f);
  bool found = false;
  for_each_vector(k, m * m, [&](const Vector& entries) {
    Matrix a(k, m, m);
    for (std::size_t i = 0; i < m * m; ++i) a(i / m, i % m) = entries[i];
    found = a.transpose() * g * a == target;
    return !found;
  });
  return found;
}

}  // namespace

TEST_CASE("multiplier") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 2, 3, 5});
  CHECK(Similitude::scalar(s, q.from_int(3)).multiplier() == q.from_int(9));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) CHECK(Similitude::from_isometry(random_isometry(s, rng, true)).multiplier().is_one());

  const Field& f5 = Field::prime(5);
  QuadSpace s5 = form(f5, {1, 2, 3, 4});
  for (int t = 0; t < 30; ++t) {
    Similitude a = random_proper_similitude(s5, rng), b = random_proper_similitude(s5, rng);
    CHECK((a * b).multiplier() == a.multiplier() * b.multiplier());
    CHECK((a * a.inverse()).matrix().is_identity());
    CHECK(a.inverse().multiplier() == a.multiplier().inverse());
    // Re-validation from the bare matrix recovers the multiplier.
    CHECK(Similitude(s5, (a * b).matrix()).multiplier() == (a * b).multiplier());
  }
  CHECK_THROWS_AS(Similitude(s5, Matrix::identity(f5, 4).scaled(f5.zero())), MathError);
  Matrix bad = Matrix::identity(f5, 4);
  bad(0, 1) = f5.one();
  CHECK_THROWS_AS(Similitude(s5, bad), MathError);
}

TEST_CASE("properness") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 1, 1, 1});
  CHECK(Similitude::identity(s).is_proper());
  CHECK_FALSE(Similitude::from_isometry(reflection(s, unit_vector(q, 4, 2))).is_proper());
  CHECK(Similitude::scalar(s, q.from_int(7)).is_proper());
  CHECK_THROWS_AS(Similitude::identity(form(q, {1, 1, 1})).is_proper(), MathError);
}

TEST_CASE("correct_to_proper") {
  const Field& f3 = Field::prime(3);
  QuadSpace s = form(f3, {1, 1, 1, 2});
  Similitude tau = Similitude::from_isometry(reflection(s, unit_vector(f3, 4, 0)));
  CHECK(correct_to_proper(tau).matrix().is_identity());
  CHECK_THROWS_AS(correct_to_proper(Similitude::identity(s)), MathError);

  std::size_t improper = 0;
  for (const auto& m : enumerate_orthogonal_group(s)) {
    Similitude g(s, m);
    if (g.is_proper()) continue;
    ++improper;
    Similitude c = correct_to_proper(g);
    CHECK(c.is_proper());
    CHECK(c.multiplier() == g.multiplier());
    CHECK(c.determinant() == -g.determinant());
  }
  CHECK(improper == 720);

  const Field& f5 = Field::prime(5);
  QuadSpace s5 = form(f5, {1, 2, 2, 3});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    Similitude g = random_proper_similitude(s5, rng) *
                   Similitude::from_isometry(reflection(s5, random_anisotropic_vector(s5, rng)));
    REQUIRE_FALSE(g.is_proper());
    Similitude c = correct_to_proper(g);
    CHECK(c.is_proper());
    CHECK(c.multiplier() == g.multiplier());
  }
}

TEST_CASE("find_similitude_with_multiplier on squares") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 2, 3, 5});
  auto r = find_similitude_with_multiplier(s, q.from_int(49));
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(*r.similitude == Similitude::scalar(s, q.from_int(7)));
}

TEST_CASE("finite-field multiplier search matches brute force") {
  for (long p : {3L, 5L}) {
    const Field& k = Field::prime(p);
    for (const auto& s : {form(k, {1, 1}), form(k, {1, 2}), form(k, {1, 1, 2})}) {
      if (p == 5 && s.dimension() == 3) continue;
      for (const auto& f : k.nonzero_elements()) {
        auto r = find_similitude_with_multiplier(s, f);
        bool truth = brute_force_realizable(s, f);
        CHECK(r.status != SearchStatus::Unknown);
        CHECK((r.status == SearchStatus::Found) == truth);
        if (r.similitude) {
          CHECK(r.similitude->multiplier() == f);
          if (s.dimension() % 2 == 0) CHECK(r.similitude->is_proper());
        }
      }
    }
  }
  const Field& f3 = Field::prime(3);
  QuadSpace q4 = form(f3, {1, 1, 1, 2});
  auto r = find_similitude_with_multiplier(q4, f3.from_int(2));
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(r.similitude->multiplier() == f3.from_int(2));
  CHECK(r.similitude->is_proper());

  const Field& f27 = Field::finite(3, 3);
  QuadSpace big = form(f27, {1, 1, 1, 1, 1, 1});
  for (const auto& f : {f27.generator(), f27.least_nonsquare(), f27.from_int(2)}) {
    auto rr = find_similitude_with_multiplier(big, f);
    REQUIRE(rr.status == SearchStatus::Found);
    CHECK(rr.similitude->multiplier() == f);
    CHECK(rr.similitude->is_proper());
  }
}

TEST_CASE("rational multiplier search") {
  const Field& q = Field::rationals();
  QuadSpace s = form(q, {1, 1, 1, 1});
  for (long f : {2L, 3L, 5L, 7L, 6L}) {
    auto r = find_similitude_with_multiplier(s, q.from_int(f));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.similitude->multiplier() == q.from_int(f));
    CHECK(r.similitude->is_proper());
  }
  // Definite form: negative multipliers are impossible, and the search proves it.
  CHECK(find_similitude_with_multiplier(s, q.from_int(-1)).status == SearchStatus::NotFound);
  // <1,1>: 3 is not a sum of two rational squares, so 3<1,1> is not <1,1>.
  CHECK(find_similitude_with_multiplier(form(q, {1, 1}), q.from_int(3)).status == SearchStatus::NotFound);
  CHECK(find_similitude_with_multiplier(form(q, {1, 1}), q.from_int(5)).status == SearchStatus::Found);
}

TEST_CASE("PGO+ classes") {
  const Field& f3 = Field::prime(3);
  QuadSpace s = form(f3, {1, 1, 1, 2});
  std::mt19937_64 rng(17);
  Similitude g = random_proper_similitude(s, rng);
  CHECK(PGOPlusClass(g) == PGOPlusClass(g.scaled(f3.from_int(2))));
  CHECK_THROWS_AS(PGOPlusClass(Similitude::from_isometry(reflection(s, unit_vector(f3, 4, 0)))), MathError);

  auto all = enumerate_pgo_plus(s);
  // |SO| * (multiplier classes) / |{+-1}| = 720 * 2 / 2.
  CHECK(all.size() == 720);
  std::set<std::vector<std::uint64_t>> keys;
  for (const auto& c : all) keys.insert(matrix_key(c.matrix()));
  CHECK(keys.size() == all.size());
  // Closed under products.
  for (int t = 0; t < 50; ++t) {
    const auto& a = all[rng() % all.size()];
    const auto& b = all[rng() % all.size()];
    CHECK(keys.count(matrix_key(PGOPlusClass(a * b).representative().matrix())) == 1);
  }
}
