#include <set>

#include "doctest.h"
#include "spinob/clifford.hpp"

using namespace spinob;

namespace {

QuadSpace form(const Field& f, std::initializer_list<long> d) {
  Vector v;
  for (long x : d) v.push_back(f.from_int(x));
  return QuadSpace(f, v);
}

CliffordElement random_element(const AlgebraPtr& alg, std::mt19937_64& rng) {
  CliffordElement e = CliffordElement::zero(alg);
  for (unsigned s = 0; s < alg->size(); ++s)
    e = e + CliffordElement::basis(alg, s) * spinob::random_element(alg->field(), rng);
  return e;
}

CliffordElement e(const AlgebraPtr& alg, std::initializer_list<int> idx) {
  CliffordElement r = CliffordElement::one(alg);
  for (int i : idx) r = r * CliffordElement::basis(alg, 1u << (i - 1));
  return r;
}

// Equality in Z*/k*: z1 / z2 has zero zeta part.
bool same_mod_k(const FieldElement& a, const FieldElement& b) { return (a / b).im().is_zero(); }

}  // namespace

TEST_CASE("products, anticommutation and reversal") {
  const Field& q = Field::rationals();
  auto a2 = CliffordAlgebra::create(form(q, {1, 1}));
  CHECK(e(a2, {1}) * e(a2, {1}) == CliffordElement::one(a2));
  CHECK(e(a2, {1, 2}) == -(e(a2, {2}) * e(a2, {1})));

  auto a3 = CliffordAlgebra::create(form(q, {2, 3, 5}));
  CHECK(e(a3, {2}) * e(a3, {2}) == CliffordElement::scalar(a3, q.from_int(3)));
  // Expansion: e3 e2 e1 = -e2 e3 e1 = e2 e1 e3 = -e1 e2 e3.
  CHECK(e(a3, {1, 2, 3}).reversal() == e(a3, {3, 2, 1}));
  CHECK(e(a3, {1, 2, 3}).reversal() == -e(a3, {1, 2, 3}));
  CHECK(e(a3, {1, 2, 3}).reversal().reversal() == e(a3, {1, 2, 3}));
  CHECK(e(a3, {1, 3}) * e(a3, {1, 3}) == CliffordElement::scalar(a3, q.from_int(-10)));
  CHECK_THROWS_AS(e(a2, {1}) * e(a3, {1}), MathError);
  CHECK_THROWS_AS(CliffordAlgebra::create(form(q, {1, 1, 1, 1, 1, 1, 1, 1, 1})), MathError);
}

TEST_CASE("associativity and anti-multiplicativity of reversal") {
  std::mt19937_64 rng(3);
  for (const auto& s : {form(Field::prime(3), {1, 1, 1, 2}), form(Field::rationals(), {1, -2, 3}),
                        form(Field::prime(5), {1, 2, 3, 4, 1, 1})}) {
    auto alg = CliffordAlgebra::create(s);
    for (int t = 0; t < 200; ++t) {
      auto a = random_element(alg, rng), b = random_element(alg, rng), c = random_element(alg, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK((a * b).reversal() == b.reversal() * a.reversal());
      CliffordElement ae = CliffordElement::zero(alg), be = ae;
      for (unsigned m : alg->even_masks()) {
        ae = ae + CliffordElement::basis(alg, m) * a.coeff(m);
        be = be + CliffordElement::basis(alg, m) * b.coeff(m);
      }
      CHECK((ae * be).is_even());
    }
  }
}

TEST_CASE("zeta squares to the discriminant") {
  for (const auto& s : {form(Field::prime(3), {1, 1, 1, 2}), form(Field::prime(3), {1, 1, 1, 1, 1, 1}),
                        form(Field::rationals(), {1, 2, 3, 5}), form(Field::rationals(), {1, 1}),
                        form(Field::prime(5), {1, 2, 2, 3})}) {
    auto alg = CliffordAlgebra::create(s);
    CliffordElement z = CliffordElement::zeta(alg);
    CHECK((z * z).is_scalar());
    CHECK(square_class(alg->zeta_square()) == discriminant(s));
    // Central in C_0, anticommutes with V in even dimension.
    for (unsigned m = 0; m < alg->size(); ++m) {
      CliffordElement b = CliffordElement::basis(alg, m);
      if (std::popcount(m) % 2 == 0)
        CHECK(z * b == b * z);
      else
        CHECK(z * b == -(b * z));
    }
  }
}

TEST_CASE("vector representation") {
  const Field& f5 = Field::prime(5);
  QuadSpace s = form(f5, {1, 2, 3, 4});
  auto alg = CliffordAlgebra::create(s);
  CHECK(vector_representation(CliffordElement::one(alg)).matrix().is_identity());
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    Vector w1 = random_anisotropic_vector(s, rng), w2 = random_anisotropic_vector(s, rng);
    CliffordElement g = CliffordElement::vector(alg, w1) * CliffordElement::vector(alg, w2);
    CHECK(vector_representation(g) == reflection(s, w1) * reflection(s, w2));
    CHECK(vector_representation(CliffordElement::vector(alg, w1)) == reflection(s, w1));
  }
  // zeta induces the trivial automorphism of C_0 and -1 on V.
  CliffordElement z = CliffordElement::zeta(alg);
  CHECK(vector_representation(z).matrix() == Matrix::identity(f5, 4).scaled(f5.from_int(-1)));
  CHECK_THROWS_AS(vector_representation(CliffordElement::one(alg) + e(alg, {1})), MathError);
  CHECK_THROWS_AS(vector_representation(CliffordElement::one(alg) + e(alg, {1, 2, 3, 4}) * f5.from_int(2)),
                  MathError);
}

TEST_CASE("lift_isometry_to_gamma") {
  const Field& f3 = Field::prime(3);
  QuadSpace s12 = form(f3, {1, 2});
  auto a12 = CliffordAlgebra::create(s12);
  CHECK(lift_isometry_to_gamma(a12, Isometry::identity(s12)) == CliffordElement::one(a12));
  Isometry h = reflection(s12, unit_vector(f3, 2, 0)) * reflection(s12, unit_vector(f3, 2, 1));
  CliffordElement g = lift_isometry_to_gamma(a12, h);
  CHECK(vector_representation(g) == h);
  CHECK(g.reversal() * g == CliffordElement::scalar(a12, f3.from_int(2)));
  CHECK_THROWS_AS(lift_isometry_to_gamma(a12, reflection(s12, unit_vector(f3, 2, 0))), MathError);

  std::mt19937_64 rng(21);
  for (const auto& s : {form(f3, {1, 1, 1, 2}), form(Field::rationals(), {1, 2, 3}), form(f3, {1, 1, 1, 1, 1, 1})}) {
    auto alg = CliffordAlgebra::create(s);
    for (int t = 0; t < 50; ++t) {
      Isometry hh = random_isometry(s, rng, true);
      CliffordElement gam = lift_isometry_to_gamma(alg, hh);
      CHECK(vector_representation(gam) == hh);
      CliffordElement n = gam.reversal() * gam;
      REQUIRE(n.is_scalar());
      CHECK(square_class(n.coeff(0)) == spinor_norm(hh));
    }
  }
}

TEST_CASE("spin membership") {
  const Field& q = Field::rationals();
  auto a11 = CliffordAlgebra::create(form(q, {1, 1}));
  CHECK(spin_membership(CliffordElement::one(a11)));
  CHECK(spin_membership(e(a11, {1, 2})));
  CHECK_FALSE(spin_membership(e(a11, {1})));
  const Field& f3 = Field::prime(3);
  auto a12 = CliffordAlgebra::create(form(f3, {1, 2}));
  CHECK_FALSE(spin_membership(e(a12, {1, 2})));
}

TEST_CASE("lifting similitudes to Omega") {
  std::mt19937_64 rng(4);
  for (const auto& s : {form(Field::prime(3), {1, 1, 1, 2}), form(Field::prime(5), {1, 2, 2, 3}),
                        form(Field::prime(3), {1, 1, 1, 1, 1, 1}), form(Field::rationals(), {1, 1, 1, 1})}) {
    auto alg = CliffordAlgebra::create(s);
    const Field& k = s.field();
    CHECK(lift_similitude_to_omega(alg, Similitude::identity(s)).value() == CliffordElement::one(alg));
    CHECK(lift_similitude_to_omega(alg, Similitude::scalar(s, k.from_int(2))).value() == CliffordElement::one(alg));
    for (int t = 0; t < 15; ++t) {
      Isometry h = random_isometry(s, rng, true);
      OmegaElement w = lift_similitude_to_omega(alg, Similitude::from_isometry(h));
      CHECK(w.value() == normalize_mod_center(lift_isometry_to_gamma(alg, h)));

      Similitude g = random_proper_similitude(s, rng);
      OmegaElement a = lift_similitude_to_omega(alg, g);
      OmegaElement b = lift_similitude_to_omega(alg, g.scaled(k.from_int(2)));
      CHECK(a.value() == b.value());
      // Independent re-validation of the conjugation identity.
      CHECK_NOTHROW(OmegaElement(a.value(), g));
      CHECK_NOTHROW(OmegaElement(a.value() * CliffordElement::zeta(alg), g));
    }
  }
  const Field& f3 = Field::prime(3);
  QuadSpace s = form(f3, {1, 1, 1, 2});
  auto alg = CliffordAlgebra::create(s);
  Similitude tau = Similitude::from_isometry(reflection(s, unit_vector(f3, 4, 0)));
  CHECK_THROWS_AS(lift_similitude_to_omega(alg, tau), MathError);
  Similitude g = random_proper_similitude(s, rng);
  Similitude other = random_proper_similitude(s, rng);
  if (!(PGOPlusClass(g) == PGOPlusClass(other)))
    CHECK_THROWS_AS(OmegaElement(lift_similitude_to_omega(alg, g).value(), other), MathError);
}

TEST_CASE("mu_bar") {
  std::mt19937_64 rng(12);
  const Field& f3 = Field::prime(3);
  QuadSpace q4 = form(f3, {1, 1, 1, 2});
  auto alg = CliffordAlgebra::create(q4);
  const Field& z = alg->center_field();
  OmegaElement one = lift_similitude_to_omega(alg, Similitude::identity(q4));
  CHECK(mu_bar(one).is_one());
  for (const auto& x : z.nonzero_elements()) CHECK(mu_bar(one.times_center(x)) == x * x);

  for (int t = 0; t < 30; ++t) {
    Isometry h = random_isometry(q4, rng, true);
    CliffordElement gam = lift_isometry_to_gamma(alg, h);
    OmegaElement w(gam, Similitude::from_isometry(h));
    FieldElement mb = mu_bar(w);
    CHECK(mb.im().is_zero());
    CHECK(square_class(mb.re()) == spinor_norm(h));

    OmegaElement a = lift_similitude_to_omega(alg, random_proper_similitude(q4, rng));
    OmegaElement b = lift_similitude_to_omega(alg, random_proper_similitude(q4, rng));
    CHECK(mu_bar(a * b) == mu_bar(a) * mu_bar(b));
  }
}

TEST_CASE("x_map") {
  std::mt19937_64 rng(33);
  const Field& f3 = Field::prime(3);
  for (const auto& s : {form(f3, {1, 1, 1, 1, 1, 1}), form(f3, {1, 1, 1, 2})}) {
    auto alg = CliffordAlgebra::create(s);
    const Field& z = alg->center_field();
    OmegaElement one = lift_similitude_to_omega(alg, Similitude::identity(s));
    for (const auto& x : z.nonzero_elements()) CHECK(same_mod_k(x_map(one.times_center(x)), x * x));
    for (int t = 0; t < 10; ++t) {
      Isometry h = random_isometry(s, rng, true);
      OmegaElement w(lift_isometry_to_gamma(alg, h), Similitude::from_isometry(h));
      CHECK(x_map(w).is_one());
    }
    for (int t = 0; t < 20; ++t) {
      OmegaElement w = lift_similitude_to_omega(alg, random_proper_similitude(s, rng))
                           .times_center(z.element_at(1 + rng() % (z.order() - 1)));
      // Recompute with a different gamma from a shuffled decomposition.
      const Similitude& g = w.similitude();
      Isometry h(s, (g * g).matrix().scaled(g.multiplier().inverse()));
      CliffordElement gam = CliffordElement::one(alg);
      for (const auto& v : cartan_dieudonne(h, rng)) gam = gam * CliffordElement::vector(alg, v);
      auto zz = (*gam.inverse() * w.value() * w.value()).to_center();
      REQUIRE(zz.has_value());
      CHECK(same_mod_k(*zz, x_map(w)));

      OmegaElement w2 = lift_similitude_to_omega(alg, random_proper_similitude(s, rng));
      CHECK(same_mod_k(x_map(w * w2), x_map(w) * x_map(w2)));
    }
  }
}

TEST_CASE("mu_star") {
  const Field& f3 = Field::prime(3);
  QuadSpace q6 = form(f3, {1, 1, 1, 1, 1, 1});
  auto alg = CliffordAlgebra::create(q6);
  const Field& z = alg->center_field();
  OmegaElement one = lift_similitude_to_omega(alg, Similitude::identity(q6));
  UPoint u1 = mu_star(one);
  CHECK(u1.f.is_one());
  CHECK(u1.z.is_one());
  for (const auto& x : z.nonzero_elements()) {
    UPoint u = mu_star(one.times_center(x));
    CHECK(u.f == norm(x, f3));
    CHECK(u.z == x.pow(4));
  }

  // U(F_3) by direct enumeration.
  std::set<std::pair<std::uint64_t, std::uint64_t>> u_points;
  for (const auto& f : f3.nonzero_elements())
    for (const auto& w : z.nonzero_elements())
      if (f.pow(4) == norm(w, f3)) u_points.insert({f3.index_of(f), z.index_of(w)});
  CHECK(u_points.size() == 8);

  std::mt19937_64 rng(41);
  std::set<std::pair<std::uint64_t, std::uint64_t>> hit;
  for (int t = 0; t < 60; ++t) {
    OmegaElement w = lift_similitude_to_omega(alg, random_proper_similitude(q6, rng))
                         .times_center(z.element_at(1 + rng() % (z.order() - 1)));
    UPoint u = mu_star(w);
    hit.insert({f3.index_of(u.f), z.index_of(u.z)});
  }
  CHECK(hit == u_points);

  auto a4 = CliffordAlgebra::create(form(f3, {1, 1, 1, 2}));
  CHECK_THROWS_AS(mu_star(lift_similitude_to_omega(a4, Similitude::identity(a4->space()))), MathError);
  CHECK_THROWS_AS(make_upoint(f3.from_int(2), z.one() + z.generator()), MathError);
}
