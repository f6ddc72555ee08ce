#include "spinob/clifford.hpp"

#include <algorithm>
#include <bit>

namespace spinob {

namespace {

bool mask_before(unsigned a, unsigned b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  unsigned d = a ^ b;
  return (a & d & (~d + 1)) != 0;
}

}  // namespace

CliffordAlgebra::CliffordAlgebra(QuadSpace space) : space_(std::move(space)) {
  std::size_t n = size();
  factor_.resize(n);
  for (unsigned s = 0; s < n; ++s) {
    FieldElement f = field().one();
    for (std::size_t i = 0; i < m(); ++i)
      if (s >> i & 1u) f *= space_.diagonal()[i];
    factor_[s] = f;
    order_.push_back(s);
  }
  std::sort(order_.begin(), order_.end(), mask_before);
  for (unsigned s : order_)
    if (std::popcount(s) % 2 == 0) even_.push_back(s);
  unsigned z = full_mask();
  zeta_sq_ = sign(z, z) < 0 ? -factor_[z] : factor_[z];
}

std::shared_ptr<const CliffordAlgebra> CliffordAlgebra::create(const QuadSpace& space) {
  ensure(space.dimension() <= kMaxDimension, ErrorCode::DimensionTooLarge,
         "Clifford algebras are limited to dimension " + std::to_string(kMaxDimension) + ", got " +
             std::to_string(space.dimension()));
  return std::shared_ptr<const CliffordAlgebra>(new CliffordAlgebra(space));
}

int CliffordAlgebra::sign(unsigned a, unsigned b) const {
  int swaps = 0;
  for (std::size_t j = 0; j < m(); ++j)
    if (b >> j & 1u) swaps += std::popcount(a >> (j + 1));
  return swaps % 2 ? -1 : 1;
}

const Field& CliffordAlgebra::center_field() const {
  ensure(!is_square(zeta_sq_), ErrorCode::SplitDiscriminant,
         "discriminant of " + space_.to_string() + " is a square; Z is split");
  return Field::quadratic(zeta_sq_);
}

// ---------------------------------------------------------------------------

CliffordElement CliffordElement::zero(AlgebraPtr alg) {
  std::size_t n = alg->size();
  FieldElement z = alg->field().zero();
  return CliffordElement(std::move(alg), std::vector<FieldElement>(n, z));
}

CliffordElement CliffordElement::scalar(AlgebraPtr alg, const FieldElement& s) {
  ensure(&s.field() == &alg->field(), ErrorCode::NotInField, "scalar in wrong field");
  CliffordElement e = zero(std::move(alg));
  e.c_[0] = s;
  return e;
}

CliffordElement CliffordElement::one(AlgebraPtr alg) {
  FieldElement o = alg->field().one();
  return scalar(std::move(alg), o);
}

CliffordElement CliffordElement::basis(AlgebraPtr alg, unsigned mask) {
  ensure(mask < alg->size(), ErrorCode::DimensionMismatch, "basis mask out of range");
  CliffordElement e = zero(alg);
  e.c_[mask] = alg->field().one();
  return e;
}

CliffordElement CliffordElement::vector(AlgebraPtr alg, const Vector& v) {
  ensure(v.size() == alg->m(), ErrorCode::DimensionMismatch, "vector length does not match the algebra");
  CliffordElement e = zero(alg);
  for (std::size_t i = 0; i < v.size(); ++i) e.c_[1u << i] = v[i];
  return e;
}

CliffordElement CliffordElement::zeta(AlgebraPtr alg) {
  unsigned full = alg->full_mask();
  return basis(std::move(alg), full);
}

CliffordElement CliffordElement::from_center(AlgebraPtr alg, const FieldElement& z) {
  ensure(&z.field() == &alg->center_field(), ErrorCode::NotInField, "element is not in the center field");
  CliffordElement e = zero(alg);
  e.c_[0] = z.re();
  e.c_[alg->full_mask()] += z.im();
  return e;
}

CliffordElement CliffordElement::operator+(const CliffordElement& o) const {
  ensure(alg_ == o.alg_, ErrorCode::AlgebraMismatch, "sum of elements of different algebras");
  CliffordElement r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!o.c_[i].is_zero()) r.c_[i] += o.c_[i];
  return r;
}

CliffordElement CliffordElement::operator-(const CliffordElement& o) const { return *this + (-o); }

CliffordElement CliffordElement::operator-() const {
  CliffordElement r = *this;
  for (auto& x : r.c_)
    if (!x.is_zero()) x = -x;
  return r;
}

CliffordElement CliffordElement::operator*(const CliffordElement& o) const {
  ensure(alg_ == o.alg_, ErrorCode::AlgebraMismatch, "product of elements of different algebras");
  CliffordElement r = zero(alg_);
  std::vector<unsigned> support;
  for (unsigned b = 0; b < o.c_.size(); ++b)
    if (!o.c_[b].is_zero()) support.push_back(b);
  for (unsigned a = 0; a < c_.size(); ++a) {
    if (c_[a].is_zero()) continue;
    for (unsigned b : support) {
      FieldElement t = c_[a] * o.c_[b] * alg_->factor(a, b);
      r.c_[a ^ b] += alg_->sign(a, b) < 0 ? -t : t;
    }
  }
  return r;
}

CliffordElement CliffordElement::operator*(const FieldElement& s) const {
  CliffordElement r = *this;
  for (auto& x : r.c_)
    if (!x.is_zero()) x *= s;
  return r;
}

bool CliffordElement::operator==(const CliffordElement& o) const { return alg_ == o.alg_ && c_ == o.c_; }

bool CliffordElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const FieldElement& x) { return x.is_zero(); });
}

bool CliffordElement::is_even() const {
  for (unsigned s = 0; s < c_.size(); ++s)
    if (std::popcount(s) % 2 && !c_[s].is_zero()) return false;
  return true;
}

bool CliffordElement::is_odd() const {
  for (unsigned s = 0; s < c_.size(); ++s)
    if (std::popcount(s) % 2 == 0 && !c_[s].is_zero()) return false;
  return true;
}

bool CliffordElement::is_scalar() const {
  for (unsigned s = 1; s < c_.size(); ++s)
    if (!c_[s].is_zero()) return false;
  return true;
}

bool CliffordElement::is_vector() const {
  for (unsigned s = 0; s < c_.size(); ++s)
    if (std::popcount(s) != 1 && !c_[s].is_zero()) return false;
  return true;
}

Vector CliffordElement::vector_part() const {
  Vector v;
  for (std::size_t i = 0; i < alg_->m(); ++i) v.push_back(c_[1u << i]);
  return v;
}

std::optional<FieldElement> CliffordElement::to_center() const {
  unsigned full = alg_->full_mask();
  for (unsigned s = 1; s < c_.size(); ++s)
    if (s != full && !c_[s].is_zero()) return std::nullopt;
  return alg_->center_field().make(c_[0], c_[full]);
}

CliffordElement CliffordElement::reversal() const {
  CliffordElement r = *this;
  for (unsigned s = 0; s < c_.size(); ++s) {
    int k = std::popcount(s);
    if ((k * (k - 1) / 2) % 2 && !r.c_[s].is_zero()) r.c_[s] = -r.c_[s];
  }
  return r;
}

CliffordElement CliffordElement::grade_involution() const {
  CliffordElement r = *this;
  for (unsigned s = 0; s < c_.size(); ++s)
    if (std::popcount(s) % 2 && !r.c_[s].is_zero()) r.c_[s] = -r.c_[s];
  return r;
}

std::optional<CliffordElement> CliffordElement::inverse() const {
  if (is_zero()) return std::nullopt;
  CliffordElement one_ = one(alg_);
  CliffordElement rev = reversal();
  CliffordElement u = rev * *this;
  if (u.is_scalar() && !u.c_[0].is_zero()) {
    CliffordElement cand = rev * u.c_[0].inverse();
    if (*this * cand == one_) return cand;
  }
  // Left multiplication matrix, solve a x = 1.
  std::size_t n = c_.size();
  Matrix m(alg_->field(), n, n + 1);
  for (unsigned b = 0; b < n; ++b) {
    CliffordElement col = *this * basis(alg_, b);
    for (unsigned r = 0; r < n; ++r) m(r, b) = col.c_[r];
  }
  m(0, n) = alg_->field().one();
  auto piv = row_reduce(m);
  if (piv.size() != n || piv.back() != n - 1) return std::nullopt;
  std::vector<FieldElement> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = m(r, n);
  CliffordElement inv(alg_, x);
  if (!(inv * *this == one_)) return std::nullopt;
  return inv;
}

std::string CliffordElement::to_string() const {
  std::string s;
  for (unsigned mask : alg_->ordered_masks()) {
    if (c_[mask].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c_[mask].to_string() + ")";
    for (std::size_t i = 0; i < alg_->m(); ++i)
      if (mask >> i & 1u) s += "e" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------

Isometry vector_representation(const CliffordElement& gamma) {
  ensure(gamma.is_even() || gamma.is_odd(), ErrorCode::NotInCliffordGroup, "element is not homogeneous");
  auto inv = gamma.inverse();
  ensure(inv.has_value(), ErrorCode::NotInCliffordGroup, "element is not a unit");
  const AlgebraPtr& alg = gamma.algebra();
  std::size_t m = alg->m();
  bool odd = !gamma.is_even();
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < m; ++i) {
    CliffordElement w = gamma * CliffordElement::basis(alg, 1u << i) * *inv;
    if (odd) w = -w;
    ensure(w.is_vector(), ErrorCode::NotInCliffordGroup, "conjugation does not preserve V");
    cols.push_back(w.vector_part());
  }
  return Isometry(alg->space(), Matrix::from_columns(alg->field(), cols));
}

CliffordElement lift_isometry_to_gamma(AlgebraPtr alg, const Isometry& h) {
  ensure(h.space() == alg->space(), ErrorCode::AlgebraMismatch, "isometry of a different space");
  ensure(h.is_proper(), ErrorCode::ImproperIsometry, "only proper isometries lift to the special Clifford group");
  CliffordElement gamma = CliffordElement::one(alg);
  for (const auto& v : cartan_dieudonne(h)) gamma = gamma * CliffordElement::vector(alg, v);
  ensure(vector_representation(gamma) == h, ErrorCode::AssertionFailure, "Clifford lift does not recover h");
  return gamma;
}

bool spin_membership(const CliffordElement& c) {
  if (c.is_zero() || !c.is_even()) return false;
  try {
    vector_representation(c);
  } catch (const MathError& e) {
    if (e.code() == ErrorCode::NotInCliffordGroup) return false;
    throw;
  }
  return (c.reversal() * c) == CliffordElement::one(c.algebra());
}

CliffordElement normalize_mod_center(const CliffordElement& c) {
  ensure(!c.is_zero(), ErrorCode::ZeroInput, "normalizing zero");
  const AlgebraPtr& alg = c.algebra();
  const auto& order = alg->ordered_masks();
  CliffordElement cz = c * CliffordElement::zeta(alg);
  Matrix m(alg->field(), 2, order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    m(0, j) = c.coeff(order[j]);
    m(1, j) = cz.coeff(order[j]);
  }
  row_reduce(m);
  CliffordElement out = CliffordElement::zero(alg);
  for (std::size_t j = 0; j < order.size(); ++j)
    if (!m(0, j).is_zero()) out = out + CliffordElement::basis(alg, order[j]) * m(0, j);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// mu^{-1} g(e_i) g(e_j).
CliffordElement transported(const AlgebraPtr& alg, const Similitude& g, const FieldElement& mu_inv, std::size_t i,
                            std::size_t j) {
  const Field& k = alg->field();
  std::size_t m = alg->m();
  CliffordElement gi = CliffordElement::vector(alg, g.apply(unit_vector(k, m, i)));
  CliffordElement gj = CliffordElement::vector(alg, g.apply(unit_vector(k, m, j)));
  return gi * gj * mu_inv;
}

}  // namespace

OmegaElement::OmegaElement(CliffordElement value, Similitude g) : value_(std::move(value)), g_(std::move(g)) {
  const AlgebraPtr& alg = value_.algebra();
  ensure(alg->space() == g_.space(), ErrorCode::AlgebraMismatch, "similitude of a different space");
  ensure(g_.is_proper(), ErrorCode::ImproperIsometry, "Omega elements induce proper similitudes");
  ensure(value_.is_even() && value_.inverse().has_value(), ErrorCode::LiftFailure, "not a unit of C_0");
  FieldElement mu_inv = g_.multiplier().inverse();
  std::size_t m = alg->m();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      CliffordElement b = CliffordElement::basis(alg, (1u << i) | (1u << j));
      ensure(value_ * b == transported(alg, g_, mu_inv, i, j) * value_, ErrorCode::LiftFailure,
             "conjugation identity fails on e" + std::to_string(i + 1) + "e" + std::to_string(j + 1));
    }
}

OmegaElement OmegaElement::operator*(const OmegaElement& o) const {
  return OmegaElement(value_ * o.value_, g_ * o.g_, Trusted{});
}

OmegaElement OmegaElement::times_center(const FieldElement& z) const {
  ensure(!z.is_zero(), ErrorCode::ZeroInput, "scaling by zero");
  return OmegaElement(value_ * CliffordElement::from_center(value_.algebra(), z), g_, Trusted{});
}

OmegaElement lift_similitude_to_omega(AlgebraPtr alg, const Similitude& g) {
  ensure(g.space() == alg->space(), ErrorCode::AlgebraMismatch, "similitude of a different space");
  ensure(alg->m() % 2 == 0, ErrorCode::OddDimension, "Omega lifts need even dimension");
  ensure(g.is_proper(), ErrorCode::ImproperIsometry, "only proper similitudes lift to Omega");
  const auto& even = alg->even_masks();
  std::size_t m = alg->m(), ne = even.size();
  std::vector<std::size_t> row_of(alg->size(), 0);
  for (std::size_t r = 0; r < ne; ++r) row_of[even[r]] = r;
  FieldElement mu_inv = g.multiplier().inverse();
  std::vector<Vector> sys;
  for (std::size_t j = 1; j < m; ++j) {
    CliffordElement b = CliffordElement::basis(alg, 1u | (1u << j));
    CliffordElement t = transported(alg, g, mu_inv, 0, j);
    std::vector<Vector> block(ne, Vector(ne, alg->field().zero()));
    for (std::size_t col = 0; col < ne; ++col) {
      CliffordElement e = CliffordElement::basis(alg, even[col]);
      CliffordElement d = e * b - t * e;
      for (unsigned s : even)
        if (!d.coeff(s).is_zero()) block[row_of[s]][col] = d.coeff(s);
    }
    for (auto& row : block) sys.push_back(std::move(row));
  }
  // Rank ne - 2 is expected; stop there and check the rest of the system.
  EchelonBasis ech(alg->field(), ne);
  std::vector<Vector> ker;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (!ech.add(sys[i]) || ech.rank() + 2 != ne) continue;
    ker = ech.kernel();
    bool all = true;
    for (std::size_t r = i + 1; all && r < sys.size(); ++r)
      for (const auto& v : ker) all = all && dot(sys[r], v).is_zero();
    if (all) break;
  }
  if (ech.rank() + 2 != ne) ker = ech.kernel();
  ensure(ker.size() == 2, ErrorCode::LiftFailure,
         "solution space of the lifting system has dimension " + std::to_string(ker.size()) + ", expected 2");
  CliffordElement omega = CliffordElement::zero(alg);
  for (std::size_t col = 0; col < ne; ++col)
    if (!ker[0][col].is_zero()) omega = omega + CliffordElement::basis(alg, even[col]) * ker[0][col];
  return OmegaElement(normalize_mod_center(omega), g);
}

FieldElement mu_bar(const OmegaElement& omega) {
  CliffordElement u = omega.value().reversal() * omega.value();
  auto z = u.to_center();
  ensure(z.has_value(), ErrorCode::NotScalar, "reversal(omega) omega is not central: " + u.to_string());
  return *z;
}

FieldElement x_map(const OmegaElement& omega) {
  const AlgebraPtr& alg = omega.value().algebra();
  const Similitude& g = omega.similitude();
  Similitude g2 = g * g;
  Isometry h(alg->space(), g2.matrix().scaled(g.multiplier().inverse()));
  CliffordElement gamma = lift_isometry_to_gamma(alg, h);
  auto ginv = gamma.inverse();
  ensure(ginv.has_value(), ErrorCode::InconsistentLift, "Clifford lift is not a unit");
  CliffordElement w = *ginv * omega.value() * omega.value();
  auto z = w.to_center();
  ensure(z.has_value() && !z->is_zero(), ErrorCode::InconsistentLift, "gamma^{-1} omega^2 is not in Z*");
  const Field& zf = z->field();
  if (z->im().is_zero()) return zf.one();
  return zf.make(z->re() / z->im(), z->im().field().one());
}

UPoint make_upoint(const FieldElement& f, const FieldElement& z) {
  ensure(!f.is_zero() && !z.is_zero(), ErrorCode::ZeroInput, "U-point with a zero coordinate");
  ensure(z.field().base() == &f.field(), ErrorCode::NotInField, "z must lie in a quadratic extension of f's field");
  ensure(f.pow(4) == norm(z, f.field()), ErrorCode::NotInU,
         "f^4 = " + f.pow(4).to_string() + " but N(z) = " + norm(z, f.field()).to_string());
  return UPoint{f, z};
}

UPoint mu_star(const OmegaElement& omega) {
  const AlgebraPtr& alg = omega.value().algebra();
  ensure(alg->m() % 4 == 2, ErrorCode::WrongParity, "mu* needs dimension 2n with n odd");
  FieldElement mb = mu_bar(omega);
  ensure(mb.im().is_zero(), ErrorCode::MultiplierNotInBase, "mu_bar(omega) = " + mb.to_string() + " is not in k");
  const FieldElement& f = mb.re();
  FieldElement a = x_map(omega);
  FieldElement z = a / galois_conj(a) * embed(f * f, a.field());
  return make_upoint(f, z);
}

}  // namespace spinob
