#include "spinob/obstruction.hpp"

#include <map>
#include <random>
#include <set>
#include <tuple>

#include "spinob/integer.hpp"

namespace spinob {

namespace {

const QuadSpace& even_checked(const QuadSpace& space) {
  std::size_t m = space.dimension();
  ensure(m % 2 == 0, ErrorCode::OddDimension, "obstruction maps need even dimension, got " + std::to_string(m));
  return space;
}

}  // namespace

ObstructionContext::ObstructionContext(const QuadSpace& space)
    : space_(even_checked(space)),
      alg_(CliffordAlgebra::create(space)),
      z_(&alg_->center_field()),
      n_odd_((space.dimension() / 2) % 2 == 1) {}

Theta theta_mul(const Theta& a, const Theta& b) {
  if (const auto* ua = std::get_if<UPoint>(&a)) {
    const auto& ub = std::get<UPoint>(b);
    return UPoint{ua->f * ub.f, ua->z * ub.z};
  }
  return std::get<FieldElement>(a) * std::get<FieldElement>(b);
}

Theta theta_div(const Theta& a, const Theta& b) {
  if (const auto* ua = std::get_if<UPoint>(&a)) {
    const auto& ub = std::get<UPoint>(b);
    return UPoint{ua->f / ub.f, ua->z / ub.z};
  }
  return std::get<FieldElement>(a) / std::get<FieldElement>(b);
}

bool theta_equal(const Theta& a, const Theta& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ua = std::get_if<UPoint>(&a)) {
    const auto& ub = std::get<UPoint>(b);
    return ua->f == ub.f && ua->z == ub.z;
  }
  return std::get<FieldElement>(a) == std::get<FieldElement>(b);
}

std::string theta_to_string(const Theta& t) {
  if (const auto* u = std::get_if<UPoint>(&t)) return "(" + u->f.to_string() + ", " + u->z.to_string() + ")";
  return std::get<FieldElement>(t).to_string();
}

Theta omega_map(const ObstructionContext& ctx, const OmegaElement& omega) {
  if (ctx.n_odd()) return mu_star(omega);
  return mu_bar(omega);
}

bool u_equivalent(const UPoint& a, const UPoint& b) {
  const Field& k = a.f.field();
  FieldElement F = a.f / b.f, W = a.z / b.z;
  auto r = sqrt(W);
  if (!r) return false;
  for (const auto& y : {*r, -*r}) {
    auto s = sqrt(y);
    if (s && norm(*s, k) == F) return true;
  }
  return false;
}

UClass u0_reduce(const UPoint& p) {
  const Field& k = p.f.field();
  const Field& z = p.z.field();
  if (!k.is_finite()) return UClass(p);
  UPoint best = p;
  auto key = [&](const UPoint& u) { return std::make_pair(k.index_of(u.f), z.index_of(u.z)); };
  for (const auto& z0 : z.nonzero_elements()) {
    UPoint c{p.f * norm(z0, k), p.z * z0.pow(4)};
    if (key(c) < key(best)) best = c;
  }
  return UClass(best);
}

bool same_class(const ObstructionContext& ctx, const Theta& a, const Theta& b) {
  if (ctx.n_odd()) return u_equivalent(std::get<UPoint>(a), std::get<UPoint>(b));
  return square_class(std::get<FieldElement>(a) / std::get<FieldElement>(b)).is_trivial();
}

Theta S_of(const ObstructionContext& ctx, const Similitude& g) {
  return omega_map(ctx, lift_similitude_to_omega(ctx.algebra(), g));
}

Theta i_map(const ObstructionContext& ctx, const FieldElement& f) {
  ensure(&f.field() == &ctx.k(), ErrorCode::NotInField, "i expects an element of k");
  ensure(!f.is_zero(), ErrorCode::ZeroInput, "i of zero");
  if (ctx.n_odd()) return UPoint{f, embed(f * f, ctx.z())};
  return embed(f, ctx.z());
}

FieldElement hilbert90(const FieldElement& w, const Field& k) {
  const Field& z = w.field();
  ensure(norm(w, k).is_one(), ErrorCode::Hilbert90Failure, "N(" + w.to_string() + ") != 1");
  FieldElement z0 = (w == -z.one()) ? z.generator() : z.one() + w;
  ensure(z0 / galois_conj(z0) == w, ErrorCode::Hilbert90Failure, "Hilbert 90 solution does not verify");
  return z0;
}

SquareClass j_map(const ObstructionContext& ctx, const Theta& t) {
  if (ctx.n_odd()) {
    const auto& u = std::get<UPoint>(t);
    FieldElement f2 = embed(u.f * u.f, ctx.z());
    return square_class(norm(hilbert90(u.z / f2, ctx.k()), ctx.k()));
  }
  return square_class(norm(std::get<FieldElement>(t), ctx.k()));
}

SpecialResult is_special(const ObstructionContext& ctx, const Theta& theta, long bound) {
  SpecialResult out{SpecialStatus::Unknown, std::nullopt, j_map(ctx, theta), ""};
  auto search = find_similitude_with_multiplier(ctx.space(), out.j_value.representative(), bound);
  switch (search.status) {
    case SearchStatus::Found:
      out.status = SpecialStatus::Special;
      out.witness = search.similitude;
      break;
    case SearchStatus::NotFound: out.status = SpecialStatus::NotSpecial; break;
    case SearchStatus::Unknown: out.status = SpecialStatus::Unknown; break;
  }
  out.note = search.note;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool definite(const QuadSpace& s) {
  bool pos = true, neg = true;
  for (const auto& d : s.diagonal()) {
    pos = pos && d.rational() > 0;
    neg = neg && d.rational() < 0;
  }
  return pos || neg;
}

// v, w with q(v) q(w) = alpha exactly, given the class condition holds.
std::vector<Vector> exact_pair(const QuadSpace& s, const Vector& v, const Vector& w, const FieldElement& alpha) {
  FieldElement t2 = alpha / (s.evaluate(v) * s.evaluate(w));
  auto t = sqrt(t2);
  ensure(t.has_value(), ErrorCode::AssertionFailure, "spinor norm certificate scaling is not a square");
  return {scale(v, *t), w};
}

// v, w with q(v) q(w) in the class s, using two equal coefficients d_i = d_j:
// w = e_k and q(v) = s d_k d^2 with the (i, j) part d (x^2 + y^2), x^2 + y^2 prime.
std::optional<std::pair<Vector, Vector>> two_squares_pair(const QuadSpace& space, const mpz_class& s) {
  const Field& k = space.field();
  const auto& d = space.diagonal();
  std::size_t m = d.size();
  for (const auto& x : d)
    if (x.rational().get_den() != 1) return std::nullopt;
  std::mt19937_64 rng(mpz_get_ui(s.get_mpz_t()) ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (d[i] != d[j]) continue;
      mpz_class di = d[i].rational().get_num();
      for (std::size_t kk = 0; kk < m; ++kk) {
        mpz_class dk = d[kk].rational().get_num();
        mpz_class target = s * dk * di * di;
        if (sgn(target) != sgn(di) && m == 2) continue;
        mpz_class scale = sqrt(abs(target / di)) + 1;
        for (int attempt = 0; attempt < 4000; ++attempt) {
          Vector v(m, k.zero());
          mpz_class rest = 0;
          for (std::size_t l = 0; l < m; ++l) {
            if (l == i || l == j) continue;
            mpz_class bound = scale / (std::size_t{1} << (attempt % 8)) + 1;
            mpz_class y = mpz_class(static_cast<unsigned long>(rng() >> 1)) % bound;
            if (attempt % 3 == 0) y = 0;
            mpz_class x = di * y;
            rest += d[l].rational().get_num() * x * x;
            v[l] = k.from_rational(mpq_class(x));
          }
          mpz_class quot = target - rest;
          if (quot % di != 0) continue;
          quot /= di;
          if (quot <= 0) continue;
          mpz_class x, y;
          if (quot == 1 || quot == 2) {
            x = 1;
            y = quot - 1;
          } else if (quot % 4 == 1 && mpz_probab_prime_p(quot.get_mpz_t(), 30)) {
            std::tie(x, y) = two_squares_prime(quot);
          } else {
            continue;
          }
          v[i] = k.from_rational(mpq_class(x));
          v[j] = k.from_rational(mpq_class(y));
          Vector w(m, k.zero());
          w[kk] = k.one();
          ensure(space.evaluate(v).rational() == mpq_class(target), ErrorCode::AssertionFailure,
                 "two-squares vector has the wrong value");
          return std::make_pair(v, w);
        }
      }
    }
  return std::nullopt;
}

}  // namespace

SpinorNormDecision is_spinor_norm(const QuadSpace& space, const FieldElement& alpha, long bound) {
  ensure(!alpha.is_zero(), ErrorCode::ZeroInput, "spinor norm of zero");
  const Field& k = space.field();
  SpinorNormDecision out;
  if (alpha.is_one()) {
    out.status = SpinorStatus::Yes;
    return out;
  }
  if (k.is_finite()) {
    SquareClass target = square_class(alpha);
    // First vector of each represented class, in enumeration order.
    std::vector<std::pair<SquareClass, Vector>> reps;
    for_each_vector(k, space.dimension(), [&](const Vector& v) {
      FieldElement qv = space.evaluate(v);
      if (qv.is_zero()) return true;
      SquareClass c(qv);
      for (const auto& r : reps)
        if (r.first == c) return true;
      reps.emplace_back(c, v);
      return reps.size() < 2;
    });
    for (const auto& a : reps)
      for (const auto& b : reps)
        if (a.first * b.first == target) {
          out.status = SpinorStatus::Yes;
          out.vectors = exact_pair(space, a.second, b.second, alpha);
          return out;
        }
    out.status = SpinorStatus::No;
    out.witness = "class of " + alpha.to_string() + " is not a product of two represented classes";
    return out;
  }
  if (k.kind() != Field::Kind::Rationals) {
    out.witness = "no decision procedure over " + k.name();
    return out;
  }
  if (definite(space) && alpha.rational() < 0) {
    out.status = SpinorStatus::No;
    out.witness = "form is definite, so every spinor norm is positive, but alpha < 0";
    return out;
  }
  std::size_t m = space.dimension();
  mpz_class want = partial_squarefree_part(alpha.rational());
  // Integer vectors of height <= bound have |q(v) q(w)| <= reach^2.
  bool integral = true;
  mpz_class reach = 0;
  for (const auto& d : space.diagonal()) {
    integral = integral && d.rational().get_den() == 1;
    reach += abs(d.rational().get_num()) * bound * bound;
  }
  if (!integral || abs(want) <= reach * reach) {
    want = squarefree_part(mpq_class(want));
    std::map<mpz_class, Vector> seen;
    long budget = 20000;
    for (long h = 1; h <= bound && budget >= 0; ++h) {
      std::vector<long> n(m, -h);
      while (true) {
        long mx = 0;
        for (long x : n) mx = std::max(mx, std::labs(x));
        if (mx == h) {
          if (--budget < 0) break;
          Vector v;
          for (long x : n) v.push_back(k.from_int(x));
          FieldElement qv = space.evaluate(v);
          if (!qv.is_zero()) {
            mpz_class c = squarefree_part(qv.rational());
            seen.emplace(c, v);
            mpz_class partner = squarefree_part(mpq_class(c * want));
            auto it = seen.find(partner);
            if (it != seen.end()) {
              out.status = SpinorStatus::Yes;
              out.vectors = exact_pair(space, v, it->second, alpha);
              return out;
            }
          }
        }
        std::size_t i = 0;
        while (i < m && n[i] == h) n[i++] = -h;
        if (i == m) break;
        ++n[i];
      }
    }
  }
  if (auto pair = two_squares_pair(space, want)) {
    out.status = SpinorStatus::Yes;
    out.vectors = exact_pair(space, pair->first, pair->second, alpha);
    return out;
  }
  out.witness = "no pair of vectors found within height " + std::to_string(bound);
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SpinorNorm: return "SpinorNorm";
    case Verdict::NotSpinorNorm: return "NotSpinorNorm";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

ObstructionResult obstruction_alpha(const ObstructionContext& ctx, const Theta& theta, const Similitude& g,
                                    long bound) {
  const Field& k = ctx.k();
  const Field& z = ctx.z();
  OmegaElement omega_g = lift_similitude_to_omega(ctx.algebra(), g);
  Theta s = omega_map(ctx, omega_g);
  Theta q = theta_div(theta, s);
  FieldElement alpha, y;
  if (ctx.n_odd()) {
    const auto& u = std::get<UPoint>(q);
    FieldElement z1 = hilbert90(u.z / embed(u.f * u.f, z), k);
    auto root = sqrt(norm(z1, k));
    ensure(root.has_value(), ErrorCode::NotInImageOfI, "j(theta / S([g])) is not trivial");
    FieldElement sz = embed(*root, z);
    y = z1 + sz;
    if (y.is_zero()) y = z1 - sz;
    alpha = u.f / norm(y, k);
  } else {
    const auto& w = std::get<FieldElement>(q);
    auto root = sqrt(norm(w, k));
    ensure(root.has_value(), ErrorCode::NotInImageOfI, "N(theta / S([g])) is not a square");
    if (w.im().is_zero()) {
      alpha = w.re();
      y = z.one();
    } else {
      // (w + s)^2 / w = Tr(w) + 2s for s^2 = N(w).
      FieldElement s2 = *root;
      FieldElement x = w + embed(s2, z);
      if (x.is_zero()) {
        s2 = -s2;
        x = w + embed(s2, z);
      }
      alpha = trace(w, k) + k.from_int(2) * s2;
      y = x / embed(alpha, z);
    }
  }
  ObstructionResult r{theta, g, alpha, y, Verdict::Unknown, {}, std::nullopt};
  ensure(theta_equal(q, theta_mul(i_map(ctx, alpha), ctx.n_odd() ? Theta(UPoint{norm(y, k), y.pow(4)}) : Theta(y * y))),
         ErrorCode::AssertionFailure, "alpha extraction does not verify");

  r.spinor = is_spinor_norm(ctx.space(), alpha, bound);
  switch (r.spinor.status) {
    case SpinorStatus::Yes: {
      CliffordElement gamma = CliffordElement::one(ctx.algebra());
      for (const auto& v : r.spinor.vectors) gamma = gamma * CliffordElement::vector(ctx.algebra(), v);
      Similitude h = Similitude::from_isometry(vector_representation(gamma));
      OmegaElement cert(omega_g.value() * gamma * CliffordElement::from_center(ctx.algebra(), y), g * h);
      ensure(theta_equal(omega_map(ctx, cert), theta), ErrorCode::AssertionFailure,
             "spinor-norm certificate does not map to theta");
      r.certificate = cert;
      r.verdict = Verdict::SpinorNorm;
      break;
    }
    case SpinorStatus::No: r.verdict = Verdict::NotSpinorNorm; break;
    case SpinorStatus::Unknown: r.verdict = Verdict::Unknown; break;
  }
  return r;
}

bool verify_obstruction(const ObstructionContext& ctx, const ObstructionResult& r) {
  const Field& k = ctx.k();
  if (!r.witness.is_proper()) return false;
  Theta s = S_of(ctx, r.witness);
  Theta rhs = theta_mul(s, i_map(ctx, r.alpha));
  rhs = theta_mul(rhs, ctx.n_odd() ? Theta(UPoint{norm(r.y, k), r.y.pow(4)}) : Theta(r.y * r.y));
  if (!theta_equal(rhs, r.theta)) return false;
  if (r.verdict == Verdict::SpinorNorm) {
    if (!r.certificate) return false;
    FieldElement prod = k.one();
    for (const auto& v : r.spinor.vectors) prod *= ctx.space().evaluate(v);
    if (prod != r.alpha || r.spinor.vectors.size() % 2) return false;
    OmegaElement check(r.certificate->value(), r.certificate->similitude());
    if (!theta_equal(omega_map(ctx, check), r.theta)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

UCount count_u(const ObstructionContext& ctx) {
  const Field& k = ctx.k();
  const Field& z = ctx.z();
  ensure(k.is_finite(), ErrorCode::UnsupportedField, "U enumeration needs a finite field");
  UCount c;
  auto zs = z.nonzero_elements();
  std::vector<FieldElement> norms;
  for (const auto& w : zs) norms.push_back(norm(w, k));
  for (const auto& f : k.nonzero_elements()) {
    FieldElement f4 = f.pow(4);
    for (const auto& n : norms) c.u += n == f4;
  }
  std::set<std::pair<std::uint64_t, std::uint64_t>> u0;
  for (std::size_t i = 0; i < zs.size(); ++i) u0.insert({k.index_of(norms[i]), z.index_of(zs[i].pow(4))});
  c.u0 = u0.size();
  return c;
}

std::uint64_t coinvariants_order(const std::vector<FieldElement>& module,
                                 const std::function<FieldElement(const FieldElement&)>& frobenius) {
  ensure(!module.empty(), ErrorCode::ZeroInput, "empty module");
  const Field& f = module.front().field();
  std::set<std::uint64_t> image;
  for (const auto& a : module) image.insert(f.index_of(frobenius(a) / a));
  // Subgroup generated by the image of F - 1.
  std::vector<std::uint64_t> gens(image.begin(), image.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint64_t> cur(image.begin(), image.end());
    for (auto a : cur)
      for (auto b : gens)
        if (image.insert(f.index_of(f.element_at(a) * f.element_at(b))).second) grew = true;
  }
  ensure(module.size() % image.size() == 0, ErrorCode::AssertionFailure, "coinvariant subgroup order");
  return module.size() / image.size();
}

H1Description h1_mu4Z_finite_field(const QuadSpace& space) {
  const Field& k = space.field();
  ensure(k.is_finite(), ErrorCode::UnsupportedField, "H^1 by coinvariants needs a finite field");
  ensure(!is_square(discriminant_value(space)), ErrorCode::SplitDiscriminant, "discriminant is a square");
  std::uint64_t q = k.order();
  // mu_4 lives in F_{q^r} with 4 | q^r - 1.
  int r = (q % 4 == 1) ? 1 : 2;
  const Field& big = Field::finite(k.characteristic(), k.absolute_degree() * r);
  std::vector<FieldElement> mu4;
  for (const auto& a : big.nonzero_elements())
    if (a.pow(4).is_one()) mu4.push_back(a);
  // On the first coordinate a of (a, a^{-1}): a -> (a^{-1})^q.
  auto frob = [&](const FieldElement& a) { return a.inverse().pow(static_cast<long>(q)); };
  H1Description d;
  d.module_order = mu4.size();
  d.splitting_degree = static_cast<std::uint64_t>(r);
  d.order = coinvariants_order(mu4, frob);
  if (d.order > 1) d.invariant_factors.push_back(d.order);  // quotient of a cyclic group
  return d;
}

}  // namespace spinob
