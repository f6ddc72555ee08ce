#include "spinob/npharness.hpp"

#include <random>

namespace spinob {

ExtensionSpec ExtensionSpec::quadratic_of_q(long m) {
  const Field& top = Field::qsqrt(m);
  return ExtensionSpec(Kind::QuadraticOfQ, Field::rationals(), top, 2);
}

ExtensionSpec ExtensionSpec::finite_degree(long p, int r) {
  ensure(r >= 2, ErrorCode::InvalidConfig, "extension degree must be at least 2");
  const Field& base = Field::prime(p);
  const Field& top = Field::finite(p, r);
  return ExtensionSpec(Kind::FiniteDegree, base, top, r);
}

QuadSpace base_change(const QuadSpace& space, const ExtensionSpec& ext) {
  ensure(&space.field() == &ext.base(), ErrorCode::MalformedTower,
         space.to_string() + " is not defined over " + ext.base().name());
  Vector d;
  for (const auto& x : space.diagonal()) d.push_back(embed(x, ext.top()));
  return QuadSpace(ext.top(), d);
}

ObstructionContext context_over(const QuadSpace& space, const ExtensionSpec& ext) {
  QuadSpace sl = base_change(space, ext);
  ensure(!is_square(CliffordAlgebra::create(sl)->zeta_square()), ErrorCode::SplitDiscriminantOverL,
         "discriminant of " + space.to_string() + " is a square in " + ext.top().name());
  return ObstructionContext(sl);
}

namespace {

FieldElement norm_z(const FieldElement& z, const ObstructionContext& ctx_k, const ExtensionSpec& ext) {
  const Field& k = ext.base();
  FieldElement prod = z;
  for (int i = 1; i < ext.degree(); ++i) prod = prod * automorphism(z, k, i);
  return ctx_k.z().make(restrict_to(prod.re(), k), restrict_to(prod.im(), k));
}

void check_contexts(const ObstructionContext& ctx_l, const ObstructionContext& ctx_k, const ExtensionSpec& ext) {
  ensure(&ctx_k.k() == &ext.base() && &ctx_l.k() == &ext.top(), ErrorCode::MalformedTower,
         "contexts are not over " + ext.name());
  const auto& dl = ctx_l.space().diagonal();
  const auto& dk = ctx_k.space().diagonal();
  bool same = dl.size() == dk.size();
  for (std::size_t i = 0; same && i < dk.size(); ++i) same = dl[i] == embed(dk[i], ext.top());
  ensure(same, ErrorCode::MalformedTower, "form over L is not the base change of the form over k");
}

}  // namespace

Theta norm_of_theta(const ObstructionContext& ctx_l, const ObstructionContext& ctx_k, const ExtensionSpec& ext,
                    const Theta& theta) {
  check_contexts(ctx_l, ctx_k, ext);
  if (const auto* u = std::get_if<UPoint>(&theta)) {
    UPoint n{norm(u->f, ext.base()), norm_z(u->z, ctx_k, ext)};
    ensure(n.f.pow(4) == norm(n.z, ext.base()), ErrorCode::AssertionFailure, "norm of a U-point left U");
    return n;
  }
  return norm_z(std::get<FieldElement>(theta), ctx_k, ext);
}

ScharlauResult scharlau_go_plus(const QuadSpace& space, const ExtensionSpec& ext, const Similitude& g1, long bound) {
  ensure(&g1.space().field() == &ext.top(), ErrorCode::MalformedTower, "g1 is not defined over " + ext.top().name());
  ScharlauResult r;
  r.f = norm(g1.multiplier(), ext.base());
  auto search = find_similitude_with_multiplier(space, r.f, bound);
  r.status = search.status;
  r.note = search.note;
  if (search.status == SearchStatus::Found) {
    ensure(search.similitude->multiplier() == r.f && search.similitude->is_proper(), ErrorCode::AssertionFailure,
           "constructed similitude has the wrong multiplier or is improper");
    r.g = search.similitude;
  }
  ensure(!(ext.base().is_finite() && r.status != SearchStatus::Found), ErrorCode::AssertionFailure,
         "no similitude with multiplier " + r.f.to_string() + " over a finite field");
  return r;
}

NPReport weak_np_experiment(const QuadSpace& space, const ExtensionSpec& ext, std::size_t samples,
                            std::uint64_t seed, long bound) {
  ObstructionContext ctx_k(space);
  ObstructionContext ctx_l = context_over(space, ext);
  const Field& k = ext.base();
  NPReport rep;
  rep.map = ctx_k.n_odd() ? "mu_star" : "mu_bar";
  rep.extension = ext.name();
  rep.form = space.to_string();
  rep.seed = seed;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    Similitude g1 = random_proper_similitude(ctx_l.space(), rng);
    Theta theta = omega_map(ctx_l, lift_similitude_to_omega(ctx_l.algebra(), g1));
    Theta nt = norm_of_theta(ctx_l, ctx_k, ext, theta);
    SquareClass jk = j_map(ctx_k, nt);
    ensure(jk == square_class(norm(j_map(ctx_l, theta).representative(), k)), ErrorCode::AssertionFailure,
           "j does not commute with the norm");
    ScharlauResult sch = scharlau_go_plus(space, ext, g1);
    if (!sch.g) {
      ++rep.unknown;
      continue;
    }
    ensure(jk == square_class(sch.f), ErrorCode::AssertionFailure, "norm of theta is not special");
    ObstructionResult r = obstruction_alpha(ctx_k, nt, *sch.g, bound);
    switch (r.verdict) {
      case Verdict::SpinorNorm: ++rep.yes; break;
      case Verdict::NotSpinorNorm:
        ++rep.no;
        rep.counterexamples.push_back(i);
        break;
      case Verdict::Unknown: ++rep.unknown; break;
    }
    rep.entries.push_back(NPSample{i, g1, theta, nt, jk, r});
  }
  return rep;
}

bool verify_np_report(const QuadSpace& space, const ExtensionSpec& ext, const NPReport& report) {
  ObstructionContext ctx_k(space);
  ObstructionContext ctx_l = context_over(space, ext);
  std::size_t yes = 0, no = 0, unknown = report.samples - report.entries.size();
  for (const auto& e : report.entries) {
    Theta theta = omega_map(ctx_l, lift_similitude_to_omega(ctx_l.algebra(), e.g1));
    if (!theta_equal(theta, e.theta)) return false;
    if (!theta_equal(norm_of_theta(ctx_l, ctx_k, ext, theta), e.norm_theta)) return false;
    if (!theta_equal(e.result.theta, e.norm_theta)) return false;
    if (e.result.witness.multiplier() != norm(e.g1.multiplier(), ext.base())) return false;
    if (!verify_obstruction(ctx_k, e.result)) return false;
    yes += e.result.verdict == Verdict::SpinorNorm;
    no += e.result.verdict == Verdict::NotSpinorNorm;
    unknown += e.result.verdict == Verdict::Unknown;
  }
  return yes == report.yes && no == report.no && unknown == report.unknown;
}

std::vector<SearchRun> search_runs(const SearchConfig& config) {
  std::vector<SearchRun> runs;
  for (std::size_t fi = 0; fi < config.forms.size(); ++fi)
    for (std::size_t ei = 0; ei < config.extensions.size(); ++ei) {
      const QuadSpace& s = config.forms[fi];
      const ExtensionSpec& ext = config.extensions[ei];
      if (&s.field() != &ext.base()) continue;
      try {
        context_over(s, ext);
      } catch (const MathError& e) {
        if (e.code() == ErrorCode::SplitDiscriminantOverL) continue;
        throw;
      }
      std::uint64_t seed = config.seed + 1000003ULL * fi + 7919ULL * ei;
      runs.push_back(SearchRun{fi, ei, weak_np_experiment(s, ext, config.samples, seed, config.bound)});
    }
  return runs;
}

std::vector<SearchHit> counterexample_search(const SearchConfig& config) {
  std::vector<SearchHit> hits;
  for (const auto& run : search_runs(config))
    for (const auto& e : run.report.entries)
      if (e.result.verdict != Verdict::SpinorNorm) hits.push_back(SearchHit{run.form_index, run.extension_index, e});
  return hits;
}

}  // namespace spinob
