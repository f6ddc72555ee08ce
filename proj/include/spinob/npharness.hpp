#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinob/obstruction.hpp"

namespace spinob {

// L/k with k = Q and L = Q(sqrt m), or k = F_p and L = F_{p^r}.
class ExtensionSpec {
 public:
  enum class Kind { QuadraticOfQ, FiniteDegree };
  static ExtensionSpec quadratic_of_q(long m);
  static ExtensionSpec finite_degree(long p, int r);

  Kind kind() const { return kind_; }
  const Field& base() const { return *base_; }
  const Field& top() const { return *top_; }
  int degree() const { return degree_; }
  std::string name() const { return top_->name() + "/" + base_->name(); }

 private:
  ExtensionSpec(Kind kind, const Field& base, const Field& top, int degree)
      : kind_(kind), base_(&base), top_(&top), degree_(degree) {}
  Kind kind_;
  const Field* base_;
  const Field* top_;
  int degree_;
};

// The same diagonal over L; throws MalformedTower when space is not over k.
QuadSpace base_change(const QuadSpace& space, const ExtensionSpec& ext);

// Coefficientwise N_{L/k} from Z_L = L(zeta) to Z_k = k(zeta), applied to both
// coordinates of a U-point. Throws MalformedTower when the contexts do not match ext.
Theta norm_of_theta(const ObstructionContext& ctx_l, const ObstructionContext& ctx_k, const ExtensionSpec& ext,
                    const Theta& theta);

// Context over L for a form over k; throws SplitDiscriminantOverL.
ObstructionContext context_over(const QuadSpace& space, const ExtensionSpec& ext);

struct ScharlauResult {
  SearchStatus status = SearchStatus::Unknown;
  FieldElement f;
  std::optional<Similitude> g;
  std::string note;
};

// Proper g over k with mu(g) = N_{L/k}(mu(g1)).
ScharlauResult scharlau_go_plus(const QuadSpace& space, const ExtensionSpec& ext, const Similitude& g1,
                                long bound = 50);

struct NPSample {
  std::size_t index = 0;
  Similitude g1;
  Theta theta;
  Theta norm_theta;
  SquareClass j_value;
  ObstructionResult result;
};

struct NPReport {
  std::string map;  // "mu_star" or "mu_bar"
  std::string extension;
  std::string form;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t yes = 0, no = 0, unknown = 0;
  std::vector<NPSample> entries;
  // Indices of NotSpinorNorm samples.
  std::vector<std::size_t> counterexamples;
};

// For each sample: random proper g1 over L, theta = map(omega(g1)), N(theta),
// special witness from scharlau_go_plus, alpha and its spinor-norm decision.
NPReport weak_np_experiment(const QuadSpace& space, const ExtensionSpec& ext, std::size_t samples,
                            std::uint64_t seed, long bound = 6);

// Re-checks every certificate and identity of a report.
bool verify_np_report(const QuadSpace& space, const ExtensionSpec& ext, const NPReport& report);

struct SearchConfig {
  std::vector<QuadSpace> forms;
  std::vector<ExtensionSpec> extensions;
  std::size_t samples = 10;
  std::uint64_t seed = 0;
  long bound = 6;
};

struct SearchHit {
  std::size_t form_index = 0;
  std::size_t extension_index = 0;
  NPSample sample;
};

struct SearchRun {
  std::size_t form_index = 0;
  std::size_t extension_index = 0;
  NPReport report;
};

// One report per (form, extension) pair over the same base field whose
// discriminant stays nonsplit over L, in (form, extension) order.
std::vector<SearchRun> search_runs(const SearchConfig& config);

// Samples whose verdict is NotSpinorNorm or Unknown, over every (form, extension)
// pair for which the discriminant stays nonsplit over L.
std::vector<SearchHit> counterexample_search(const SearchConfig& config);

}  // namespace spinob
