#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinob/hilbert.hpp"
#include "spinob/similitude.hpp"

namespace spinob {

// The quaternion algebra (a, b) over Q or a finite field, up to Brauer equivalence.
// Over finite fields the Brauer group is trivial and every class is split.
struct QuaternionClass {
  FieldElement a;
  FieldElement b;
  // Q only: primes ascending, kRealPlace last. Always of even size.
  std::vector<long> ramification;
};

// Throws UnsupportedField outside Q and finite fields of odd characteristic.
QuaternionClass quaternion_class(const FieldElement& a, const FieldElement& b);
bool is_split(const QuaternionClass& q);

// Hasse invariant prod_{i<j} (a_i, a_j)_v of a diagonal rational form.
int hasse_invariant(const QuadSpace& space, long place);
// Hasse-Minkowski: dimension, discriminant, signature and every Hasse invariant.
bool rational_forms_isometric(const QuadSpace& a, const QuadSpace& b);

enum class CorestrictionStatus {
  Checked,
  // (d, f1) is ramified at a real place of L.
  SkippedNonSplit,
  // Neither a splitting certificate nor a real-place obstruction within the bound.
  SkippedUndecided,
  // d is a square in L.
  SkippedSplitZ,
};
std::string corestriction_status_name(CorestrictionStatus s);

struct CorestrictionResult {
  CorestrictionStatus status = CorestrictionStatus::SkippedUndecided;
  // Checked: f1 = x^2 - d y^2 over L, verified exactly.
  std::optional<FieldElement> x, y;
  mpq_class norm_f1;
  // Checked: whether (d, N_{L/Q}(f1)) is split over Q.
  bool consequence = false;
  std::vector<long> ramification;
  std::string note;
};

// (d, f1) split over L = Q(sqrt m) implies (d, N_{L/Q}(f1)) split over Q.
// f1 must lie in Field::qsqrt(m).
CorestrictionResult corestriction_consequence_check(const mpq_class& d, long m, const FieldElement& f1,
                                                    long bound = 3);

struct CorestrictionInstance {
  long d = 0;
  long m = 0;
  FieldElement f1;
  CorestrictionResult result;
};

struct CorestrictionRun {
  std::vector<CorestrictionInstance> checked;
  std::size_t skipped = 0;
  std::size_t failures = 0;
};

// Random instances until `count` have a certified split premise.
CorestrictionRun corestriction_property_run(std::uint64_t seed, std::size_t count, long bound = 3);

// (disc, mu(g)) is split over Q for an improper similitude g over Q.
// Throws UnsupportedField, OddDimension or ProperSimilitude.
bool dieudonne_split_check(const Similitude& g);

}  // namespace spinob
