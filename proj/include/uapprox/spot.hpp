#pragma once

#include <cstdint>
#include <vector>

#include "uapprox/hash.hpp"
#include "uapprox/oracle.hpp"
#include "uapprox/rng.hpp"
#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// Which heavy-hitter condition the derived parameters assume for the sign
// coefficients of the shrink step: pairwise-independent signs (Chebyshev
// analysis) or fully i.i.d. signs (Hoeffding analysis, smaller constant).
enum class Variant {
  kPairwise,
  kIid,
};

// Maximum number of random-hash shrink iterations for domain size m >= 2:
//   max{0, ceil(log_{9/8}(log2(m) / 8))}.
unsigned kstar(std::uint64_t m);

// D_k = ceil(2^(8*(9/8)^k + k + 2) / alpha). Throws when the value would
// exceed 2^63 (instance too demanding). The exponent is evaluated in
// floating point; its sub-ulp slack is absorbed by the ceiling.
std::uint64_t dk_value(double alpha, unsigned k);

// Shrink-iteration schedule for one spot call.
struct SpotSchedule {
  double alpha = 0.0;
  unsigned iterations = 0;               // k*
  std::vector<std::uint64_t> hash_sizes;  // D_0 .. D_{k*-1}
};

SpotSchedule dk_schedule(double alpha, unsigned kstar_value);

// Heavy-hitter threshold multiplier gamma for spot_alpha: the guarantee
// needs ||x_{J \ {j}}||_2 <= |x_j| / gamma.
//   pairwise: 2049 * sqrt(2) * alpha^{-3/2}
//   iid:      1025 * sqrt(2 * log(16 / alpha)) / alpha
double heavy_hitter_threshold(double alpha, Variant variant);

// Candidate set of indices, either explicit (enumerated) or implicit (a
// chain of hash-equality constraints over the full domain [m]). Both
// representations support membership tests; the implicit one in O(chain
// length) without enumerating anything.
class CandidateSet {
 public:
  struct Constraint {
    PairwiseHash hash;
    std::uint64_t value;  // required 1-based hash value
  };

  static CandidateSet explicit_set(std::uint64_t dim, IndexSet indices);
  // Implicit set of the whole domain [m].
  static CandidateSet whole_domain(std::uint64_t dim);
  // Implicit bucket {i : hash(i) = value}.
  static CandidateSet bucket(std::uint64_t dim, PairwiseHash hash, std::uint64_t value);

  bool is_explicit() const noexcept { return explicit_; }
  // True only when the set is structurally known to be empty.
  bool known_empty() const noexcept { return explicit_ && indices_.empty(); }
  std::uint64_t dim() const noexcept { return dim_; }

  const IndexSet& indices() const;  // explicit mode only
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  bool contains(std::uint64_t i) const;

  // Implicit set refined by one more hash-equality link.
  CandidateSet refined(PairwiseHash hash, std::uint64_t value) const;
  // Explicit set filtered to the members satisfying hash(i) = value.
  CandidateSet filtered(const PairwiseHash& hash, std::uint64_t value) const;

 private:
  bool explicit_ = true;
  std::uint64_t dim_ = 0;
  IndexSet indices_;
  std::vector<Constraint> constraints_;
};

// Result of one shrink step.
struct ShrinkOutcome {
  CandidateSet set;
  bool y1_was_zero = false;
  // ceil(Y2/Y1 + D0/2) when it lands in [1, D0], else 0.
  std::uint64_t selected_value = 0;
};

// Two-measurement shrink step over candidate set S with hash h into [D0]:
//   Y1 = sum_{i in S} sigma_i x_i
//   Y2 = sum_{i in S} (h_i - (D0+1)/2) sigma_i x_i
// returns {i in S : h_i = ceil(Y2/Y1 + D0/2)}. Charges exactly 2 stage-2
// measurements. Y1 = 0 yields the empty set and flags failure.
ShrinkOutcome shrink(MeasurementOracle& oracle, const CandidateSet& s,
                     const PairwiseHash& h, const RademacherStream& signs);

struct SpotResult {
  IndexSet found;                   // at most one index
  std::uint64_t measurements = 0;   // stage-2 charges of this call
  bool y1_failure = false;
  unsigned random_steps = 0;        // shrink iterations actually run
  bool final_step_run = false;
};

// Adaptive one-sparse recovery on candidate set J: iterates shrink with
// fresh hashes of sizes D_0..D_{k*-1}, then a final injective-hash step.
// Explicit sets terminate early once at most one candidate remains (a
// structural singleton is returned without the extra two measurements);
// implicit sets always run all k* iterations and finish with the identity
// hash over [m], replaying the constraint chain on the recovered index
// before accepting it. Total stage-2 charge is at most 2*k* + 2.
SpotResult spot(MeasurementOracle& oracle, const CandidateSet& j_set, double alpha,
                std::uint64_t m, const RngStream& stream);

}  // namespace uapprox
