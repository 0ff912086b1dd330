#pragma once

#include <cstdint>
#include <vector>

#include "uapprox/oracle.hpp"
#include "uapprox/rng.hpp"
#include "uapprox/sketch.hpp"
#include "uapprox/sparse_vector.hpp"
#include "uapprox/spot.hpp"

namespace uapprox {

// How stage-2 candidate sets are represented: explicit mode enumerates
// bucket members (small m only), implicit mode carries hash constraints
// and never materializes a bucket.
enum class CandidateMode {
  kExplicit,
  kImplicit,
};

// All derived constants for one (p, eps, delta, m) instance.
struct AlgoParams {
  double p = 1.0;
  double eps = 0.5;
  double delta = 0.5;
  std::uint64_t dim = 2;  // m
  Variant variant = Variant::kPairwise;

  std::uint64_t k0 = 1;         // floor(eps^-p), max count of eps-heavy coordinates
  double alpha = 0.0;           // delta / (2 k0), per-bucket spot budget
  double gamma = 0.0;           // heavy-hitter threshold multiplier
  std::uint64_t buckets = 1;    // D
  std::uint64_t repetitions = 1;  // R, odd
  std::uint64_t top_k = 1;      // k
  std::uint64_t groups = 1;     // G = 4k
  double delta0 = 0.0;          // delta / 4, hashing failure budget
  double delta1 = 0.0;          // delta / 4, bucket-selection failure budget

  SelectParams select_params() const {
    return SelectParams{repetitions, groups, top_k, buckets};
  }
};

// Derives the parametric setup: gamma from the spot guarantee, D from the
// hashing corollary, R/k/G from the bucket-selection lemma. Throws
// std::overflow_error naming the offending formula when D or k leave the
// representable range.
AlgoParams derive_params(double p, double eps, double delta, std::uint64_t m,
                         Variant variant = Variant::kPairwise);

struct PredictedCost {
  std::uint64_t n1 = 0;      // exactly R*G
  std::uint64_t n2_max = 0;  // k * (2 kstar(m) + 2)
  std::uint64_t n3_max = 0;  // k
};

PredictedCost predicted_cost(const AlgoParams& params, std::uint64_t m);

struct BucketOutcome {
  std::uint64_t bucket = 0;  // 0-based bucket id
  bool found = false;
  std::uint64_t index = 0;   // recovered coordinate when found
  bool y1_failure = false;
  std::uint64_t measurements = 0;
};

struct ApproxOutput {
  SparseVector approximation;  // z = x projected onto K, entries exact
  IndexSet selected;           // K
  CostLedger ledger;
  bool trivial_branch = false;
  std::vector<BucketOutcome> spot_outcomes;
};

// The three-stage algorithm: bucket selection, spotting, entry queries.
// When the derived D >= m the trivial-hash branch runs: buckets are
// singletons, stage 2 is skipped, and K is read off the selected ids.
ApproxOutput approximate(MeasurementOracle& oracle, const AlgoParams& params,
                         const RngStream& stream,
                         CandidateMode mode = CandidateMode::kImplicit);

// Expected-error wrapper: delegates to approximate with eps/2, eps/2.
ApproxOutput approximate_expected(MeasurementOracle& oracle, double p, double eps,
                                  const RngStream& stream,
                                  CandidateMode mode = CandidateMode::kImplicit,
                                  Variant variant = Variant::kPairwise);

// Reduced threshold for p > 2: eps' = m^{-(1/2 - 1/p)} * eps.
double epsilon_prime(double p, std::uint64_t m, double eps);

// p > 2 reduction: runs the expected-error method at p = 2 with eps'.
ApproxOutput approximate_p_gt2(MeasurementOracle& oracle, double p, double eps,
                               const RngStream& stream,
                               CandidateMode mode = CandidateMode::kImplicit,
                               Variant variant = Variant::kPairwise);

}  // namespace uapprox
