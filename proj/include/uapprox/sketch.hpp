#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "uapprox/hash.hpp"
#include "uapprox/oracle.hpp"
#include "uapprox/rng.hpp"
#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// Parameters of the bucket-selection routine: R repetitions (odd), G
// groups per repetition, k buckets to select out of D.
struct SelectParams {
  std::uint64_t repetitions = 1;  // R, odd
  std::uint64_t groups = 1;       // G
  std::uint64_t top_k = 1;        // k
  std::uint64_t buckets = 1;      // D

  void validate() const;
};

// Partition count sketch of a hidden vector: R repetitions of G grouped
// Rademacher measurements over the buckets of a hash [m] -> [D].
// Immutable after build; scoring is read-only.
class SketchState {
 public:
  SketchState(SelectParams params, PairwiseHash bucket_hash,
              std::vector<PairwiseHash> group_hashes,
              std::vector<RademacherStream> signs, std::vector<double> y)
      : params_(params),
        bucket_hash_(std::move(bucket_hash)),
        group_hashes_(std::move(group_hashes)),
        signs_(std::move(signs)),
        y_(std::move(y)) {}

  const SelectParams& params() const noexcept { return params_; }
  const PairwiseHash& bucket_hash() const noexcept { return bucket_hash_; }
  const PairwiseHash& group_hash(std::uint64_t r) const { return group_hashes_[r]; }
  const RademacherStream& sign_stream(std::uint64_t r) const { return signs_[r]; }

  // Y[r][g] with 0-based r and g.
  double measurement(std::uint64_t r, std::uint64_t g) const { return y_[r * params_.groups + g]; }

  // 0-based group of 0-based bucket d in repetition r.
  std::uint64_t group_of(std::uint64_t d, std::uint64_t r) const {
    return group_hashes_[r].eval(d) - 1;
  }

  // hat(Y)_{r,d}: the one measurement of repetition r influenced by bucket d.
  double hat(std::uint64_t r, std::uint64_t d) const {
    return measurement(r, group_of(d, r));
  }

 private:
  SelectParams params_;
  PairwiseHash bucket_hash_;
  std::vector<PairwiseHash> group_hashes_;
  std::vector<RademacherStream> signs_;
  std::vector<double> y_;  // row-major R x G
};

// Performs the n1 = R*G random measurements
//   Y[r][g] = sum_{i : group_r(bucket(i)) = g} sigma_{r,i} * x_i
// charging exactly R*G to stage 1.
SketchState build_sketch(MeasurementOracle& oracle, const PairwiseHash& bucket_hash,
                         const SelectParams& params, const RngStream& stream);

// Z_d = median over r of |hat(Y)_{r,d}| for a 0-based bucket d. Reuses the
// stored sketch; no oracle access.
double bucket_score(const SketchState& state, std::uint64_t d);

// Top-k buckets of an explicit score list (pairs of bucket id, score).
// Ties broken by smaller bucket id. Throws if k exceeds the list size.
IndexSet top_k_by_score(std::vector<std::pair<std::uint64_t, double>> scores,
                        std::uint64_t k);

// Streaming top-k over all 0-based buckets d in [0, D): equivalent to
// scoring every bucket with bucket_score and applying top_k_by_score, but
// runs with bounded memory using a k-element heap and an early-exit
// majority vote against the current heap threshold.
IndexSet select_top_k(const SketchState& state, std::uint64_t k);

// Harness diagnostic (requires full knowledge of x, no oracle): buckets
// containing a coordinate j with |x_j| >= eps whose in-bucket l2 noise is
// at most |x_j| / gamma_sel. Returned bucket ids are 0-based.
IndexSet compute_q(const SparseVector& x, const PairwiseHash& bucket_hash, double eps,
                   double gamma_sel);
IndexSet compute_q(const SparseVector& x, const PairwiseHash& bucket_hash, double eps);

// Non-adaptive count-sketch coordinate estimate under trivial hashing
// (bucket_hash must be the identity, D = m):
//   Z~_i = median over r of sigma_{r,i} * hat(Y)_{r,i}.
double count_sketch_estimate(const SketchState& state, std::uint64_t i);

}  // namespace uapprox
