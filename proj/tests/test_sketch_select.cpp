#include <algorithm>
#include <cmath>
#include <vector>

#include "uapprox/generators.hpp"
#include "uapprox/oracle.hpp"
#include "uapprox/sketch.hpp"
#include "test_util.hpp"

using namespace uapprox;

namespace {

SketchState make_sketch(MeasurementOracle& oracle, const PairwiseHash& bucket_hash,
                        SelectParams params, std::uint64_t seed) {
  return build_sketch(oracle, bucket_hash, params, RngStream::from_seed(seed).child("sk", 0));
}

void test_build_sketch_zero_vector() {
  MeasurementOracle oracle(SparseVector(64));
  const SelectParams params{5, 8, 3, 16};
  SequentialDraw draw{RngStream::from_seed(1).child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, 16);
  const SketchState state = make_sketch(oracle, bh, params, 2);
  for (std::uint64_t r = 0; r < 5; ++r)
    for (std::uint64_t g = 0; g < 8; ++g) CHECK(state.measurement(r, g) == 0.0);
  // Cost exactness: exactly R*G stage-1 measurements.
  CHECK_EQ(oracle.cost_report().n1, std::uint64_t{40});
  CHECK_EQ(oracle.cost_report().n2, std::uint64_t{0});
  for (std::uint64_t d = 0; d < 16; ++d) CHECK(bucket_score(state, d) == 0.0);
}

void test_build_sketch_single_group() {
  // R = 1, G = 1: the one measurement is a single Rademacher functional.
  const SparseVector x = SparseVector::from_entries(32, {{3, 1.5}, {10, -2.0}, {20, 0.5}});
  MeasurementOracle oracle(x);
  const SelectParams params{1, 1, 1, 8};
  SequentialDraw draw{RngStream::from_seed(3).child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, 8);
  const SketchState state = make_sketch(oracle, bh, params, 4);
  const RademacherStream& signs = state.sign_stream(0);
  const double expect = signs.sign(3) * 1.5 + signs.sign(10) * -2.0 + signs.sign(20) * 0.5;
  CHECK(state.measurement(0, 0) == expect);
}

void test_build_sketch_single_spike() {
  // A single nonzero lands in exactly one group per repetition.
  const std::uint64_t j = 40;
  const double v = 0.75;
  MeasurementOracle oracle(SparseVector::from_entries(64, {{j, v}}));
  const SelectParams params{3, 4, 2, 16};
  SequentialDraw draw{RngStream::from_seed(5).child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, 16);
  const SketchState state = make_sketch(oracle, bh, params, 6);
  const std::uint64_t d_j = bh.eval(j) - 1;
  for (std::uint64_t r = 0; r < 3; ++r) {
    const std::uint64_t g_j = state.group_of(d_j, r);
    for (std::uint64_t g = 0; g < 4; ++g) {
      if (g == g_j) {
        CHECK(std::fabs(state.measurement(r, g)) == v);
      } else {
        CHECK(state.measurement(r, g) == 0.0);
      }
    }
    CHECK(state.hat(r, d_j) == state.measurement(r, g_j));
  }
  CHECK(bucket_score(state, d_j) == v);
}

void test_bucket_score_median() {
  // One group per repetition, hat values (-3, 1, 2): the score is the
  // median of absolute values, 2.
  const SelectParams params{3, 1, 1, 1};
  std::vector<PairwiseHash> group_hashes(3, PairwiseHash(0, 0, 1));
  std::vector<RademacherStream> signs(3);
  const SketchState state(params, PairwiseHash::identity(1), std::move(group_hashes),
                          std::move(signs), {-3.0, 1.0, 2.0});
  CHECK(bucket_score(state, 0) == 2.0);
}

void test_top_k_by_score_examples() {
  CHECK(top_k_by_score({{1, 5.0}, {2, 3.0}, {3, 9.0}}, 2) == IndexSet::from_values({1, 3}));
  // Equal scores: tie-break by smaller id.
  CHECK(top_k_by_score({{1, 2.0}, {2, 2.0}, {3, 2.0}}, 2) == IndexSet::from_values({1, 2}));
  CHECK(top_k_by_score({{1, 1.0}, {2, 2.0}, {3, 3.0}}, 3) ==
        IndexSet::from_values({1, 2, 3}));
  CHECK_THROWS(top_k_by_score({{1, 1.0}}, 2));
}

// Streaming selection agrees with brute-force scoring of every bucket.
void test_select_top_k_matches_bruteforce() {
  const RngStream stream = RngStream::from_seed(17);
  for (unsigned rep = 0; rep < 25; ++rep) {
    const std::uint64_t m = 512;
    const std::uint64_t d = 64;
    const std::uint64_t k = 1 + rep % 16;
    const SparseVector x = gen_random_unit(m, 24, 1.0, stream.child("x", rep));
    MeasurementOracle oracle(x);
    SequentialDraw draw{stream.child("bh", rep)};
    const PairwiseHash bh = PairwiseHash::draw(draw, d);
    const SelectParams params{9, 16, k, d};
    const SketchState state =
        build_sketch(oracle, bh, params, stream.child("sk", rep));
    std::vector<std::pair<std::uint64_t, double>> scores;
    for (std::uint64_t b = 0; b < d; ++b) scores.push_back({b, bucket_score(state, b)});
    CHECK(select_top_k(state, k) == top_k_by_score(std::move(scores), k));
  }
}

// Negating the input leaves every bucket score unchanged under the same seed.
void test_score_sign_symmetry() {
  const RngStream stream = RngStream::from_seed(23);
  const SparseVector x = gen_random_unit(256, 30, 2.0, stream.child("x", 0));
  const SelectParams params{7, 8, 4, 32};
  SequentialDraw draw{stream.child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, 32);

  MeasurementOracle o1(x);
  MeasurementOracle o2(x.scaled(-1.0));
  const SketchState s1 = build_sketch(o1, bh, params, stream.child("sk", 0));
  const SketchState s2 = build_sketch(o2, bh, params, stream.child("sk", 0));
  for (std::uint64_t d = 0; d < 32; ++d) CHECK(bucket_score(s1, d) == bucket_score(s2, d));
  CHECK(select_top_k(s1, 4) == select_top_k(s2, 4));
}

void test_compute_q_examples() {
  SequentialDraw draw{RngStream::from_seed(29).child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, 64);

  // Single spike: Q is exactly its bucket.
  const SparseVector spike = SparseVector::from_entries(1024, {{100, 1.0}});
  CHECK(compute_q(spike, bh, 0.5) == IndexSet::from_values({bh.eval(100) - 1}));

  // Zero vector: empty Q.
  CHECK(compute_q(SparseVector(1024), bh, 0.5).empty());

  // Two spikes in distinct buckets, no noise: both buckets qualify.
  std::uint64_t i1 = 3, i2 = 4;
  while (bh.eval(i1) == bh.eval(i2)) ++i2;
  const SparseVector two =
      SparseVector::from_entries(1024, {{i1, 0.9}, {i2, -0.8}});
  const IndexSet q = compute_q(two, bh, 0.5);
  CHECK_EQ(q.size(), std::size_t{2});
  CHECK(q.contains(bh.eval(i1) - 1));
  CHECK(q.contains(bh.eval(i2) - 1));
}

// At most floor((8 sqrt(2) / eps)^p) buckets can carry l2 mass >= eps/(8 sqrt 2).
void test_heavy_bucket_count_bound() {
  const RngStream stream = RngStream::from_seed(31);
  const double eps = 0.25;
  for (const double p : {1.0, 2.0}) {
    const double bound = std::floor(std::pow(8.0 * std::sqrt(2.0) / eps, p));
    for (unsigned rep = 0; rep < 20; ++rep) {
      const SparseVector x = gen_random_unit(4096, 60, p, stream.child("x", rep));
      SequentialDraw draw{stream.child("bh", rep)};
      const PairwiseHash bh = PairwiseHash::draw(draw, 256);
      std::vector<double> mass(256, 0.0);
      for (const auto& e : x.entries()) mass[bh.eval(e.index) - 1] += e.value * e.value;
      std::uint64_t heavy = 0;
      const double threshold = eps / (8.0 * std::sqrt(2.0));
      for (const double s : mass)
        if (std::sqrt(s) >= threshold) ++heavy;
      CHECK(static_cast<double>(heavy) <= bound);
    }
  }
}

void test_count_sketch_estimate() {
  const std::uint64_t m = 64;
  const std::uint64_t j = 20;
  // Single spike, trivial hashing: exact recovery in every repetition.
  MeasurementOracle oracle{SparseVector::from_entries(m, {{j, -0.3}})};
  const SelectParams params{5, 16, 1, m};
  const SketchState state =
      build_sketch(oracle, PairwiseHash::identity(m), params, RngStream::from_seed(41));
  CHECK(count_sketch_estimate(state, j) == -0.3);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (i != j) CHECK(count_sketch_estimate(state, i) == 0.0);
  }

  // Requires trivial hashing.
  MeasurementOracle o2{SparseVector(m)};
  SequentialDraw draw{RngStream::from_seed(42).child("bh", 0)};
  const PairwiseHash bh = PairwiseHash::draw(draw, m);
  const SketchState s2 = build_sketch(o2, bh, params, RngStream::from_seed(43));
  CHECK_THROWS(count_sketch_estimate(s2, 0));
}

// E[sigma_{r,i} hat(Y)_{r,i}] = x_i: the estimator is unbiased.
void test_count_sketch_unbiased() {
  const std::uint64_t m = 32;
  const std::uint64_t target = 5;
  std::vector<SparseVector::Entry> entries;
  for (std::uint64_t i = 0; i < m; ++i)
    entries.push_back({i, i == target ? 0.5 : 0.05 * ((i % 3) + 1)});
  const SparseVector x = SparseVector::from_entries(m, std::move(entries));
  const double truth = x.value_at(target);

  const RngStream stream = RngStream::from_seed(47);
  const std::uint64_t n = 10000;
  long double sum = 0.0L;
  long double sumsq = 0.0L;
  for (std::uint64_t t = 0; t < n; ++t) {
    MeasurementOracle oracle(x);
    const SelectParams params{1, 4, 1, m};
    const SketchState state =
        build_sketch(oracle, PairwiseHash::identity(m), params, stream.child("sk", t));
    // R = 1: the median is the single signed estimate.
    const double est = count_sketch_estimate(state, target);
    sum += est;
    sumsq += est * est;
  }
  const double mean = static_cast<double>(sum / n);
  const double var = static_cast<double>(sumsq / n) - mean * mean;
  const double sigma3 = 3.0 * std::sqrt(std::max(var, 1e-12) / static_cast<double>(n));
  CHECK_MSG(std::fabs(mean - truth) <= sigma3,
            "mean=" + std::to_string(mean) + " truth=" + std::to_string(truth));
}

}  // namespace

int main() {
  RUN(test_build_sketch_zero_vector);
  RUN(test_build_sketch_single_group);
  RUN(test_build_sketch_single_spike);
  RUN(test_bucket_score_median);
  RUN(test_top_k_by_score_examples);
  RUN(test_select_top_k_matches_bruteforce);
  RUN(test_score_sign_symmetry);
  RUN(test_compute_q_examples);
  RUN(test_heavy_bucket_count_bound);
  RUN(test_count_sketch_unbiased);
  RUN(test_count_sketch_estimate);
  return testutil::summary();
}
