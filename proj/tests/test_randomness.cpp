#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "uapprox/hash.hpp"
#include "uapprox/rng.hpp"
#include "test_util.hpp"

using namespace uapprox;

namespace {

void test_stream_determinism() {
  const RngStream a = RngStream::from_seed(123).child("stage1", 7);
  const RngStream b = RngStream::from_seed(123).child("stage1", 7);
  for (std::uint64_t i = 0; i < 1000; ++i) CHECK(a.word(i) == b.word(i));
}

void test_stream_distinctness() {
  // Distinct counters and distinct labels give streams differing in their
  // first word; 10^4 derivations collide with probability ~2^-50.
  const RngStream base = RngStream::from_seed(99);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t c = 0; c < 10000; ++c) firsts.insert(base.child("stage1", c).word(0));
  CHECK_EQ(firsts.size(), std::size_t{10000});
  CHECK(base.child("stage1", 3).word(0) != base.child("stage2", 3).word(0));
}

void test_hash_eval_formula() {
  // 1 + ((3*11 + 5) mod P mod 4) = 1 + (38 mod 4) = 3.
  const PairwiseHash h(3, 5, 4);
  CHECK_EQ(h.eval(10), std::uint64_t{3});
  // Degenerate coefficients map everything to 1.
  const PairwiseHash degenerate(0, 0, 16);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK_EQ(degenerate.eval(i), std::uint64_t{1});
  // D = 1 is constant regardless of coefficients.
  const PairwiseHash one(123456, 789, 1);
  CHECK_EQ(one.eval(0), std::uint64_t{1});
  CHECK_EQ(one.eval(1ULL << 40), std::uint64_t{1});
  CHECK_THROWS(PairwiseHash(1, 2, 0));
}

void test_hash_purity() {
  SequentialDraw draw{RngStream::from_seed(5).child("h", 0)};
  const PairwiseHash h = PairwiseHash::draw(draw, 97);
  const std::uint64_t v = h.eval(123456789);
  for (int rep = 0; rep < 1000; ++rep) CHECK_EQ(h.eval(123456789), v);
}

void test_trivial_hash() {
  const PairwiseHash t = PairwiseHash::identity(5);
  CHECK_EQ(t.eval(2), std::uint64_t{3});
  CHECK_EQ(t.eval(0), std::uint64_t{1});
  CHECK_EQ(t.eval(4), std::uint64_t{5});
  const PairwiseHash t1 = PairwiseHash::identity(1);
  CHECK_EQ(t1.eval(0), std::uint64_t{1});
}

// Pr(H_i = H_j) for i != j should match 1/D within Monte Carlo error.
void test_collision_probability() {
  const RngStream stream = RngStream::from_seed(2024);
  const std::uint64_t d_grid[] = {2, 16, 1024};
  for (const std::uint64_t d : d_grid) {
    const std::uint64_t n = 1000000;
    std::uint64_t collisions = 0;
    SequentialDraw draw{stream.child("hash", d)};
    for (std::uint64_t t = 0; t < n; ++t) {
      const PairwiseHash h = PairwiseHash::draw(draw, d);
      if (h.eval(17) == h.eval(911)) ++collisions;
    }
    const double rate = static_cast<double>(collisions) / static_cast<double>(n);
    const double expect = 1.0 / static_cast<double>(d);
    // 5% relative window, comfortably above 3 sigma at 10^6 samples.
    CHECK_MSG(std::fabs(rate - expect) <= 0.05 * expect,
              "D=" + std::to_string(d) + " rate=" + std::to_string(rate));
  }
}

// Marginal distribution of H_i is uniform (chi^2 test at the 0.001 level).
void test_marginal_uniformity() {
  const std::uint64_t d = 8;
  const std::uint64_t n = 100000;
  std::vector<std::uint64_t> counts(d, 0);
  SequentialDraw draw{RngStream::from_seed(31).child("hash", 0)};
  for (std::uint64_t t = 0; t < n; ++t) {
    const PairwiseHash h = PairwiseHash::draw(draw, d);
    ++counts[h.eval(42) - 1];
  }
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / static_cast<double>(d);
  for (const std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expect;
    chi2 += diff * diff / expect;
  }
  // chi^2 with 7 degrees of freedom: P(chi2 > 24.32) = 0.001.
  CHECK_MSG(chi2 < 24.32, "chi2=" + std::to_string(chi2));
}

void test_rademacher_determinism_and_stats() {
  const RademacherStream s(RngStream::from_seed(404).child("sigma", 0));
  for (std::uint64_t i = 0; i < 100; ++i) {
    const int v = s.sign(i);
    CHECK(v == 1 || v == -1);
    CHECK_EQ(s.sign(i), v);
  }
  const std::uint64_t n = 100000;
  long long sum = 0;
  long long corr = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    sum += s.sign(i);
    corr += s.sign(2 * i) * s.sign(2 * i + 1);
  }
  // 3 sigma for a sum of n signs is 3 sqrt(n).
  const double bound = 3.0 * std::sqrt(static_cast<double>(n));
  CHECK_MSG(std::fabs(static_cast<double>(sum)) <= bound, "mean drift " + std::to_string(sum));
  CHECK_MSG(std::fabs(static_cast<double>(corr)) <= bound, "pair corr " + std::to_string(corr));
}

void test_mod_mersenne61() {
  CHECK_EQ(mod_mersenne61(0), std::uint64_t{0});
  CHECK_EQ(mod_mersenne61(kMersenne61), std::uint64_t{0});
  CHECK_EQ(mod_mersenne61(kMersenne61 + 5), std::uint64_t{5});
  // Cross-check the large-product path against __int128 division.
  const RngStream stream = RngStream::from_seed(8);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const std::uint64_t a = stream.word(3 * t) & kMersenne61;
    const std::uint64_t b = stream.word(3 * t + 1);
    const unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    CHECK(mod_mersenne61(x) == static_cast<std::uint64_t>(x % kMersenne61));
  }
}

void test_fastmod_matches_modulo() {
  const RngStream stream = RngStream::from_seed(9);
  for (const std::uint64_t d : {2ULL, 3ULL, 7ULL, 180ULL, 65536ULL, 4294967295ULL}) {
    const FastMod fm(d);
    for (std::uint64_t t = 0; t < 2000; ++t) {
      const std::uint64_t n = stream.word(t * 7 + d);
      CHECK(fm.mod(n) == n % d);
    }
  }
}

}  // namespace

int main() {
  RUN(test_stream_determinism);
  RUN(test_stream_distinctness);
  RUN(test_hash_eval_formula);
  RUN(test_hash_purity);
  RUN(test_trivial_hash);
  RUN(test_collision_probability);
  RUN(test_marginal_uniformity);
  RUN(test_rademacher_determinism_and_stats);
  RUN(test_mod_mersenne61);
  RUN(test_fastmod_matches_modulo);
  return testutil::summary();
}
