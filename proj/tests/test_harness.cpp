#include <cmath>
#include <sstream>

#include "uapprox/generators.hpp"
#include "uapprox/trials.hpp"
#include "uapprox/vector_io.hpp"
#include "test_util.hpp"

using namespace uapprox;

namespace {

void test_gen_hash_adversary() {
  // p = 1, alpha*D = 4: four entries of value 1/4.
  const SparseVector a = gen_hash_adversary(100, 0.1, 40, 1.0, 50);
  CHECK_EQ(a.support_size(), std::size_t{4});
  for (const auto& e : a.entries()) CHECK(e.value == 0.25);
  CHECK_NEAR(lp_norm(a, 1.0), 1.0, 1e-12);

  // p = 2, alpha*D = 4: four entries of value 1/2.
  const SparseVector b = gen_hash_adversary(100, 0.1, 40, 2.0, 50);
  for (const auto& e : b.entries()) CHECK(e.value == 0.5);
  CHECK_NEAR(lp_norm(b, 2.0), 1.0, 1e-12);

  // r = 1: a single entry of value 1; x_j included when requested.
  const SparseVector c = gen_hash_adversary(100, 0.001, 1000, 1.0, 0, 0.5);
  CHECK_EQ(c.support_size(), std::size_t{2});
  CHECK(c.value_at(0) == 0.5);
  CHECK(c.value_at(1) == 1.0);

  CHECK_THROWS(gen_hash_adversary(100, 0.0001, 100, 1.0, 0));  // r = 0
  CHECK_THROWS(gen_hash_adversary(3, 0.1, 40, 1.0, 0));        // r + 1 > m
}

void test_gen_two_level() {
  // p = 1, k1 = 2, gamma = 2: two entries of 1/4 and four entries of 1/8.
  const SparseVector x = gen_two_level(100, 2, 2.0, 1.0);
  CHECK_EQ(x.support_size(), std::size_t{6});
  CHECK(x.value_at(0) == 0.25 && x.value_at(1) == 0.25);
  for (std::uint64_t i = 2; i < 6; ++i) CHECK(x.value_at(i) == 0.125);
  CHECK(lp_norm(x, 1.0) <= 1.0 + 1e-12);

  // k2 grows like (gamma/2)^p.
  const SparseVector y = gen_two_level(10000, 2, 8.0, 1.0);
  CHECK_EQ(y.support_size(), std::size_t{2 + 16});
  for (const double p : {1.0, 1.5, 2.0}) {
    for (const double g : {2.0, 4.0, 16.0}) {
      const SparseVector z = gen_two_level(1 << 20, 3, g, p);
      CHECK(lp_norm(z, p) <= 1.0 + 1e-12);
    }
  }
  CHECK_THROWS(gen_two_level(4, 2, 8.0, 1.0));  // capacity exceeded
}

void test_gen_dense_tail() {
  // k1 = 1, m = 4, p = 4: one entry 2^(-1/4), three entries 8^(-1/4).
  const SparseVector x = gen_dense_tail(4, 1, 4.0);
  CHECK_EQ(x.support_size(), std::size_t{4});
  CHECK(x.value_at(0) == std::pow(2.0, -0.25));
  for (std::uint64_t i = 1; i < 4; ++i) CHECK(x.value_at(i) == std::pow(8.0, -0.25));
  // ||x||_p^p = 1/2 + (m-k1)/(2m) <= 1.
  const double norm_p = std::pow(lp_norm(x, 4.0), 4.0);
  CHECK_NEAR(norm_p, 0.5 + 3.0 / 8.0, 1e-12);
  CHECK_THROWS(gen_dense_tail(4, 4, 2.0));          // k1 = m degenerate
  CHECK_THROWS(gen_dense_tail(1ULL << 21, 1, 2.0));  // m too large
}

void test_gen_random_unit() {
  const RngStream stream = RngStream::from_seed(1234).child("g", 0);
  const SparseVector x = gen_random_unit(10000, 50, 1.5, stream);
  CHECK_EQ(x.support_size(), std::size_t{50});
  CHECK_NEAR(lp_norm(x, 1.5), 1.0, 1e-12);
  // Determinism.
  const SparseVector y = gen_random_unit(10000, 50, 1.5, stream);
  CHECK(x == y);
  // s = 1: a single +-1 entry.
  const SparseVector z = gen_random_unit(100, 1, 2.0, stream.child("one", 0));
  CHECK_EQ(z.support_size(), std::size_t{1});
  CHECK(std::fabs(z.entries()[0].value) == 1.0);
}

void test_generator_norm_invariant() {
  const RngStream stream = RngStream::from_seed(777);
  for (unsigned rep = 0; rep < 30; ++rep) {
    for (const double p : {1.0, 2.0}) {
      CHECK(lp_norm(gen_random_unit(5000, 64, p, stream.child("r", rep)), p) <=
            1.0 + 1e-12);
      CHECK(lp_norm(gen_two_level(5000, 1 + rep % 3, 4.0, p), p) <= 1.0 + 1e-12);
    }
  }
}

void test_run_trials_zero_vector() {
  TrialConfig config;
  config.make_instance = [](const RngStream&) { return SparseVector(1 << 12); };
  config.p = 1.0;
  config.eps = 0.25;
  config.delta = 0.25;
  config.n_trials = 20;
  config.master_seed = 5;
  const TrialReport report = run_trials(config);
  CHECK_EQ(report.failures, std::uint64_t{0});
  CHECK(report.failure_rate == 0.0);
  CHECK(report.max_err == 0.0);
}

void test_run_trials_single() {
  TrialConfig config;
  config.make_instance = [](const RngStream&) { return gen_basis(1 << 12, 100); };
  config.n_trials = 1;
  config.master_seed = 6;
  const TrialReport report = run_trials(config);
  CHECK_EQ(report.successes + report.failures, std::uint64_t{1});
  // A single sample: min == max on every counter.
  CHECK_EQ(report.n1.min, report.n1.max);
  CHECK(report.n1.mean == static_cast<double>(report.n1.min));
}

void test_run_trials_basis_rate() {
  TrialConfig config;
  config.make_instance = [](const RngStream&) { return gen_basis(1 << 14, 9000); };
  config.p = 1.0;
  config.eps = 0.5;
  config.delta = 0.25;
  config.n_trials = 500;
  config.master_seed = 7;
  const TrialReport report = run_trials(config);
  CHECK(report.failure_rate <= 0.25 + report.sigma3_nominal);
}

void test_run_trials_reproducible() {
  TrialConfig config;
  config.make_instance = [](const RngStream& s) {
    return gen_random_unit(1 << 12, 30, 1.0, s);
  };
  config.n_trials = 50;
  config.master_seed = 11;
  config.threads = 1;
  const TrialReport a = run_trials(config);
  config.threads = 4;
  const TrialReport b = run_trials(config);
  CHECK(a.failure_rate == b.failure_rate);
  CHECK(a.mean_err == b.mean_err);
  CHECK(a.max_err == b.max_err);
  CHECK_EQ(a.total.max, b.total.max);
}

void test_sweep_rows() {
  const std::vector<std::uint64_t> ms = {1ULL << 16, 1ULL << 32, 1ULL << 48, ~0ULL};
  const auto rows = sweep_cost(1.0, 0.25, 0.25, ms, 0, 50, 3, CandidateMode::kImplicit,
                               Variant::kPairwise, 0);
  CHECK_EQ(rows.size(), std::size_t{4});
  CHECK_EQ(rows[0].kstar_value, 6u);
  CHECK_EQ(rows[1].kstar_value, 12u);
  CHECK_EQ(rows[2].kstar_value, 16u);
  CHECK_EQ(rows[3].kstar_value, 18u);
  for (const auto& row : rows) {
    // n1 depends only on (eps, delta).
    CHECK_EQ(row.n1_pred, rows[0].n1_pred);
    CHECK_EQ(row.n2_max, row.n3_max * (2 * row.kstar_value + 2));
    CHECK(!row.measured);
  }

  // Measured run on a small instance fills the mean columns.
  const auto measured = sweep_cost(1.0, 0.25, 0.25, {1ULL << 12}, 3, 10, 3,
                                   CandidateMode::kImplicit, Variant::kPairwise, 0);
  CHECK(measured[0].measured);
  CHECK(measured[0].n1_mean == static_cast<double>(measured[0].n1_pred));
}

void test_sweep_csv_schema() {
  const auto rows = sweep_cost(1.0, 0.25, 0.25, {1ULL << 16}, 0, 50, 3,
                               CandidateMode::kImplicit, Variant::kPairwise, 0);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind("m,kstar,n1_pred,n2_max,n3_max,n1_mean,n2_mean,n3_mean,total_mean,note\n",
                   0) == 0);
  // Exactly one header plus one row.
  std::size_t newlines = 0;
  for (const char c : text)
    if (c == '\n') ++newlines;
  CHECK_EQ(newlines, std::size_t{2});
}

void test_baseline_compare() {
  TrialConfig config;
  const std::uint64_t m = 1 << 12;
  config.make_instance = [m](const RngStream&) { return gen_two_level(m, 1, 16.0, 1.0); };
  config.p = 1.0;
  config.eps = 0.25;
  config.delta = 0.25;
  config.n_trials = 40;
  config.master_seed = 13;
  const BaselineReport report = baseline_compare(config);
  CHECK_EQ(report.rows.size(), std::size_t{40});
  for (const auto& row : report.rows) {
    CHECK(row.baseline_total <= row.adaptive_total);
  }
  // Qualitative direction: exact queries on the selected set beat the
  // noisy full-vector estimate at the same budget.
  CHECK(report.adaptive_mean_err <= report.baseline_mean_err);

  std::ostringstream out;
  write_baseline_csv(out, report);
  CHECK(out.str().rfind("trial,adaptive_err,baseline_err,adaptive_total,baseline_total\n",
                        0) == 0);
}

void test_vector_io_roundtrip() {
  const SparseVector x =
      SparseVector::from_entries(1000, {{0, 0.125}, {999, -3.5}, {17, 1e-9}});
  std::stringstream buffer;
  write_vector(buffer, x, 1.5);
  const VectorFile file = read_vector(buffer);
  CHECK(file.p == 1.5);
  CHECK(file.vector == x);

  // 1-based indices on disk.
  std::stringstream manual("m 4 p 2\n1 0.5\n4 -1\n");
  const VectorFile parsed = read_vector(manual);
  CHECK(parsed.vector.value_at(0) == 0.5);
  CHECK(parsed.vector.value_at(3) == -1.0);

  std::stringstream dup("m 4 p 2\n1 0.5\n1 0.25\n");
  CHECK_THROWS(read_vector(dup));
  std::stringstream oob("m 4 p 2\n5 0.5\n");
  CHECK_THROWS(read_vector(oob));
  std::stringstream zero_idx("m 4 p 2\n0 0.5\n");
  CHECK_THROWS(read_vector(zero_idx));
  std::stringstream bad_header("n 4 q 2\n");
  CHECK_THROWS(read_vector(bad_header));
}

}  // namespace

int main() {
  RUN(test_gen_hash_adversary);
  RUN(test_gen_two_level);
  RUN(test_gen_dense_tail);
  RUN(test_gen_random_unit);
  RUN(test_generator_norm_invariant);
  RUN(test_run_trials_zero_vector);
  RUN(test_run_trials_single);
  RUN(test_run_trials_basis_rate);
  RUN(test_run_trials_reproducible);
  RUN(test_sweep_rows);
  RUN(test_sweep_csv_schema);
  RUN(test_baseline_compare);
  RUN(test_vector_io_roundtrip);
  return testutil::summary();
}
