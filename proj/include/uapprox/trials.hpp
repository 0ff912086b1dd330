#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uapprox/pipeline.hpp"
#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// One Monte Carlo experiment: a fixed instance (drawn once from the
// instance stream), N independent pipeline runs over independent seed
// paths, failure meaning strict error exceedance ||z - x||_inf > eps.
struct TrialConfig {
  std::function<SparseVector(const RngStream&)> make_instance;
  double p = 1.0;
  double eps = 0.25;
  double delta = 0.25;
  std::uint64_t n_trials = 100;
  std::uint64_t master_seed = 1;
  CandidateMode mode = CandidateMode::kImplicit;
  Variant variant = Variant::kPairwise;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CounterStats {
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  double mean = 0.0;
};

struct TrialReport {
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  double failure_rate = 0.0;
  double sigma3_nominal = 0.0;    // 3 sqrt(delta (1-delta) / N)
  double sigma3_empirical = 0.0;  // 3 sqrt(rate (1-rate) / N)
  double mean_err = 0.0;
  double max_err = 0.0;
  CounterStats n1, n2, n3, total;
  std::uint64_t trivial_branch_runs = 0;
};

TrialReport run_trials(const TrialConfig& config);

// Cost sweep over domain sizes. Predicted columns come from the closed
// forms; measured columns are filled when n_trials > 0 and the instance
// is runnable (the shrink schedule can overflow for extreme m).
struct SweepRow {
  std::uint64_t m = 0;
  unsigned kstar_value = 0;
  std::uint64_t n1_pred = 0;
  std::uint64_t n2_max = 0;
  std::uint64_t n3_max = 0;
  bool measured = false;
  double n1_mean = 0.0;
  double n2_mean = 0.0;
  double n3_mean = 0.0;
  double total_mean = 0.0;
  std::string note;
};

std::vector<SweepRow> sweep_cost(double p, double eps, double delta,
                                 const std::vector<std::uint64_t>& ms,
                                 std::uint64_t n_trials, std::uint64_t support,
                                 std::uint64_t master_seed, CandidateMode mode,
                                 Variant variant, unsigned threads);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Adaptive pipeline vs. the non-adaptive count-sketch estimator at a
// matched measurement budget, on a fixed instance under trivial hashing.
struct BaselineRow {
  std::uint64_t trial = 0;
  double adaptive_err = 0.0;
  double baseline_err = 0.0;
  std::uint64_t adaptive_total = 0;
  std::uint64_t baseline_total = 0;
};

struct BaselineReport {
  std::vector<BaselineRow> rows;
  double adaptive_mean_err = 0.0;
  double baseline_mean_err = 0.0;
  double adaptive_max_err = 0.0;
  double baseline_max_err = 0.0;
};

BaselineReport baseline_compare(const TrialConfig& config);

void write_baseline_csv(std::ostream& out, const BaselineReport& report);

void write_trial_report(std::ostream& out, const TrialReport& report);

}  // namespace uapprox
