#include "uapprox/trials.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "uapprox/generators.hpp"
#include "uapprox/oracle.hpp"
#include "uapprox/spot.hpp"

namespace uapprox {

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

struct TrialSample {
  double err = 0.0;
  CostLedger ledger;
  bool trivial = false;
};

// Runs body(t) for t in [0, n) on a worker pool; samples land in
// per-trial slots so reductions are order-independent of scheduling.
template <class Body>
void parallel_trials(std::uint64_t n, unsigned threads, const Body& body) {
  if (threads <= 1 || n <= 1) {
    for (std::uint64_t t = 0; t < n; ++t) body(t);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= n) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

CounterStats reduce_counter(const std::vector<TrialSample>& samples,
                            std::uint64_t CostLedger::*member) {
  CounterStats stats;
  if (samples.empty()) return stats;
  stats.min = std::numeric_limits<std::uint64_t>::max();
  long double sum = 0.0L;
  for (const TrialSample& s : samples) {
    const std::uint64_t v = s.ledger.*member;
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
    sum += v;
  }
  stats.mean = static_cast<double>(sum / samples.size());
  return stats;
}

CounterStats reduce_total(const std::vector<TrialSample>& samples) {
  CounterStats stats;
  if (samples.empty()) return stats;
  stats.min = std::numeric_limits<std::uint64_t>::max();
  long double sum = 0.0L;
  for (const TrialSample& s : samples) {
    const std::uint64_t v = s.ledger.total();
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
    sum += v;
  }
  stats.mean = static_cast<double>(sum / samples.size());
  return stats;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TrialReport run_trials(const TrialConfig& config) {
  if (config.n_trials == 0) throw std::invalid_argument("run_trials: N must be >= 1");
  if (!config.make_instance) throw std::invalid_argument("run_trials: missing generator");

  const RngStream master = RngStream::from_seed(config.master_seed);
  const SparseVector instance = config.make_instance(master.child("instance", 0));
  const AlgoParams params =
      derive_params(config.p, config.eps, config.delta, instance.dim(), config.variant);

  std::vector<TrialSample> samples(config.n_trials);
  parallel_trials(config.n_trials, resolve_threads(config.threads), [&](std::uint64_t t) {
    MeasurementOracle oracle(instance);
    const ApproxOutput out =
        approximate(oracle, params, master.child("trial", t), config.mode);
    samples[t].err = linf_dist(out.approximation, instance);
    samples[t].ledger = out.ledger;
    samples[t].trivial = out.trivial_branch;
  });

  TrialReport report;
  long double err_sum = 0.0L;
  for (const TrialSample& s : samples) {
    // Strict exceedance: an error of exactly eps counts as success.
    if (s.err > config.eps) {
      ++report.failures;
    } else {
      ++report.successes;
    }
    err_sum += s.err;
    report.max_err = std::max(report.max_err, s.err);
    if (s.trivial) ++report.trivial_branch_runs;
  }
  const double n = static_cast<double>(config.n_trials);
  report.failure_rate = static_cast<double>(report.failures) / n;
  report.sigma3_nominal = 3.0 * std::sqrt(config.delta * (1.0 - config.delta) / n);
  report.sigma3_empirical =
      3.0 * std::sqrt(report.failure_rate * (1.0 - report.failure_rate) / n);
  report.mean_err = static_cast<double>(err_sum / config.n_trials);
  report.n1 = reduce_counter(samples, &CostLedger::n1);
  report.n2 = reduce_counter(samples, &CostLedger::n2);
  report.n3 = reduce_counter(samples, &CostLedger::n3);
  report.total = reduce_total(samples);
  return report;
}

std::vector<SweepRow> sweep_cost(double p, double eps, double delta,
                                 const std::vector<std::uint64_t>& ms,
                                 std::uint64_t n_trials, std::uint64_t support,
                                 std::uint64_t master_seed, CandidateMode mode,
                                 Variant variant, unsigned threads) {
  std::vector<SweepRow> rows;
  rows.reserve(ms.size());
  for (const std::uint64_t m : ms) {
    SweepRow row;
    row.m = m;
    const AlgoParams params = derive_params(p, eps, delta, m, variant);
    row.kstar_value = kstar(m);
    const PredictedCost pred = predicted_cost(params, m);
    row.n1_pred = pred.n1;
    row.n2_max = pred.n2_max;
    row.n3_max = pred.n3_max;
    if (n_trials > 0) {
      try {
        // Probe the shrink schedule up front; extreme m overflows it.
        if (params.buckets < m) dk_schedule(params.alpha, row.kstar_value);
        TrialConfig config;
        const std::uint64_t s = std::min<std::uint64_t>(support, m / 2 > 0 ? m / 2 : 1);
        config.make_instance = [m, s, p](const RngStream& stream) {
          return gen_random_unit(m, s, p, stream);
        };
        config.p = p;
        config.eps = eps;
        config.delta = delta;
        config.n_trials = n_trials;
        config.master_seed = master_seed + m;
        config.mode = mode;
        config.variant = variant;
        config.threads = threads;
        const TrialReport report = run_trials(config);
        row.measured = true;
        row.n1_mean = report.n1.mean;
        row.n2_mean = report.n2.mean;
        row.n3_mean = report.n3.mean;
        row.total_mean = report.total.mean;
      } catch (const std::overflow_error& e) {
        row.note = e.what();
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "m,kstar,n1_pred,n2_max,n3_max,n1_mean,n2_mean,n3_mean,total_mean,note\n";
  for (const SweepRow& r : rows) {
    out << r.m << ',' << r.kstar_value << ',' << r.n1_pred << ',' << r.n2_max << ','
        << r.n3_max << ',';
    if (r.measured) {
      out << format_double(r.n1_mean) << ',' << format_double(r.n2_mean) << ','
          << format_double(r.n3_mean) << ',' << format_double(r.total_mean);
    } else {
      out << ",,,";
    }
    out << ',' << r.note << '\n';
  }
}

BaselineReport baseline_compare(const TrialConfig& config) {
  if (config.n_trials == 0) throw std::invalid_argument("baseline_compare: N must be >= 1");
  const RngStream master = RngStream::from_seed(config.master_seed);
  const SparseVector instance = config.make_instance(master.child("instance", 0));
  const std::uint64_t m = instance.dim();
  if (m > (1ULL << 22))
    throw std::invalid_argument("baseline_compare: trivial hashing needs m <= 2^22");
  const AlgoParams params =
      derive_params(config.p, config.eps, config.delta, m, config.variant);

  std::vector<BaselineRow> rows(config.n_trials);
  parallel_trials(config.n_trials, resolve_threads(config.threads), [&](std::uint64_t t) {
    BaselineRow row;
    row.trial = t;

    MeasurementOracle adaptive_oracle(instance);
    const ApproxOutput out =
        approximate(adaptive_oracle, params, master.child("trial", t), config.mode);
    row.adaptive_err = linf_dist(out.approximation, instance);
    row.adaptive_total = out.ledger.total();

    // Matched budget: same group count, repetitions filled up to the
    // adaptive total (kept odd for the median).
    SelectParams sp;
    sp.groups = params.groups;
    std::uint64_t reps = row.adaptive_total / sp.groups;
    if (reps == 0) reps = 1;
    if (reps % 2 == 0) --reps;
    sp.repetitions = reps;
    sp.buckets = m;
    sp.top_k = 1;
    MeasurementOracle baseline_oracle(instance);
    const SketchState state =
        build_sketch(baseline_oracle, PairwiseHash::identity(m), sp,
                     master.child("baseline", t));
    double err = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      const double est = count_sketch_estimate(state, i);
      err = std::max(err, std::fabs(est - instance.value_at(i)));
    }
    row.baseline_err = err;
    row.baseline_total = baseline_oracle.cost_report().total();
    rows[t] = row;
  });

  BaselineReport report;
  report.rows = std::move(rows);
  long double a_sum = 0.0L, b_sum = 0.0L;
  for (const BaselineRow& r : report.rows) {
    a_sum += r.adaptive_err;
    b_sum += r.baseline_err;
    report.adaptive_max_err = std::max(report.adaptive_max_err, r.adaptive_err);
    report.baseline_max_err = std::max(report.baseline_max_err, r.baseline_err);
  }
  report.adaptive_mean_err = static_cast<double>(a_sum / report.rows.size());
  report.baseline_mean_err = static_cast<double>(b_sum / report.rows.size());
  return report;
}

void write_baseline_csv(std::ostream& out, const BaselineReport& report) {
  out << "trial,adaptive_err,baseline_err,adaptive_total,baseline_total\n";
  for (const BaselineRow& r : report.rows) {
    out << r.trial << ',' << format_double(r.adaptive_err) << ','
        << format_double(r.baseline_err) << ',' << r.adaptive_total << ','
        << r.baseline_total << '\n';
  }
}

void write_trial_report(std::ostream& out, const TrialReport& report) {
  out << "successes=" << report.successes << "\n"
      << "failures=" << report.failures << "\n"
      << "failure_rate=" << format_double(report.failure_rate) << "\n"
      << "sigma3_nominal=" << format_double(report.sigma3_nominal) << "\n"
      << "sigma3_empirical=" << format_double(report.sigma3_empirical) << "\n"
      << "mean_err=" << format_double(report.mean_err) << "\n"
      << "max_err=" << format_double(report.max_err) << "\n"
      << "n1_min=" << report.n1.min << " n1_mean=" << format_double(report.n1.mean)
      << " n1_max=" << report.n1.max << "\n"
      << "n2_min=" << report.n2.min << " n2_mean=" << format_double(report.n2.mean)
      << " n2_max=" << report.n2.max << "\n"
      << "n3_min=" << report.n3.min << " n3_mean=" << format_double(report.n3.mean)
      << " n3_max=" << report.n3.max << "\n"
      << "total_min=" << report.total.min
      << " total_mean=" << format_double(report.total.mean)
      << " total_max=" << report.total.max << "\n"
      << "trivial_branch_runs=" << report.trivial_branch_runs << "\n";
}

}  // namespace uapprox
