// Command-line harness: parameter inspection, single runs on vector files,
// Monte Carlo trials, cost sweeps, count-sketch baseline comparison, and
// instance generation.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uapprox/generators.hpp"
#include "uapprox/oracle.hpp"
#include "uapprox/pipeline.hpp"
#include "uapprox/rng.hpp"
#include "uapprox/spot.hpp"
#include "uapprox/trials.hpp"
#include "uapprox/vector_io.hpp"

namespace {

using namespace uapprox;

struct GeneratorOptions {
  std::string name = "random-unit";
  std::uint64_t j = 0;
  bool j_set = false;
  std::uint64_t s = 50;
  std::uint64_t k1 = 1;
  double gamma = 8.0;
  double adv_alpha = 0.1;
  std::uint64_t adv_d = 1000;
  double xj = 0.0;
  double noise_l2 = 0.0;
  std::uint64_t noise_support = 64;
};

void add_generator_flags(CLI::App* cmd, GeneratorOptions& g) {
  cmd->add_option("--generator", g.name,
                  "basis|two-level|random-unit|hash-adversary|dense-tail|heavy-hitter")
      ->capture_default_str();
  cmd->add_option("--j", g.j, "spike index (0-based) for basis/hash-adversary/heavy-hitter")
      ->each([&g](const std::string&) { g.j_set = true; });
  cmd->add_option("--s", g.s, "support size for random-unit")->capture_default_str();
  cmd->add_option("--k1", g.k1, "spike count for two-level/dense-tail")
      ->capture_default_str();
  cmd->add_option("--gen-gamma", g.gamma, "level ratio for two-level")
      ->capture_default_str();
  cmd->add_option("--adv-alpha", g.adv_alpha, "alpha for hash-adversary")
      ->capture_default_str();
  cmd->add_option("--adv-d", g.adv_d, "D for hash-adversary")->capture_default_str();
  cmd->add_option("--xj", g.xj, "heavy entry value for hash-adversary")
      ->capture_default_str();
  cmd->add_option("--noise-l2", g.noise_l2, "noise l2 mass for heavy-hitter")
      ->capture_default_str();
  cmd->add_option("--noise-support", g.noise_support, "noise support for heavy-hitter")
      ->capture_default_str();
}

std::function<SparseVector(const RngStream&)> make_generator(const GeneratorOptions& g,
                                                             std::uint64_t m, double p) {
  const std::uint64_t j = g.j_set ? g.j : m / 2;
  if (g.name == "basis") {
    return [m, j](const RngStream&) { return gen_basis(m, j); };
  }
  if (g.name == "two-level") {
    const std::uint64_t k1 = g.k1;
    const double gamma = g.gamma;
    return [m, k1, gamma, p](const RngStream&) { return gen_two_level(m, k1, gamma, p); };
  }
  if (g.name == "random-unit") {
    const std::uint64_t s = g.s;
    return [m, s, p](const RngStream& stream) { return gen_random_unit(m, s, p, stream); };
  }
  if (g.name == "hash-adversary") {
    const double alpha = g.adv_alpha;
    const std::uint64_t d = g.adv_d;
    const double xj = g.xj;
    return [m, alpha, d, p, j, xj](const RngStream&) {
      return gen_hash_adversary(m, alpha, d, p, j, xj);
    };
  }
  if (g.name == "dense-tail") {
    const std::uint64_t k1 = g.k1;
    return [m, k1, p](const RngStream&) { return gen_dense_tail(m, k1, p); };
  }
  if (g.name == "heavy-hitter") {
    const double noise = g.noise_l2;
    const std::uint64_t support = g.noise_support;
    return [m, j, noise, support](const RngStream&) {
      return gen_heavy_hitter(m, j, noise, support);
    };
  }
  throw CLI::ValidationError("--generator", "unknown generator: " + g.name);
}

CandidateMode parse_mode(const std::string& mode) {
  if (mode == "explicit") return CandidateMode::kExplicit;
  if (mode == "implicit") return CandidateMode::kImplicit;
  throw CLI::ValidationError("--mode", "must be explicit or implicit");
}

Variant parse_variant(const std::string& variant) {
  if (variant == "pairwise") return Variant::kPairwise;
  if (variant == "iid") return Variant::kIid;
  throw CLI::ValidationError("--variant", "must be pairwise or iid");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_params(const AlgoParams& params, std::uint64_t m) {
  const PredictedCost pred = predicted_cost(params, m);
  std::cout << "p=" << fmt(params.p) << "\n"
            << "eps=" << fmt(params.eps) << "\n"
            << "delta=" << fmt(params.delta) << "\n"
            << "m=" << m << "\n"
            << "variant=" << (params.variant == Variant::kPairwise ? "pairwise" : "iid")
            << "\n"
            << "k0=" << params.k0 << "\n"
            << "alpha=" << fmt(params.alpha) << "\n"
            << "gamma=" << fmt(params.gamma) << "\n"
            << "D=" << params.buckets << "\n"
            << "R=" << params.repetitions << "\n"
            << "k=" << params.top_k << "\n"
            << "G=" << params.groups << "\n"
            << "delta0=" << fmt(params.delta0) << "\n"
            << "delta1=" << fmt(params.delta1) << "\n"
            << "kstar=" << kstar(m) << "\n"
            << "n1_pred=" << pred.n1 << "\n"
            << "n2_max=" << pred.n2_max << "\n"
            << "n3_max=" << pred.n3_max << "\n"
            << "trivial_branch=" << (params.buckets >= m ? 1 : 0) << "\n";
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive randomized uniform approximation of vectors"};
  app.require_subcommand(1);

  double p = 1.0, eps = 0.25, delta = 0.25;
  std::uint64_t m = 1ULL << 20;
  std::uint64_t seed = 1;
  std::uint64_t n_trials = 100;
  std::string mode_name = "implicit";
  std::string variant_name = "pairwise";
  std::string out_path;
  unsigned threads = 0;
  GeneratorOptions gen_opts;

  // params
  auto* cmd_params = app.add_subcommand("params", "derive and print algorithm parameters");
  cmd_params->add_option("--p", p)->capture_default_str();
  cmd_params->add_option("--eps", eps)->capture_default_str();
  cmd_params->add_option("--delta", delta)->capture_default_str();
  cmd_params->add_option("--m", m)->capture_default_str();
  cmd_params->add_option("--variant", variant_name)->capture_default_str();

  // run
  std::string vector_path;
  auto* cmd_run = app.add_subcommand("run", "run the pipeline once on a vector file");
  cmd_run->add_option("--vector", vector_path, "input vector file")->required();
  cmd_run->add_option("--eps", eps)->capture_default_str();
  cmd_run->add_option("--delta", delta)->capture_default_str();
  cmd_run->add_option("--seed", seed)->capture_default_str();
  cmd_run->add_option("--mode", mode_name)->capture_default_str();
  cmd_run->add_option("--variant", variant_name)->capture_default_str();

  // trials
  auto* cmd_trials = app.add_subcommand("trials", "Monte Carlo failure-rate estimation");
  cmd_trials->add_option("--p", p)->capture_default_str();
  cmd_trials->add_option("--eps", eps)->capture_default_str();
  cmd_trials->add_option("--delta", delta)->capture_default_str();
  cmd_trials->add_option("--m", m)->capture_default_str();
  cmd_trials->add_option("--n-trials", n_trials)->capture_default_str();
  cmd_trials->add_option("--seed", seed)->capture_default_str();
  cmd_trials->add_option("--mode", mode_name)->capture_default_str();
  cmd_trials->add_option("--variant", variant_name)->capture_default_str();
  cmd_trials->add_option("--threads", threads)->capture_default_str();
  cmd_trials->add_option("--out", out_path, "CSV output path");
  add_generator_flags(cmd_trials, gen_opts);

  // sweep
  std::vector<std::uint64_t> m_list;
  auto* cmd_sweep = app.add_subcommand("sweep", "cost table over domain sizes");
  cmd_sweep->add_option("--p", p)->capture_default_str();
  cmd_sweep->add_option("--eps", eps)->capture_default_str();
  cmd_sweep->add_option("--delta", delta)->capture_default_str();
  cmd_sweep->add_option("--m", m_list, "domain sizes (repeatable)")->required();
  cmd_sweep->add_option("--n-trials", n_trials = 0)->capture_default_str();
  cmd_sweep->add_option("--s", gen_opts.s, "instance support for measured runs")
      ->capture_default_str();
  cmd_sweep->add_option("--seed", seed)->capture_default_str();
  cmd_sweep->add_option("--mode", mode_name)->capture_default_str();
  cmd_sweep->add_option("--variant", variant_name)->capture_default_str();
  cmd_sweep->add_option("--threads", threads)->capture_default_str();
  cmd_sweep->add_option("--out", out_path, "CSV output path");

  // baseline
  auto* cmd_baseline =
      app.add_subcommand("baseline", "adaptive vs count-sketch at matched budget");
  cmd_baseline->add_option("--p", p)->capture_default_str();
  cmd_baseline->add_option("--eps", eps)->capture_default_str();
  cmd_baseline->add_option("--delta", delta)->capture_default_str();
  cmd_baseline->add_option("--m", m)->capture_default_str();
  cmd_baseline->add_option("--n-trials", n_trials = 20)->capture_default_str();
  cmd_baseline->add_option("--seed", seed)->capture_default_str();
  cmd_baseline->add_option("--variant", variant_name)->capture_default_str();
  cmd_baseline->add_option("--threads", threads)->capture_default_str();
  cmd_baseline->add_option("--out", out_path, "CSV output path");
  add_generator_flags(cmd_baseline, gen_opts);

  // gen
  auto* cmd_gen = app.add_subcommand("gen", "write an instance to a vector file");
  cmd_gen->add_option("--p", p)->capture_default_str();
  cmd_gen->add_option("--m", m)->capture_default_str();
  cmd_gen->add_option("--seed", seed)->capture_default_str();
  cmd_gen->add_option("--out", out_path, "vector file path")->required();
  add_generator_flags(cmd_gen, gen_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_params->parsed()) {
      const AlgoParams params = derive_params(p, eps, delta, m, parse_variant(variant_name));
      print_params(params, m);
      return 0;
    }

    if (cmd_run->parsed()) {
      const VectorFile file = read_vector_file(vector_path);
      const AlgoParams params = derive_params(file.p, eps, delta, file.vector.dim(),
                                              parse_variant(variant_name));
      MeasurementOracle oracle(file.vector);
      const ApproxOutput out = approximate(oracle, params, RngStream::from_seed(seed),
                                           parse_mode(mode_name));
      std::cout << "K=";
      for (std::size_t i = 0; i < out.selected.size(); ++i) {
        if (i > 0) std::cout << ',';
        std::cout << out.selected[i] + 1;  // 1-based at the boundary
      }
      std::cout << "\n"
                << "linf_err=" << fmt(linf_dist(out.approximation, file.vector)) << "\n"
                << "trivial_branch=" << (out.trivial_branch ? 1 : 0) << "\n"
                << "n1,n2,n3,total\n"
                << out.ledger.n1 << ',' << out.ledger.n2 << ',' << out.ledger.n3 << ','
                << out.ledger.total() << "\n";
      return 0;
    }

    if (cmd_trials->parsed()) {
      TrialConfig config;
      config.make_instance = make_generator(gen_opts, m, p);
      config.p = p;
      config.eps = eps;
      config.delta = delta;
      config.n_trials = n_trials;
      config.master_seed = seed;
      config.mode = parse_mode(mode_name);
      config.variant = parse_variant(variant_name);
      config.threads = threads;
      const TrialReport report = run_trials(config);
      write_trial_report(std::cout, report);
      if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw std::runtime_error("cannot open output file: " + out_path);
        file << "successes,failures,failure_rate,sigma3_nominal,sigma3_empirical,"
                "mean_err,max_err,n1_mean,n2_mean,n3_mean,total_mean\n"
             << report.successes << ',' << report.failures << ','
             << fmt(report.failure_rate) << ',' << fmt(report.sigma3_nominal) << ','
             << fmt(report.sigma3_empirical) << ',' << fmt(report.mean_err) << ','
             << fmt(report.max_err) << ',' << fmt(report.n1.mean) << ','
             << fmt(report.n2.mean) << ',' << fmt(report.n3.mean) << ','
             << fmt(report.total.mean) << "\n";
      }
      return 0;
    }

    if (cmd_sweep->parsed()) {
      const std::vector<SweepRow> rows =
          sweep_cost(p, eps, delta, m_list, n_trials, gen_opts.s, seed,
                     parse_mode(mode_name), parse_variant(variant_name), threads);
      std::ofstream file;
      write_sweep_csv(open_or_stdout(file, out_path), rows);
      return 0;
    }

    if (cmd_baseline->parsed()) {
      TrialConfig config;
      config.make_instance = make_generator(gen_opts, m, p);
      config.p = p;
      config.eps = eps;
      config.delta = delta;
      config.n_trials = n_trials;
      config.master_seed = seed;
      config.mode = CandidateMode::kImplicit;
      config.variant = parse_variant(variant_name);
      config.threads = threads;
      const BaselineReport report = baseline_compare(config);
      std::ofstream file;
      write_baseline_csv(open_or_stdout(file, out_path), report);
      std::cerr << "adaptive_mean_err=" << fmt(report.adaptive_mean_err)
                << " baseline_mean_err=" << fmt(report.baseline_mean_err) << "\n";
      return 0;
    }

    if (cmd_gen->parsed()) {
      const auto generator = make_generator(gen_opts, m, p);
      const SparseVector x = generator(RngStream::from_seed(seed).child("instance", 0));
      write_vector_file(out_path, x, p);
      std::cerr << "wrote " << out_path << " (support " << x.support_size() << ")\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
