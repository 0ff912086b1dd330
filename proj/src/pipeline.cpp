#include "uapprox/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uapprox {

namespace {

constexpr long double kU63 = 9223372036854775808.0L;  // 2^63

std::uint64_t floor_to_u64(long double v, const char* formula) {
  if (!(v >= 0.0L) || !(v < kU63))
    throw std::overflow_error(std::string(formula) + " leaves the representable range");
  return static_cast<std::uint64_t>(std::floor(v));
}

std::uint64_t ceil_to_u64(long double v, const char* formula) {
  if (!(v >= 0.0L) || !(v < kU63))
    throw std::overflow_error(std::string(formula) + " leaves the representable range");
  return static_cast<std::uint64_t>(std::ceil(v));
}

long double eps_pow_inv(double eps, double p) {
  if (p == 1.0) return 1.0L / static_cast<long double>(eps);
  if (p == 2.0) {
    const long double e = eps;
    return 1.0L / (e * e);
  }
  return std::pow(static_cast<long double>(eps), -static_cast<long double>(p));
}

}  // namespace

AlgoParams derive_params(double p, double eps, double delta, std::uint64_t m,
                         Variant variant) {
  if (!(p >= 1.0 && p <= 2.0))
    throw std::invalid_argument("derive_params: p must lie in [1, 2]");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("derive_params: eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("derive_params: delta must lie in (0, 1)");
  if (m < 2) throw std::invalid_argument("derive_params: m must be >= 2");

  AlgoParams out;
  out.p = p;
  out.eps = eps;
  out.delta = delta;
  out.dim = m;
  out.variant = variant;

  out.k0 = floor_to_u64(eps_pow_inv(eps, p), "k0 = floor(eps^-p)");
  out.alpha = delta / (2.0 * static_cast<double>(out.k0));
  out.gamma = heavy_hitter_threshold(out.alpha, variant);
  out.delta0 = delta / 4.0;
  out.delta1 = delta / 4.0;

  // D = ceil((gamma/eps)^p * k0 / delta0). For the pairwise variant at
  // p = 2 the square of gamma is formed without the intermediate square
  // root, so power-of-two inputs stay exact.
  long double ratio_pow;
  if (p == 2.0 && variant == Variant::kPairwise) {
    const long double a = out.alpha;
    const long double gamma_sq = 2049.0L * 2049.0L * 2.0L / (a * a * a);
    ratio_pow = gamma_sq / (static_cast<long double>(eps) * eps);
  } else if (p == 1.0) {
    ratio_pow = static_cast<long double>(out.gamma) / eps;
  } else {
    ratio_pow = std::pow(static_cast<long double>(out.gamma) / eps,
                         static_cast<long double>(p));
  }
  const long double d_raw =
      ratio_pow * static_cast<long double>(out.k0) / static_cast<long double>(out.delta0);
  out.buckets = ceil_to_u64(d_raw, "D = ceil((gamma/eps)^p * k0/delta0)");

  // R = 2 * ceil(log2(D / (2 delta1)) - 1/2) + 1, forced odd by shape.
  const long double r_inner =
      std::log2(static_cast<long double>(out.buckets) / (2.0L * out.delta1)) - 0.5L;
  const long double r_raw = 2.0L * std::ceil(std::max(0.0L, r_inner)) + 1.0L;
  out.repetitions = static_cast<std::uint64_t>(r_raw);

  // k = floor(2^(7p/2) * eps^-p), G = 4k.
  const long double k_raw = std::exp2(3.5L * static_cast<long double>(p)) * eps_pow_inv(eps, p);
  out.top_k = floor_to_u64(k_raw, "k = floor(2^(7p/2) * eps^-p)");
  if (out.top_k == 0) out.top_k = 1;
  if (out.top_k > out.buckets)
    throw std::overflow_error("derive_params: k exceeds D (degenerate instance)");
  out.groups = 4 * out.top_k;
  return out;
}

PredictedCost predicted_cost(const AlgoParams& params, std::uint64_t m) {
  PredictedCost c;
  c.n1 = params.repetitions * params.groups;
  c.n2_max = params.top_k * (2ULL * kstar(m) + 2ULL);
  c.n3_max = params.top_k;
  return c;
}

namespace {

constexpr std::uint64_t kExplicitEnumerationLimit = 1ULL << 24;

IndexSet enumerate_bucket(const PairwiseHash& bucket_hash, std::uint64_t m,
                          std::uint64_t value) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (bucket_hash.eval(i) == value) members.push_back(i);
  }
  return IndexSet::from_values(std::move(members));
}

}  // namespace

ApproxOutput approximate(MeasurementOracle& oracle, const AlgoParams& params,
                         const RngStream& stream, CandidateMode mode) {
  const std::uint64_t m = oracle.dim();
  if (m != params.dim)
    throw std::invalid_argument("approximate: oracle dim does not match params");

  ApproxOutput out;
  std::vector<std::uint64_t> selected_indices;

  if (params.buckets >= m) {
    // Trivial-hash branch: buckets are singletons, bucket ids are
    // coordinates, and spotting is unnecessary.
    out.trivial_branch = true;
    SelectParams sp = params.select_params();
    sp.buckets = m;
    sp.top_k = std::min<std::uint64_t>(params.top_k, m);
    const PairwiseHash bucket_hash = PairwiseHash::identity(m);
    const SketchState state =
        build_sketch(oracle, bucket_hash, sp, stream.child("sketch", 0));
    const IndexSet picked = select_top_k(state, sp.top_k);
    selected_indices.assign(picked.values().begin(), picked.values().end());
  } else {
    SequentialDraw bucket_draw(stream.child("bucket_hash", 0));
    const PairwiseHash bucket_hash = PairwiseHash::draw(bucket_draw, params.buckets);
    const SketchState state =
        build_sketch(oracle, bucket_hash, params.select_params(), stream.child("sketch", 0));
    const IndexSet picked = select_top_k(state, params.top_k);

    if (mode == CandidateMode::kExplicit && m > kExplicitEnumerationLimit)
      throw std::invalid_argument("approximate: explicit mode requires m <= 2^24");

    std::uint64_t rank = 0;
    for (const std::uint64_t d0 : picked) {
      CandidateSet j_set =
          mode == CandidateMode::kExplicit
              ? CandidateSet::explicit_set(m, enumerate_bucket(bucket_hash, m, d0 + 1))
              : CandidateSet::bucket(m, bucket_hash, d0 + 1);
      const SpotResult r =
          spot(oracle, j_set, params.alpha, m, stream.child("spot", rank));
      BucketOutcome bo;
      bo.bucket = d0;
      bo.found = !r.found.empty();
      bo.index = bo.found ? r.found[0] : 0;
      bo.y1_failure = r.y1_failure;
      bo.measurements = r.measurements;
      out.spot_outcomes.push_back(bo);
      if (bo.found) selected_indices.push_back(bo.index);
      ++rank;
    }
  }

  out.selected = IndexSet::from_values(std::move(selected_indices));

  std::vector<SparseVector::Entry> entries;
  for (const std::uint64_t i : out.selected) {
    const double v = oracle.query_entry(i);
    if (v != 0.0) entries.push_back({i, v});
  }
  out.approximation = SparseVector::from_entries(m, std::move(entries));
  out.ledger = oracle.cost_report();
  return out;
}

ApproxOutput approximate_expected(MeasurementOracle& oracle, double p, double eps,
                                  const RngStream& stream, CandidateMode mode,
                                  Variant variant) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("approximate_expected: eps must lie in (0, 1)");
  const AlgoParams params =
      derive_params(p, eps / 2.0, eps / 2.0, oracle.dim(), variant);
  return approximate(oracle, params, stream, mode);
}

double epsilon_prime(double p, std::uint64_t m, double eps) {
  if (!(p > 2.0)) throw std::invalid_argument("epsilon_prime: p must exceed 2");
  if (m == 0) throw std::invalid_argument("epsilon_prime: m must be >= 1");
  const double exponent = -(0.5 - 1.0 / p);
  return std::pow(static_cast<double>(m), exponent) * eps;
}

ApproxOutput approximate_p_gt2(MeasurementOracle& oracle, double p, double eps,
                               const RngStream& stream, CandidateMode mode,
                               Variant variant) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("approximate_p_gt2: eps must lie in (0, 1)");
  const double ep = epsilon_prime(p, oracle.dim(), eps);
  if (!(ep > 0.0 && ep < 1.0))
    throw std::domain_error("approximate_p_gt2: reduced eps' leaves (0, 1)");
  return approximate_expected(oracle, 2.0, ep, stream, mode, variant);
}

}  // namespace uapprox
