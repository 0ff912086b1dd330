#include "uapprox/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace uapprox {

void SelectParams::validate() const {
  if (repetitions == 0 || repetitions % 2 == 0)
    throw std::invalid_argument("SelectParams: R must be a positive odd integer");
  if (groups == 0) throw std::invalid_argument("SelectParams: G must be >= 1");
  if (top_k == 0 || top_k > buckets)
    throw std::invalid_argument("SelectParams: k must satisfy 1 <= k <= D");
}

SketchState build_sketch(MeasurementOracle& oracle, const PairwiseHash& bucket_hash,
                         const SelectParams& params, const RngStream& stream) {
  params.validate();

  std::vector<PairwiseHash> group_hashes;
  std::vector<RademacherStream> signs;
  group_hashes.reserve(params.repetitions);
  signs.reserve(params.repetitions);
  for (std::uint64_t r = 0; r < params.repetitions; ++r) {
    SequentialDraw draw(stream.child("group_hash", r));
    group_hashes.push_back(PairwiseHash::draw(draw, params.groups));
    signs.emplace_back(stream.child("sign", r));
  }

  std::vector<double> y(params.repetitions * params.groups, 0.0);
  for (std::uint64_t r = 0; r < params.repetitions; ++r) {
    const PairwiseHash& gh = group_hashes[r];
    const RademacherStream& sg = signs[r];
    for (std::uint64_t g = 0; g < params.groups; ++g) {
      const auto coeff = [&](std::uint64_t i) -> double {
        const std::uint64_t d0 = bucket_hash.eval(i) - 1;
        if (gh.eval(d0) - 1 != g) return 0.0;
        return static_cast<double>(sg.sign(i));
      };
      y[r * params.groups + g] = static_cast<double>(oracle.measure(coeff, Stage::kSketch));
    }
  }
  return SketchState(params, bucket_hash, std::move(group_hashes), std::move(signs),
                     std::move(y));
}

namespace {

// Median of |values|; count must be odd.
double median_abs(std::vector<double>& scratch) {
  const std::size_t mid = scratch.size() / 2;
  std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
  return scratch[mid];
}

}  // namespace

double bucket_score(const SketchState& state, std::uint64_t d) {
  const std::uint64_t reps = state.params().repetitions;
  std::vector<double> vals(reps);
  for (std::uint64_t r = 0; r < reps; ++r) vals[r] = std::fabs(state.hat(r, d));
  return median_abs(vals);
}

IndexSet top_k_by_score(std::vector<std::pair<std::uint64_t, double>> scores,
                        std::uint64_t k) {
  if (k > scores.size())
    throw std::invalid_argument("top_k_by_score: k exceeds number of scored buckets");
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::uint64_t> ids;
  ids.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) ids.push_back(scores[i].first);
  return IndexSet::from_values(std::move(ids));
}

namespace {

struct HeapEntry {
  double score;
  std::uint64_t bucket;
};

// Orders "better" entries before worse ones; used with a priority_queue so
// that the top element is the current worst of the kept k.
struct BetterThan {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.score != b.score) return a.score > b.score;
    return a.bucket < b.bucket;
  }
};

}  // namespace

IndexSet select_top_k(const SketchState& state, std::uint64_t k) {
  const SelectParams& params = state.params();
  const std::uint64_t reps = params.repetitions;
  const std::uint64_t buckets = params.buckets;
  const std::uint64_t groups = params.groups;
  if (k == 0 || k > buckets)
    throw std::invalid_argument("select_top_k: k must satisfy 1 <= k <= D");

  // Incremental affine-hash state per repetition: t_r(d) = (a_r*(d+1) + b_r)
  // mod P advances by a_r per bucket, and the group value g_r = t_r mod G is
  // carried along so that the inner vote is a plain table lookup. When the
  // step wraps past P the group value advances by (a - P) mod G instead of
  // a mod G. Identity group hashes never occur here (groups partition
  // buckets, not indices), but a direct-evaluation fallback handles them.
  std::vector<std::uint64_t> step(reps), cur(reps), gval(reps), gstep(reps), gwrap(reps);
  bool incremental = true;
  for (std::uint64_t r = 0; r < reps; ++r) {
    const PairwiseHash& gh = state.group_hash(r);
    if (gh.is_identity()) {
      incremental = false;
      break;
    }
    step[r] = gh.a();
    cur[r] = mod_mersenne61(static_cast<unsigned __int128>(gh.a()) + gh.b());
    gval[r] = cur[r] % groups;
    gstep[r] = gh.a() % groups;
    gwrap[r] = (gstep[r] + groups - kMersenne61 % groups) % groups;
  }

  // hot[r * G + g] = 1 iff |Y[r][g]| > threshold (strictly): the median of
  // R values exceeds t iff at least (R+1)/2 of them do.
  std::vector<std::uint8_t> hot(reps * groups, 0);
  const auto rebuild_hot = [&](double threshold) {
    for (std::uint64_t r = 0; r < reps; ++r) {
      for (std::uint64_t g = 0; g < groups; ++g) {
        hot[r * groups + g] = std::fabs(state.measurement(r, g)) > threshold ? 1 : 0;
      }
    }
  };

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, BetterThan> heap;
  const std::uint64_t majority = reps / 2 + 1;
  const std::uint64_t max_misses = reps - majority;  // votes allowed below threshold

  std::vector<double> scratch(reps);
  double threshold = 0.0;
  bool heap_full = false;

  const std::uint64_t* gv = gval.data();
  const std::uint8_t* hot_ptr = hot.data();

  for (std::uint64_t d = 0; d < buckets; ++d) {
    bool candidate;
    if (!heap_full) {
      candidate = true;
    } else if (incremental) {
      // Majority vote with early exit; exact: Z_d > threshold iff at least
      // `majority` of the R values exceed it.
      std::uint64_t votes = 0, misses = 0;
      candidate = false;
      for (std::uint64_t r = 0; r < reps; ++r) {
        if (hot_ptr[r * groups + gv[r]]) {
          if (++votes >= majority) {
            candidate = true;
            break;
          }
        } else {
          if (++misses > max_misses) break;
        }
      }
    } else {
      std::uint64_t votes = 0, misses = 0;
      candidate = false;
      for (std::uint64_t r = 0; r < reps; ++r) {
        const std::uint64_t g = state.group_of(d, r);
        if (hot_ptr[r * groups + g]) {
          if (++votes >= majority) {
            candidate = true;
            break;
          }
        } else {
          if (++misses > max_misses) break;
        }
      }
    }

    if (candidate) {
      for (std::uint64_t r = 0; r < reps; ++r) scratch[r] = std::fabs(state.hat(r, d));
      const double score = median_abs(scratch);
      if (!heap_full) {
        heap.push({score, d});
        if (heap.size() == k) {
          heap_full = true;
          threshold = heap.top().score;
          rebuild_hot(threshold);
        }
      } else if (score > threshold) {
        heap.pop();
        heap.push({score, d});
        const double new_threshold = heap.top().score;
        if (new_threshold != threshold) {
          threshold = new_threshold;
          rebuild_hot(threshold);
        }
      }
    }

    if (incremental) {
      std::uint64_t* __restrict cur_ptr = cur.data();
      std::uint64_t* __restrict g_ptr = gval.data();
      const std::uint64_t* __restrict step_ptr = step.data();
      const std::uint64_t* __restrict gs_ptr = gstep.data();
      const std::uint64_t* __restrict gw_ptr = gwrap.data();
      for (std::uint64_t r = 0; r < reps; ++r) {
        const std::uint64_t t = cur_ptr[r] + step_ptr[r];
        const bool wrap = t >= kMersenne61;
        cur_ptr[r] = wrap ? t - kMersenne61 : t;
        std::uint64_t g = g_ptr[r] + (wrap ? gw_ptr[r] : gs_ptr[r]);
        g_ptr[r] = g >= groups ? g - groups : g;
      }
    }
  }

  std::vector<std::uint64_t> ids;
  ids.reserve(k);
  while (!heap.empty()) {
    ids.push_back(heap.top().bucket);
    heap.pop();
  }
  return IndexSet::from_values(std::move(ids));
}

IndexSet compute_q(const SparseVector& x, const PairwiseHash& bucket_hash, double eps,
                   double gamma_sel) {
  // Group the support by bucket; indices outside the support contribute
  // nothing to either side of the condition.
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> by_bucket;
  for (const auto& e : x.entries()) {
    by_bucket[bucket_hash.eval(e.index) - 1].push_back({e.index, e.value});
  }
  std::vector<std::uint64_t> q;
  for (const auto& [d, members] : by_bucket) {
    double sumsq = 0.0;
    for (const auto& [i, v] : members) sumsq += v * v;
    for (const auto& [i, v] : members) {
      if (std::fabs(v) < eps) continue;
      const double noise = std::sqrt(std::max(0.0, sumsq - v * v));
      if (noise <= std::fabs(v) / gamma_sel) {
        q.push_back(d);
        break;
      }
    }
  }
  return IndexSet::from_values(std::move(q));
}

IndexSet compute_q(const SparseVector& x, const PairwiseHash& bucket_hash, double eps) {
  return compute_q(x, bucket_hash, eps, 8.0 * std::sqrt(2.0));
}

double count_sketch_estimate(const SketchState& state, std::uint64_t i) {
  if (!state.bucket_hash().is_identity())
    throw std::invalid_argument("count_sketch_estimate: requires trivial hashing (D = m)");
  const std::uint64_t reps = state.params().repetitions;
  std::vector<double> vals(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    vals[r] = static_cast<double>(state.sign_stream(r).sign(i)) * state.hat(r, i);
  }
  const std::size_t mid = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
  return vals[mid];
}

}  // namespace uapprox
