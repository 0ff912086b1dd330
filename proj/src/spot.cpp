#include "uapprox/spot.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uapprox {

unsigned kstar(std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("kstar: m must be >= 2");
  const double x = std::log2(static_cast<double>(m)) / 8.0;
  if (x <= 1.0) return 0;
  const double steps = std::log(x) / std::log(9.0 / 8.0);
  const double c = std::ceil(steps);
  return c < 0.0 ? 0u : static_cast<unsigned>(c);
}

std::uint64_t dk_value(double alpha, unsigned k) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("dk_value: alpha must be in (0, 1]");
  const long double exponent =
      8.0L * std::pow(9.0L / 8.0L, static_cast<long double>(k)) + k + 2;
  const long double value = std::exp2(exponent) / static_cast<long double>(alpha);
  constexpr long double kLimit = 9223372036854775808.0L;  // 2^63
  if (!(value < kLimit))
    throw std::overflow_error("dk_value: D_" + std::to_string(k) +
                              " exceeds 2^63 (instance too demanding)");
  return static_cast<std::uint64_t>(std::ceil(value));
}

SpotSchedule dk_schedule(double alpha, unsigned kstar_value) {
  SpotSchedule sched;
  sched.alpha = alpha;
  sched.iterations = kstar_value;
  sched.hash_sizes.reserve(kstar_value);
  for (unsigned k = 0; k < kstar_value; ++k) sched.hash_sizes.push_back(dk_value(alpha, k));
  return sched;
}

double heavy_hitter_threshold(double alpha, Variant variant) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("heavy_hitter_threshold: alpha must be in (0, 1]");
  if (variant == Variant::kPairwise) {
    // 2049 * sqrt(2) * alpha^{-3/2}, computed as 2049 * sqrt(2 / alpha^3)
    // so that power-of-two alpha gives an exact result.
    return 2049.0 * std::sqrt(2.0 / (alpha * alpha * alpha));
  }
  return 1025.0 * std::sqrt(2.0 * std::log(16.0 / alpha)) / alpha;
}

CandidateSet CandidateSet::explicit_set(std::uint64_t dim, IndexSet indices) {
  CandidateSet s;
  s.explicit_ = true;
  s.dim_ = dim;
  s.indices_ = std::move(indices);
  return s;
}

CandidateSet CandidateSet::whole_domain(std::uint64_t dim) {
  CandidateSet s;
  s.explicit_ = false;
  s.dim_ = dim;
  return s;
}

CandidateSet CandidateSet::bucket(std::uint64_t dim, PairwiseHash hash,
                                  std::uint64_t value) {
  CandidateSet s;
  s.explicit_ = false;
  s.dim_ = dim;
  s.constraints_.push_back({std::move(hash), value});
  return s;
}

const IndexSet& CandidateSet::indices() const {
  if (!explicit_)
    throw std::logic_error("CandidateSet::indices: set is implicit");
  return indices_;
}

bool CandidateSet::contains(std::uint64_t i) const {
  if (i >= dim_) return false;
  if (explicit_) return indices_.contains(i);
  for (const Constraint& c : constraints_) {
    if (c.hash.eval(i) != c.value) return false;
  }
  return true;
}

CandidateSet CandidateSet::refined(PairwiseHash hash, std::uint64_t value) const {
  if (explicit_)
    throw std::logic_error("CandidateSet::refined: set is explicit; use filtered");
  CandidateSet s = *this;
  s.constraints_.push_back({std::move(hash), value});
  return s;
}

CandidateSet CandidateSet::filtered(const PairwiseHash& hash, std::uint64_t value) const {
  if (!explicit_)
    throw std::logic_error("CandidateSet::filtered: set is implicit; use refined");
  std::vector<std::uint64_t> kept;
  for (const std::uint64_t i : indices_) {
    if (hash.eval(i) == value) kept.push_back(i);
  }
  return explicit_set(dim_, IndexSet::from_values(std::move(kept)));
}

namespace {

// ceil(y2/y1 + d0/2) in [1, d0], or 0 when outside (no index can match).
std::uint64_t selected_hash_value(long double y1, long double y2, std::uint64_t d0) {
  const long double v = std::ceil(y2 / y1 + static_cast<long double>(d0) / 2.0L);
  if (!(v >= 1.0L && v <= static_cast<long double>(d0))) return 0;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

ShrinkOutcome shrink(MeasurementOracle& oracle, const CandidateSet& s,
                     const PairwiseHash& h, const RademacherStream& signs) {
  const std::uint64_t d0 = h.range();
  // The centering constant (D0+1)/2 is a half-integer up to ~2^62; long
  // double keeps it and the hash values exact on x86-64.
  const long double center = (static_cast<long double>(d0) + 1.0L) / 2.0L;

  const auto coeff1 = [&](std::uint64_t i) -> long double {
    if (!s.contains(i)) return 0.0L;
    return static_cast<long double>(signs.sign(i));
  };
  const auto coeff2 = [&](std::uint64_t i) -> long double {
    if (!s.contains(i)) return 0.0L;
    return (static_cast<long double>(h.eval(i)) - center) * signs.sign(i);
  };
  const long double y1 = oracle.measure(coeff1, Stage::kSpot);
  const long double y2 = oracle.measure(coeff2, Stage::kSpot);

  ShrinkOutcome out;
  if (y1 == 0.0L) {
    out.set = CandidateSet::explicit_set(s.dim(), IndexSet());
    out.y1_was_zero = true;
    return out;
  }
  out.selected_value = selected_hash_value(y1, y2, d0);
  if (out.selected_value == 0) {
    out.set = CandidateSet::explicit_set(s.dim(), IndexSet());
    return out;
  }
  out.set = s.is_explicit() ? s.filtered(h, out.selected_value)
                            : s.refined(h, out.selected_value);
  return out;
}

namespace {

// Final shrink for an explicit candidate set: the injective hash h* maps
// the n members of S (sorted) to their 1-based rank in [n].
IndexSet final_step_explicit(MeasurementOracle& oracle, const CandidateSet& s,
                             const RademacherStream& signs) {
  const IndexSet& members = s.indices();
  const std::uint64_t n = members.size();
  const long double center = (static_cast<long double>(n) + 1.0L) / 2.0L;

  const auto coeff1 = [&](std::uint64_t i) -> long double {
    if (!members.contains(i)) return 0.0L;
    return static_cast<long double>(signs.sign(i));
  };
  const auto coeff2 = [&](std::uint64_t i) -> long double {
    const std::size_t rank = members.rank_of(i);
    if (rank == members.size()) return 0.0L;
    return (static_cast<long double>(rank) + 1.0L - center) * signs.sign(i);
  };
  const long double y1 = oracle.measure(coeff1, Stage::kSpot);
  const long double y2 = oracle.measure(coeff2, Stage::kSpot);
  if (y1 == 0.0L) return IndexSet();
  const std::uint64_t v = selected_hash_value(y1, y2, n);
  if (v == 0) return IndexSet();
  return IndexSet::from_values({members[v - 1]});
}

// Final shrink for an implicit candidate set: the identity hash over [m]
// is injective, and the recovered hash value names the candidate index
// directly. The index is accepted only if it satisfies every constraint
// in the chain.
IndexSet final_step_implicit(MeasurementOracle& oracle, const CandidateSet& s,
                             std::uint64_t m, const RademacherStream& signs,
                             bool* y1_zero) {
  const long double center = (static_cast<long double>(m) + 1.0L) / 2.0L;

  const auto coeff1 = [&](std::uint64_t i) -> long double {
    if (!s.contains(i)) return 0.0L;
    return static_cast<long double>(signs.sign(i));
  };
  const auto coeff2 = [&](std::uint64_t i) -> long double {
    if (!s.contains(i)) return 0.0L;
    return (static_cast<long double>(i) + 1.0L - center) * signs.sign(i);
  };
  const long double y1 = oracle.measure(coeff1, Stage::kSpot);
  const long double y2 = oracle.measure(coeff2, Stage::kSpot);
  if (y1 == 0.0L) {
    *y1_zero = true;
    return IndexSet();
  }
  const std::uint64_t v = selected_hash_value(y1, y2, m);
  if (v == 0) return IndexSet();
  const std::uint64_t candidate = v - 1;
  if (!s.contains(candidate)) return IndexSet();
  return IndexSet::from_values({candidate});
}

}  // namespace

SpotResult spot(MeasurementOracle& oracle, const CandidateSet& j_set, double alpha,
                std::uint64_t m, const RngStream& stream) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("spot: alpha must be in (0, 1)");
  const SpotSchedule sched = dk_schedule(alpha, kstar(m));

  SpotResult result;
  CandidateSet s = j_set;
  for (unsigned k = 0; k < sched.iterations; ++k) {
    if (s.is_explicit() && s.indices().size() <= 1) break;
    SequentialDraw draw(stream.child("hash", k));
    const PairwiseHash h = PairwiseHash::draw(draw, sched.hash_sizes[k]);
    const RademacherStream signs(stream.child("sign", k));
    ShrinkOutcome out = shrink(oracle, s, h, signs);
    result.measurements += 2;
    ++result.random_steps;
    if (out.y1_was_zero) {
      result.y1_failure = true;
      return result;
    }
    if (out.set.known_empty()) return result;
    s = std::move(out.set);
  }

  if (s.is_explicit()) {
    const std::size_t n = s.indices().size();
    if (n == 0) return result;
    if (n == 1) {
      // Structural singleton: membership is certain, no confirmation step.
      result.found = s.indices();
      return result;
    }
    const RademacherStream signs(stream.child("sign", sched.iterations));
    result.found = final_step_explicit(oracle, s, signs);
    result.measurements += 2;
    result.final_step_run = true;
    return result;
  }

  const RademacherStream signs(stream.child("sign", sched.iterations));
  bool y1_zero = false;
  result.found = final_step_implicit(oracle, s, m, signs, &y1_zero);
  result.measurements += 2;
  result.final_step_run = true;
  result.y1_failure = y1_zero;
  return result;
}

}  // namespace uapprox
