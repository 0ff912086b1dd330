#pragma once

#include <cstdint>
#include <stdexcept>

#include "uapprox/rng.hpp"

namespace uapprox {

inline constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

// x mod (2^61 - 1) for x < 2^122, branch-light fold.
inline std::uint64_t mod_mersenne61(unsigned __int128 x) noexcept {
  unsigned __int128 r = (x & kMersenne61) + (x >> 61);
  std::uint64_t s = static_cast<std::uint64_t>((r & kMersenne61) + (r >> 61));
  if (s >= kMersenne61) s -= kMersenne61;
  return s;
}

// Barrett reduction by a runtime constant: q = (n * floor(2^64/d)) >> 64
// underestimates n/d by at most one, so a single correction yields the
// exact remainder for any 64-bit n.
struct FastMod {
  std::uint64_t magic = 0;
  std::uint64_t divisor = 1;

  FastMod() = default;
  explicit FastMod(std::uint64_t d) : magic(d > 1 ? ~0ULL / d : 0), divisor(d) {}

  std::uint64_t mod(std::uint64_t n) const noexcept {
    if (divisor == 1) return 0;
    const std::uint64_t q =
        static_cast<std::uint64_t>((static_cast<unsigned __int128>(n) * magic) >> 64);
    std::uint64_t r = n - q * divisor;
    if (r >= divisor) r -= divisor;
    return r;
  }
};

// Affine hash h(i) = 1 + (((a*(i+1) + b) mod P) mod D) with P = 2^61 - 1
// and 1-based values in [D]. Coefficients a, b drawn uniformly from [0, P)
// make the family exactly pairwise independent over [P]; the trailing
// mod D adds a per-value bias of at most D/P.
//
// The identity configuration (trivial hashing) maps i to i+1 with D = m,
// so every bucket is a singleton.
class PairwiseHash {
 public:
  PairwiseHash() = default;

  PairwiseHash(std::uint64_t a, std::uint64_t b, std::uint64_t range)
      : a_(a), b_(b), range_(range) {
    if (range == 0) throw std::invalid_argument("PairwiseHash: range must be >= 1");
    if (a >= kMersenne61 || b >= kMersenne61)
      throw std::invalid_argument("PairwiseHash: coefficients must lie in [0, 2^61-1)");
  }

  // Draw a fresh hash with uniform coefficients.
  static PairwiseHash draw(SequentialDraw& draw, std::uint64_t range) {
    if (range == 0) throw std::invalid_argument("PairwiseHash::draw: range must be >= 1");
    PairwiseHash h;
    h.a_ = draw_mod_p(draw);
    h.b_ = draw_mod_p(draw);
    h.range_ = range;
    return h;
  }

  // Trivial hashing over [m]: eval(i) = i + 1.
  static PairwiseHash identity(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("PairwiseHash::identity: m must be >= 1");
    PairwiseHash h;
    h.range_ = m;
    h.identity_ = true;
    return h;
  }

  // 1-based hash value in [range].
  std::uint64_t eval(std::uint64_t i) const noexcept {
    if (identity_) return i + 1;
    const unsigned __int128 t =
        static_cast<unsigned __int128>(a_) * (static_cast<unsigned __int128>(i) + 1) + b_;
    return 1 + mod_mersenne61(t) % range_;
  }

  std::uint64_t range() const noexcept { return range_; }
  bool is_identity() const noexcept { return identity_; }
  std::uint64_t a() const noexcept { return a_; }
  std::uint64_t b() const noexcept { return b_; }

 private:
  static std::uint64_t draw_mod_p(SequentialDraw& draw) {
    // Rejection sampling of a uniform 61-bit value below P; the single
    // rejected value 2^61-1 occurs with probability 2^-61.
    for (;;) {
      const std::uint64_t v = draw.next() & kMersenne61;
      if (v < kMersenne61) return v;
    }
  }

  std::uint64_t a_ = 0;
  std::uint64_t b_ = 0;
  std::uint64_t range_ = 1;
  bool identity_ = false;
};

}  // namespace uapprox
