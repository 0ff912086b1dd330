#pragma once

#include <cstdint>
#include <string_view>

namespace uapprox {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Counter-based random stream. A stream is a 128-bit key; the i-th output
// word is a pure function of (key, i), so streams can be consumed in any
// order and shared read-only across threads.
//
// Child streams are derived from (label, counter) paths. Identical paths
// reproduce identical streams; distinct paths give streams that behave as
// statistically independent.
class RngStream {
 public:
  RngStream() = default;

  static RngStream from_seed(std::uint64_t master_seed) {
    std::uint64_t s = master_seed;
    const std::uint64_t k0 = splitmix_next(s);
    const std::uint64_t k1 = splitmix_next(s);
    return RngStream(k0, k1);
  }

  RngStream child(std::string_view label, std::uint64_t counter) const {
    std::uint64_t h = key0_;
    for (const char c : label) {
      h = mix64(h ^ (static_cast<std::uint64_t>(static_cast<unsigned char>(c)) + 0x100ULL));
    }
    h = mix64(h + kGolden * (counter + 1));
    const std::uint64_t k0 = mix64(h + key1_);
    const std::uint64_t k1 = mix64(h ^ key1_ ^ 0xA5A5A5A5A5A5A5A5ULL);
    return RngStream(k0, k1);
  }

  // i-th 64-bit word of the stream.
  std::uint64_t word(std::uint64_t index) const noexcept {
    return mix64(mix64(key0_ + kGolden * (index + 1)) ^ key1_);
  }

  // i-th word mapped to (0, 1].
  double unit_real(std::uint64_t index) const noexcept {
    return (static_cast<double>(word(index) >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t key0() const noexcept { return key0_; }
  std::uint64_t key1() const noexcept { return key1_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t splitmix_next(std::uint64_t& state) noexcept {
    state += kGolden;
    return mix64(state);
  }

  RngStream(std::uint64_t k0, std::uint64_t k1) : key0_(k0), key1_(k1) {}

  std::uint64_t key0_ = 0;
  std::uint64_t key1_ = 0;
};

// Hands out consecutive words of a stream.
class SequentialDraw {
 public:
  explicit SequentialDraw(RngStream stream) : stream_(stream) {}

  std::uint64_t next() noexcept { return stream_.word(cursor_++); }

 private:
  RngStream stream_;
  std::uint64_t cursor_ = 0;
};

// Index-addressed i.i.d. Rademacher signs derived from a stream. Full
// independence across indices implies the pairwise independence required
// by the sketch and shrink guarantees.
class RademacherStream {
 public:
  RademacherStream() = default;
  explicit RademacherStream(RngStream stream) : stream_(stream) {}

  int sign(std::uint64_t i) const noexcept {
    return (stream_.word(i) >> 63) ? -1 : 1;
  }

 private:
  RngStream stream_;
};

}  // namespace uapprox
