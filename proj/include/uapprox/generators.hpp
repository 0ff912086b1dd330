#pragma once

#include <cstdint>

#include "uapprox/rng.hpp"
#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// Standard basis vector e_j.
SparseVector gen_basis(std::uint64_t m, std::uint64_t j, double value = 1.0);

// Worst case for the hashing tail bound: r = floor(alpha * D) entries of
// value r^{-1/p} on the first r indices other than j, so that the noise
// mass satisfies ||x_{[m] \ {j}}||_p = 1. x_j is set to xj (0 omits it).
SparseVector gen_hash_adversary(std::uint64_t m, double alpha, std::uint64_t d,
                                double p, std::uint64_t j, double xj = 0.0);

// Two-level vector: k1 entries of value (2 k1)^{-1/p} followed by
// k2 = floor(2 k1 (gamma/2)^p) entries of value (2 k1)^{-1/p} / gamma.
// ||x||_p <= 1 by construction.
SparseVector gen_two_level(std::uint64_t m, std::uint64_t k1, double gamma, double p);

// k1 spikes of value (2 k1)^{-1/p}, every remaining entry (2 m)^{-1/p}.
// Materialized densely; requires m <= 2^20 and k1 < m.
SparseVector gen_dense_tail(std::uint64_t m, std::uint64_t k1, double p);

// s distinct random indices with signed random magnitudes, rescaled so
// that ||x||_p = 1. Deterministic in the stream.
SparseVector gen_random_unit(std::uint64_t m, std::uint64_t s, double p,
                             const RngStream& stream);

// Single heavy hitter x_j = 1 plus noise_support equal-magnitude entries
// whose joint l2 norm equals noise_l2. Used to probe spot exactly at its
// heavy-hitter threshold.
SparseVector gen_heavy_hitter(std::uint64_t m, std::uint64_t j, double noise_l2,
                              std::uint64_t noise_support);

}  // namespace uapprox
