#include "uapprox/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace uapprox {

SparseVector gen_basis(std::uint64_t m, std::uint64_t j, double value) {
  return SparseVector::from_entries(m, {{j, value}});
}

SparseVector gen_hash_adversary(std::uint64_t m, double alpha, std::uint64_t d,
                                double p, std::uint64_t j, double xj) {
  const std::uint64_t r =
      static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(d)));
  if (r == 0) throw std::invalid_argument("gen_hash_adversary: floor(alpha*D) must be >= 1");
  if (r + 1 > m) throw std::invalid_argument("gen_hash_adversary: r + 1 exceeds m");
  const double value = std::pow(static_cast<double>(r), -1.0 / p);
  std::vector<SparseVector::Entry> entries;
  entries.reserve(r + 1);
  std::uint64_t placed = 0;
  for (std::uint64_t i = 0; placed < r; ++i) {
    if (i == j) continue;
    entries.push_back({i, value});
    ++placed;
  }
  if (xj != 0.0) entries.push_back({j, xj});
  return SparseVector::from_entries(m, std::move(entries));
}

SparseVector gen_two_level(std::uint64_t m, std::uint64_t k1, double gamma, double p) {
  if (k1 == 0) throw std::invalid_argument("gen_two_level: k1 must be >= 1");
  if (!(gamma > 1.0)) throw std::invalid_argument("gen_two_level: gamma must exceed 1");
  const double eps1 = std::pow(2.0 * static_cast<double>(k1), -1.0 / p);
  const std::uint64_t k2 = static_cast<std::uint64_t>(
      std::floor(2.0 * static_cast<double>(k1) * std::pow(gamma / 2.0, p)));
  if (k1 + k2 > m) throw std::invalid_argument("gen_two_level: k1 + k2 exceeds m");
  std::vector<SparseVector::Entry> entries;
  entries.reserve(k1 + k2);
  for (std::uint64_t i = 0; i < k1; ++i) entries.push_back({i, eps1});
  for (std::uint64_t i = 0; i < k2; ++i) entries.push_back({k1 + i, eps1 / gamma});
  return SparseVector::from_entries(m, std::move(entries));
}

SparseVector gen_dense_tail(std::uint64_t m, std::uint64_t k1, double p) {
  if (m > (1ULL << 20)) throw std::invalid_argument("gen_dense_tail: m must be <= 2^20");
  if (k1 == 0 || k1 >= m)
    throw std::invalid_argument("gen_dense_tail: k1 must satisfy 1 <= k1 < m");
  const double spike = std::pow(2.0 * static_cast<double>(k1), -1.0 / p);
  const double tail = std::pow(2.0 * static_cast<double>(m), -1.0 / p);
  std::vector<SparseVector::Entry> entries;
  entries.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) entries.push_back({i, i < k1 ? spike : tail});
  return SparseVector::from_entries(m, std::move(entries));
}

SparseVector gen_random_unit(std::uint64_t m, std::uint64_t s, double p,
                             const RngStream& stream) {
  if (s == 0 || s > m) throw std::invalid_argument("gen_random_unit: need 1 <= s <= m");
  std::unordered_set<std::uint64_t> used;
  used.reserve(s * 2);
  std::vector<std::uint64_t> indices;
  indices.reserve(s);
  std::uint64_t cursor = 0;
  while (indices.size() < s) {
    const std::uint64_t i = stream.word(cursor++) % m;
    if (used.insert(i).second) indices.push_back(i);
  }
  std::vector<SparseVector::Entry> entries;
  entries.reserve(s);
  for (std::uint64_t t = 0; t < s; ++t) {
    const double mag = stream.unit_real(cursor++);
    const double sign = (stream.word(cursor++) >> 63) ? -1.0 : 1.0;
    entries.push_back({indices[t], sign * mag});
  }
  SparseVector x = SparseVector::from_entries(m, std::move(entries));
  const double norm = lp_norm(x, p);
  return x.scaled(1.0 / norm);
}

SparseVector gen_heavy_hitter(std::uint64_t m, std::uint64_t j, double noise_l2,
                              std::uint64_t noise_support) {
  if (noise_support == 0 || noise_support + 1 > m)
    throw std::invalid_argument("gen_heavy_hitter: noise support does not fit");
  const double per_entry = noise_l2 / std::sqrt(static_cast<double>(noise_support));
  std::vector<SparseVector::Entry> entries;
  entries.reserve(noise_support + 1);
  entries.push_back({j, 1.0});
  std::uint64_t placed = 0;
  for (std::uint64_t i = 0; placed < noise_support; ++i) {
    if (i == j) continue;
    if (per_entry != 0.0) entries.push_back({i, per_entry});
    ++placed;
  }
  return SparseVector::from_entries(m, std::move(entries));
}

}  // namespace uapprox
