#pragma once

#include <cstdint>
#include <vector>

namespace uapprox {

// Sorted set of 64-bit indices, no duplicates.
class IndexSet {
 public:
  IndexSet() = default;

  // Sorts and removes duplicates.
  static IndexSet from_values(std::vector<std::uint64_t> values);

  bool contains(std::uint64_t i) const;
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<std::uint64_t>& values() const noexcept { return values_; }
  std::uint64_t operator[](std::size_t pos) const { return values_[pos]; }

  // 0-based rank of i within the set, or size() when absent.
  std::size_t rank_of(std::uint64_t i) const;

  bool operator==(const IndexSet& other) const { return values_ == other.values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<std::uint64_t> values_;
};

// Vector over the index domain [m] (0-based internally) stored by nonzero
// support. Entries are kept sorted by index; zero-valued inserts are
// dropped at construction so that support == nonzeros.
class SparseVector {
 public:
  struct Entry {
    std::uint64_t index;
    double value;
  };

  SparseVector() = default;
  explicit SparseVector(std::uint64_t dim) : dim_(dim) {}

  // Validates indices and values, drops zeros, sorts by index.
  // Throws on out-of-range indices, duplicates, or non-finite values.
  static SparseVector from_entries(std::uint64_t dim, std::vector<Entry> entries);

  std::uint64_t dim() const noexcept { return dim_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  // Exact entry value; 0.0 for indices outside the support.
  double value_at(std::uint64_t i) const;

  IndexSet support() const;

  SparseVector scaled(double t) const;

  bool operator==(const SparseVector& other) const;

 private:
  std::uint64_t dim_ = 0;
  std::vector<Entry> entries_;
};

// (sum_i |x_i|^p)^(1/p); rejects p < 1 or non-finite p.
double lp_norm(const SparseVector& x, double p);

double linf_norm(const SparseVector& x);

// max_i |x_i - z_i|; throws on dimension mismatch.
double linf_dist(const SparseVector& x, const SparseVector& z);

// x restricted to K, zero elsewhere. Throws on out-of-range indices in K.
SparseVector project(const SparseVector& x, const IndexSet& K);

// Indices with |x_i| >= eps.
IndexSet heavy_set(const SparseVector& x, double eps);

// l_q norm of x - z; q in [1, inf] where inf is represented by
// std::numeric_limits<double>::infinity(). Throws on dimension mismatch.
double lq_error(const SparseVector& x, const SparseVector& z, double q);

}  // namespace uapprox
