#include "uapprox/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uapprox {

IndexSet IndexSet::from_values(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  IndexSet set;
  set.values_ = std::move(values);
  return set;
}

bool IndexSet::contains(std::uint64_t i) const {
  return std::binary_search(values_.begin(), values_.end(), i);
}

std::size_t IndexSet::rank_of(std::uint64_t i) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), i);
  if (it == values_.end() || *it != i) return values_.size();
  return static_cast<std::size_t>(it - values_.begin());
}

SparseVector SparseVector::from_entries(std::uint64_t dim, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  SparseVector x(dim);
  x.entries_.reserve(entries.size());
  std::uint64_t prev = 0;
  bool have_prev = false;
  for (const Entry& e : entries) {
    if (e.index >= dim)
      throw std::out_of_range("SparseVector: index " + std::to_string(e.index) +
                              " out of range for dim " + std::to_string(dim));
    if (!std::isfinite(e.value))
      throw std::invalid_argument("SparseVector: non-finite value at index " +
                                  std::to_string(e.index));
    if (have_prev && e.index == prev)
      throw std::invalid_argument("SparseVector: duplicate index " + std::to_string(e.index));
    prev = e.index;
    have_prev = true;
    if (e.value == 0.0) continue;
    x.entries_.push_back(e);
  }
  return x;
}

double SparseVector::value_at(std::uint64_t i) const {
  if (i >= dim_) throw std::out_of_range("SparseVector::value_at: index out of range");
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), i,
      [](const Entry& e, std::uint64_t idx) { return e.index < idx; });
  if (it == entries_.end() || it->index != i) return 0.0;
  return it->value;
}

IndexSet SparseVector::support() const {
  std::vector<std::uint64_t> idx;
  idx.reserve(entries_.size());
  for (const Entry& e : entries_) idx.push_back(e.index);
  return IndexSet::from_values(std::move(idx));
}

SparseVector SparseVector::scaled(double t) const {
  SparseVector out(dim_);
  if (t == 0.0) return out;
  out.entries_.reserve(entries_.size());
  for (const Entry& e : entries_) out.entries_.push_back({e.index, t * e.value});
  return out;
}

bool SparseVector::operator==(const SparseVector& other) const {
  if (dim_ != other.dim_ || entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index != other.entries_[i].index ||
        entries_[i].value != other.entries_[i].value)
      return false;
  }
  return true;
}

double lp_norm(const SparseVector& x, double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("lp_norm: p must be finite and >= 1");
  if (x.entries().empty()) return 0.0;
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& e : x.entries()) s += std::fabs(e.value);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& e : x.entries()) s += e.value * e.value;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (const auto& e : x.entries()) s += std::pow(std::fabs(e.value), p);
  return std::pow(s, 1.0 / p);
}

double linf_norm(const SparseVector& x) {
  double m = 0.0;
  for (const auto& e : x.entries()) m = std::max(m, std::fabs(e.value));
  return m;
}

namespace {

// Walks the union of two supports, applying f(xi, zi) per index.
template <class F>
void merged_walk(const SparseVector& x, const SparseVector& z, F&& f) {
  const auto& xe = x.entries();
  const auto& ze = z.entries();
  std::size_t ix = 0, iz = 0;
  while (ix < xe.size() || iz < ze.size()) {
    if (iz == ze.size() || (ix < xe.size() && xe[ix].index < ze[iz].index)) {
      f(xe[ix].index, xe[ix].value, 0.0);
      ++ix;
    } else if (ix == xe.size() || ze[iz].index < xe[ix].index) {
      f(ze[iz].index, 0.0, ze[iz].value);
      ++iz;
    } else {
      f(xe[ix].index, xe[ix].value, ze[iz].value);
      ++ix;
      ++iz;
    }
  }
}

}  // namespace

double linf_dist(const SparseVector& x, const SparseVector& z) {
  if (x.dim() != z.dim()) throw std::invalid_argument("linf_dist: dimension mismatch");
  double m = 0.0;
  merged_walk(x, z, [&](std::uint64_t, double xv, double zv) {
    m = std::max(m, std::fabs(xv - zv));
  });
  return m;
}

SparseVector project(const SparseVector& x, const IndexSet& K) {
  std::vector<SparseVector::Entry> kept;
  for (const std::uint64_t i : K) {
    if (i >= x.dim()) throw std::out_of_range("project: index out of range");
    const double v = x.value_at(i);
    if (v != 0.0) kept.push_back({i, v});
  }
  return SparseVector::from_entries(x.dim(), std::move(kept));
}

IndexSet heavy_set(const SparseVector& x, double eps) {
  std::vector<std::uint64_t> idx;
  for (const auto& e : x.entries()) {
    if (std::fabs(e.value) >= eps) idx.push_back(e.index);
  }
  return IndexSet::from_values(std::move(idx));
}

double lq_error(const SparseVector& x, const SparseVector& z, double q) {
  if (x.dim() != z.dim()) throw std::invalid_argument("lq_error: dimension mismatch");
  if (std::isinf(q)) return linf_dist(x, z);
  if (q < 1.0 || std::isnan(q)) throw std::invalid_argument("lq_error: q must be in [1, inf]");
  std::vector<SparseVector::Entry> diff;
  merged_walk(x, z, [&](std::uint64_t i, double xv, double zv) {
    if (xv != zv) diff.push_back({i, xv - zv});
  });
  return lp_norm(SparseVector::from_entries(x.dim(), std::move(diff)), q);
}

}  // namespace uapprox
