#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// Pipeline stage a measurement is charged to.
enum class Stage : int {
  kSketch = 1,  // stage 1: bucket-selection sketch
  kSpot = 2,    // stage 2: spotting
};

// Information-cost counters. n1/n2 count linear measurements of stages 1
// and 2, n3 counts direct entry queries. Counters only increase.
struct CostLedger {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t n3 = 0;

  std::uint64_t total() const noexcept { return n1 + n2 + n3; }
};

// Sole access path to the hidden input vector. Evaluates linear
// functionals given as pure coefficient functions over the index domain
// and direct entry queries, charging every access to the ledger. The
// hidden vector itself is never exposed.
//
// Coefficients are supplied as evaluable functions, never as length-m
// arrays: the index domain can far exceed memory, and every functional
// used by the pipeline is an index-local formula. Accumulation happens in
// long double so that shrink coefficients of magnitude up to ~2^62 keep
// integer precision (on x86-64 long double carries a 64-bit mantissa).
class MeasurementOracle {
 public:
  explicit MeasurementOracle(SparseVector hidden) : hidden_(std::move(hidden)) {}

  std::uint64_t dim() const noexcept { return hidden_.dim(); }

  // sum_i coeff(i) * x_i over the hidden support; charges one measurement
  // to the given stage. Zero entries contribute zero, so restricting the
  // sum to the support is exact.
  template <class Coeff>
  long double measure(const Coeff& coeff, Stage stage) {
    long double acc = 0.0L;
    for (const auto& e : hidden_.entries()) {
      acc += static_cast<long double>(coeff(e.index)) * e.value;
    }
    charge(stage);
    return acc;
  }

  // Exact entry value; charges n3 even for zero entries.
  double query_entry(std::uint64_t i) {
    if (i >= hidden_.dim())
      throw std::out_of_range("MeasurementOracle::query_entry: index out of range");
    ++ledger_.n3;
    return hidden_.value_at(i);
  }

  CostLedger cost_report() const noexcept { return ledger_; }
  Stage current_stage() const noexcept { return current_stage_; }

 private:
  void charge(Stage stage) {
    current_stage_ = stage;
    if (stage == Stage::kSketch) {
      ++ledger_.n1;
    } else {
      ++ledger_.n2;
    }
  }

  SparseVector hidden_;
  CostLedger ledger_;
  Stage current_stage_ = Stage::kSketch;
};

}  // namespace uapprox
