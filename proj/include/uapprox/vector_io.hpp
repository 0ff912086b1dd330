#pragma once

#include <iosfwd>
#include <string>

#include "uapprox/sparse_vector.hpp"

namespace uapprox {

// Text vector file: first line "m <dim> p <p>", then one "<index> <value>"
// line per entry with 1-based indices. Indices are converted to the
// internal 0-based convention at this boundary. Duplicate indices are
// rejected.
struct VectorFile {
  SparseVector vector;
  double p = 1.0;
};

VectorFile read_vector(std::istream& in);
VectorFile read_vector_file(const std::string& path);

void write_vector(std::ostream& out, const SparseVector& x, double p);
void write_vector_file(const std::string& path, const SparseVector& x, double p);

}  // namespace uapprox
