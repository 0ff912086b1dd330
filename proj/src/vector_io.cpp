#include "uapprox/vector_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace uapprox {

VectorFile read_vector(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("vector file: empty input");

  std::istringstream header(line);
  std::string m_tag, p_tag;
  std::uint64_t dim = 0;
  double p = 0.0;
  if (!(header >> m_tag >> dim >> p_tag >> p) || m_tag != "m" || p_tag != "p")
    throw std::runtime_error("vector file: header must be 'm <dim> p <p>'");

  std::vector<SparseVector::Entry> entries;
  std::unordered_set<std::uint64_t> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::uint64_t index1 = 0;
    double value = 0.0;
    if (!(row >> index1 >> value))
      throw std::runtime_error("vector file: malformed entry at line " +
                               std::to_string(lineno));
    if (index1 == 0 || index1 > dim)
      throw std::runtime_error("vector file: index " + std::to_string(index1) +
                               " out of [1, m] at line " + std::to_string(lineno));
    if (!seen.insert(index1).second)
      throw std::runtime_error("vector file: duplicate index " + std::to_string(index1) +
                               " at line " + std::to_string(lineno));
    entries.push_back({index1 - 1, value});
  }
  return VectorFile{SparseVector::from_entries(dim, std::move(entries)), p};
}

VectorFile read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  return read_vector(in);
}

void write_vector(std::ostream& out, const SparseVector& x, double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", p);
  out << "m " << x.dim() << " p " << buf << "\n";
  for (const auto& e : x.entries()) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.value);
    out << (e.index + 1) << " " << buf << "\n";
  }
}

void write_vector_file(const std::string& path, const SparseVector& x, double p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_vector(out, x, p);
}

}  // namespace uapprox
