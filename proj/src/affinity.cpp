#include "segeo/affinity.hpp"

#include <sstream>

namespace segeo {

AffinityMatrix build_affinity(const Stimulus& s, const KernelGrid& grid) {
  if (s.mode != grid.params.mode) {
    throw std::invalid_argument(
        "build_affinity: stimulus and kernel polarity modes differ");
  }
  const std::size_t n = s.elements.size();
  AffinityMatrix a;
  a.n = n;
  a.values.assign(n * n, 0.0);
  a.kernel_digest = kernel_digest(grid);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double vij = eval_kernel(grid, s.elements[i], s.elements[j], s.mode);
      const double vji = eval_kernel(grid, s.elements[j], s.elements[i], s.mode);
      const double v = 0.5 * (vij + vji);
      a.at(i, j) = v;
      a.at(j, i) = v;  // same stored double: exact symmetry
      total += v;
    }
  }
  a.degenerate = total == 0.0;
  return a;
}

std::string serialize_affinity(const AffinityMatrix& a) {
  std::ostringstream out;
  out.precision(17);
  out << a.n << "\n";
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      if (j) out << " ";
      out << a.at(i, j);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace segeo
