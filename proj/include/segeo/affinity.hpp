#pragma once

// Neural affinity matrix: the connectivity kernel restricted to the
// activated elements of a stimulus.

#include <cstdint>
#include <vector>

#include "segeo/kernels.hpp"
#include "segeo/stimuli.hpp"

namespace segeo {

struct AffinityMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // row-major, n*n, exactly symmetric
  std::uint64_t kernel_digest = 0;
  bool degenerate = false;  // all entries zero

  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

// A[i][j] = kernel value between elements i and j, averaged with its
// transpose to absorb interpolation asymmetry; diagonal zero.
AffinityMatrix build_affinity(const Stimulus& s, const KernelGrid& grid);

// Plain-text dump: first line n, then n rows of n values.
std::string serialize_affinity(const AffinityMatrix& a);

}  // namespace segeo
