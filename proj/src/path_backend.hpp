#pragma once

// Internal interface between simulate_kernel and the lane-width-specific
// path integrators.

#include <cstdint>

#include "segeo/kernels.hpp"

namespace segeo::detail {

// Everything a backend needs to integrate paths and bin their passages.
struct SimPlan {
  KernelKind kind;
  double ds = 1.0;
  double sqrt_ds = 1.0;
  double drift = 1.0;       // ds itself (FP planar drift)
  double sigma_eff = 0.0;   // angular noise amplitude (FP)
  double sigma1_eff = 0.0;  // tangential noise amplitude (SRL)
  double sigma3_eff = 0.0;  // angular noise amplitude (SRL)
  double sigiso_eff = 0.0;  // planar noise amplitude (isotropic)
  double rho_eff = 0.0;     // angular noise amplitude (isotropic)
  std::uint32_t steps = 0;
  std::uint64_t seed = 0;
  GridGeom geom;
};

// Integrates paths [path_begin, path_end) and increments the passage
// counters; returns the number of retained (in-extent) passages.
using AccumulateFn = std::uint64_t (*)(const SimPlan& plan,
                                       std::uint64_t path_begin,
                                       std::uint64_t path_end,
                                       std::uint64_t* counts);

std::uint64_t accumulate_paths_scalar(const SimPlan& plan,
                                      std::uint64_t path_begin,
                                      std::uint64_t path_end,
                                      std::uint64_t* counts);

std::uint64_t accumulate_paths_avx2(const SimPlan& plan,
                                    std::uint64_t path_begin,
                                    std::uint64_t path_end,
                                    std::uint64_t* counts);

}  // namespace segeo::detail
