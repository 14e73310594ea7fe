// Scalar reference backend for the stochastic path integrator.

#include "path_kernels.inl"

namespace segeo::detail {

std::uint64_t accumulate_paths_scalar(const SimPlan& plan,
                                      std::uint64_t path_begin,
                                      std::uint64_t path_end,
                                      std::uint64_t* counts) {
  return accumulate_paths_impl<1>(plan, path_begin, path_end, counts);
}

}  // namespace segeo::detail
