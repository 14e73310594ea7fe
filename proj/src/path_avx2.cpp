// AVX2 backend: four paths per register, bit-identical to the scalar
// reference. This translation unit is the only one built with -mavx2.

#include "path_kernels.inl"

namespace segeo::detail {

std::uint64_t accumulate_paths_avx2(const SimPlan& plan,
                                    std::uint64_t path_begin,
                                    std::uint64_t path_end,
                                    std::uint64_t* counts) {
#if defined(__AVX2__)
  return accumulate_paths_impl<4>(plan, path_begin, path_end, counts);
#else
  return accumulate_paths_impl<1>(plan, path_begin, path_end, counts);
#endif
}

}  // namespace segeo::detail
