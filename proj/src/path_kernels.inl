// Lane-width-generic path integrator, included by path_scalar.cpp (N = 1)
// and path_avx2.cpp (N = 4). Both instantiations execute the identical
// per-lane operation sequence; the equivalence test asserts bit-equal grids.

#include <array>
#include <cstdint>

#include "path_backend.hpp"
#include "segeo/rng.hpp"
#include "segeo/simd_vec.hpp"
#include "segeo/vmath.hpp"

namespace segeo::detail {

template <int N>
static std::uint64_t accumulate_paths_impl(const SimPlan& plan,
                                           std::uint64_t path_begin,
                                           std::uint64_t path_end,
                                           std::uint64_t* counts) {
  using D = simd::VecD<N>;
  using U = simd::VecU64<N>;

  const D ds = D::broadcast(plan.drift);
  const D sigma_eff = D::broadcast(plan.sigma_eff);
  const D sigma1_eff = D::broadcast(plan.sigma1_eff);
  const D sigma3_eff = D::broadcast(plan.sigma3_eff);
  const D sigiso_eff = D::broadcast(plan.sigiso_eff);
  const D rho_eff = D::broadcast(plan.rho_eff);

  std::uint64_t retained = 0;

  alignas(32) std::array<double, N> lx{}, ly{}, lt{};
  alignas(32) std::array<std::uint64_t, N> lane_path{};

  for (std::uint64_t base = path_begin; base < path_end; base += N) {
    for (int l = 0; l < N; ++l) lane_path[l] = base + l;
    const U path = U::load_lanes(lane_path.data());

    D x = D::broadcast(0.0);
    D y = D::broadcast(0.0);
    D th = D::broadcast(0.0);

    for (std::uint32_t s = 0; s < plan.steps; ++s) {
      D z0, z1;
      switch (plan.kind) {
        case KernelKind::FokkerPlanck: {
          rng::normal_pair<N>(plan.seed, path, s, 0, z0, z1);
          D ct, st;
          vmath::sincos<N>(th, st, ct);
          x = x + ds * ct;
          y = y + ds * st;
          th = th + sigma_eff * z0;
          break;
        }
        case KernelKind::SubRiemannianLaplacian: {
          rng::normal_pair<N>(plan.seed, path, s, 0, z0, z1);
          D ct, st;
          vmath::sincos<N>(th, st, ct);
          const D amp = sigma1_eff * z0;
          x = x + amp * ct;
          y = y + amp * st;
          th = th + sigma3_eff * z1;
          break;
        }
        case KernelKind::IsotropicLaplacian: {
          rng::normal_pair<N>(plan.seed, path, s, 0, z0, z1);
          D z2, z3;
          rng::normal_pair<N>(plan.seed, path, s, 1, z2, z3);
          x = x + sigiso_eff * z0;
          y = y + sigiso_eff * z1;
          th = th + rho_eff * z2;
          break;
        }
      }

      x.store(lx.data());
      y.store(ly.data());
      th.store(lt.data());
      for (int l = 0; l < N; ++l) {
        if (lane_path[l] >= path_end) continue;
        const long bin = plan.geom.flat_bin(lx[l], ly[l], lt[l]);
        if (bin >= 0) {
          ++counts[bin];
          ++retained;
        }
      }
    }
  }
  return retained;
}

}  // namespace segeo::detail
