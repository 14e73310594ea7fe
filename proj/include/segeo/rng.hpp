#pragma once

// Counter-based random numbers for the path simulation.
//
// Philox4x32-10 keyed by the kernel seed, with the counter built from
// (path index, step index, draw index). Every normal deviate is a pure
// function of those four integers, so the simulation is deterministic and
// independent of worker count, lane width, and execution order.

#include <cstdint>

#include "segeo/simd_vec.hpp"
#include "segeo/vmath.hpp"

namespace segeo::rng {

template <int N>
struct Philox4x32 {
  using U = simd::VecU64<N>;

  // One 10-round block. Counter and key words are u32 values carried
  // zero-extended in 64-bit lanes.
  static void block(std::uint64_t seed, U c0, U c1, U c2, U c3, U& r0, U& r1,
                    U& r2, U& r3) {
    const U m0 = U::broadcast(0xD2511F53u);
    const U m1 = U::broadcast(0xCD9E8D57u);
    const U w0 = U::broadcast(0x9E3779B9u);
    const U w1 = U::broadcast(0xBB67AE85u);
    const U lo32 = U::broadcast(0xffffffffu);

    U k0 = U::broadcast(seed & 0xffffffffu);
    U k1 = U::broadcast(seed >> 32);

    U x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
      const U p0 = U::mul_lo32(m0, x0);
      const U p1 = U::mul_lo32(m1, x2);
      const U y0 = ((p1 >> 32) ^ x1 ^ k0) & lo32;
      const U y1 = p1 & lo32;
      const U y2 = ((p0 >> 32) ^ x3 ^ k1) & lo32;
      const U y3 = p0 & lo32;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
      k0 = (k0 + w0) & lo32;
      k1 = (k1 + w1) & lo32;
    }
    r0 = x0;
    r1 = x1;
    r2 = x2;
    r3 = x3;
  }
};

// Two standard normal deviates per (seed, path, step, draw) via Box-Muller.
template <int N>
inline void normal_pair(std::uint64_t seed, simd::VecU64<N> path,
                        std::uint32_t step, std::uint32_t draw,
                        simd::VecD<N>& z0, simd::VecD<N>& z1) {
  using D = simd::VecD<N>;
  using U = simd::VecU64<N>;

  const U lo32 = U::broadcast(0xffffffffu);
  U r0, r1, r2, r3;
  Philox4x32<N>::block(seed, path & lo32, path >> 32, U::broadcast(step),
                       U::broadcast(draw), r0, r1, r2, r3);

  // 52 random bits each, mapped to the open interval (0, 1)
  const U v1 = ((r0 << 32) | r1) >> 12;
  const U v2 = ((r2 << 32) | r3) >> 12;
  const D scale = D::broadcast(0x1p-52);
  const D half = D::broadcast(0.5);
  const D u1 = (vmath::detail::small_u64_to_double<N>(v1) + half) * scale;
  const D u2 = (vmath::detail::small_u64_to_double<N>(v2) + half) * scale;

  const D rad = D::sqrt(vmath::log_pos<N>(u1) * D::broadcast(-2.0));
  D s, c;
  vmath::sincos<N>(u2 * D::broadcast(6.28318530717958647693), s, c);
  z0 = rad * c;
  z1 = rad * s;
}

}  // namespace segeo::rng
