#pragma once

// Fixed-width vector wrappers used by the stochastic path kernels.
//
// The path integrators are written once against VecD<N>/VecU64<N> and
// instantiated twice: N = 1 (portable scalar reference) and N = 4 (AVX2,
// compiled in its own translation unit with -mavx2). Both instantiations
// perform the identical sequence of IEEE-754 double operations per lane,
// so the two backends produce bit-identical results and can be
// equivalence-tested against each other.

#include <bit>
#include <cmath>
#include <cstdint>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace segeo::simd {

template <int N> struct VecD;
template <int N> struct VecU64;

// ---------------------------------------------------------------- scalar

template <> struct VecU64<1> {
  std::uint64_t v;

  static VecU64 broadcast(std::uint64_t x) { return {x}; }
  static VecU64 load_lanes(const std::uint64_t* p) { return {p[0]}; }

  friend VecU64 operator&(VecU64 a, VecU64 b) { return {a.v & b.v}; }
  friend VecU64 operator|(VecU64 a, VecU64 b) { return {a.v | b.v}; }
  friend VecU64 operator^(VecU64 a, VecU64 b) { return {a.v ^ b.v}; }
  friend VecU64 operator+(VecU64 a, VecU64 b) { return {a.v + b.v}; }
  friend VecU64 operator-(VecU64 a, VecU64 b) { return {a.v - b.v}; }
  friend VecU64 operator<<(VecU64 a, int s) { return {a.v << s}; }
  friend VecU64 operator>>(VecU64 a, int s) { return {a.v >> s}; }

  // 32x32 -> 64 product of the low halves of each lane.
  static VecU64 mul_lo32(VecU64 a, VecU64 b) {
    return {(a.v & 0xffffffffu) * (b.v & 0xffffffffu)};
  }
};

template <> struct VecD<1> {
  double v;

  static VecD broadcast(double x) { return {x}; }
  static VecD from_bits(VecU64<1> b) { return {std::bit_cast<double>(b.v)}; }
  VecU64<1> bits() const { return {std::bit_cast<std::uint64_t>(v)}; }

  void store(double* out) const { out[0] = v; }

  friend VecD operator+(VecD a, VecD b) { return {a.v + b.v}; }
  friend VecD operator-(VecD a, VecD b) { return {a.v - b.v}; }
  friend VecD operator*(VecD a, VecD b) { return {a.v * b.v}; }
  friend VecD operator/(VecD a, VecD b) { return {a.v / b.v}; }
  friend VecD operator-(VecD a) { return {-a.v}; }

  static VecD sqrt(VecD a) { return {std::sqrt(a.v)}; }
  // Round to nearest, ties to even (matches _mm256_round_pd).
  static VecD round_nearest(VecD a) { return {std::nearbyint(a.v)}; }

  // Lane mask from a >= b, usable with select().
  static VecU64<1> cmp_ge(VecD a, VecD b) {
    return {a.v >= b.v ? ~std::uint64_t{0} : 0};
  }
  static VecD select(VecU64<1> mask, VecD a, VecD b) {
    return {mask.v ? a.v : b.v};
  }
};

// ----------------------------------------------------------------- AVX2

#if defined(__AVX2__)

template <> struct VecU64<4> {
  __m256i v;

  static VecU64 broadcast(std::uint64_t x) {
    return {_mm256_set1_epi64x(static_cast<long long>(x))};
  }
  static VecU64 load_lanes(const std::uint64_t* p) {
    return {_mm256_loadu_si256(reinterpret_cast<const __m256i*>(p))};
  }

  friend VecU64 operator&(VecU64 a, VecU64 b) { return {_mm256_and_si256(a.v, b.v)}; }
  friend VecU64 operator|(VecU64 a, VecU64 b) { return {_mm256_or_si256(a.v, b.v)}; }
  friend VecU64 operator^(VecU64 a, VecU64 b) { return {_mm256_xor_si256(a.v, b.v)}; }
  friend VecU64 operator+(VecU64 a, VecU64 b) { return {_mm256_add_epi64(a.v, b.v)}; }
  friend VecU64 operator-(VecU64 a, VecU64 b) { return {_mm256_sub_epi64(a.v, b.v)}; }
  friend VecU64 operator<<(VecU64 a, int s) { return {_mm256_slli_epi64(a.v, s)}; }
  friend VecU64 operator>>(VecU64 a, int s) { return {_mm256_srli_epi64(a.v, s)}; }

  static VecU64 mul_lo32(VecU64 a, VecU64 b) { return {_mm256_mul_epu32(a.v, b.v)}; }
};

template <> struct VecD<4> {
  __m256d v;

  static VecD broadcast(double x) { return {_mm256_set1_pd(x)}; }
  static VecD from_bits(VecU64<4> b) { return {_mm256_castsi256_pd(b.v)}; }
  VecU64<4> bits() const { return {_mm256_castpd_si256(v)}; }

  void store(double* out) const { _mm256_storeu_pd(out, v); }

  friend VecD operator+(VecD a, VecD b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend VecD operator-(VecD a, VecD b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend VecD operator*(VecD a, VecD b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend VecD operator/(VecD a, VecD b) { return {_mm256_div_pd(a.v, b.v)}; }
  friend VecD operator-(VecD a) {
    return {_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0))};
  }

  static VecD sqrt(VecD a) { return {_mm256_sqrt_pd(a.v)}; }
  static VecD round_nearest(VecD a) {
    return {_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC)};
  }

  static VecU64<4> cmp_ge(VecD a, VecD b) {
    return {_mm256_castpd_si256(_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ))};
  }
  static VecD select(VecU64<4> mask, VecD a, VecD b) {
    return {_mm256_blendv_pd(b.v, a.v, _mm256_castsi256_pd(mask.v))};
  }
};

#endif  // __AVX2__

}  // namespace segeo::simd
