#pragma once

// Polynomial log and sincos shared by the scalar and SIMD path backends.
//
// libm implementations differ between scalar and vector code paths, so the
// stochastic integrators use these routines instead: a single operation
// sequence, templated over the lane width, giving bit-identical results in
// every backend. Accuracy is a few ulp, far below Monte-Carlo noise.

#include "segeo/simd_vec.hpp"

namespace segeo::vmath {

namespace detail {
// Exact double from a u64 lane holding a value < 2^52.
template <int N>
inline simd::VecD<N> small_u64_to_double(simd::VecU64<N> v) {
  using D = simd::VecD<N>;
  using U = simd::VecU64<N>;
  const U magic_bits = U::broadcast(0x4330000000000000ull);  // 2^52
  return D::from_bits(v | magic_bits) - D::broadcast(0x1p52);
}
}  // namespace detail

// Natural log for positive normal doubles.
template <int N>
inline simd::VecD<N> log_pos(simd::VecD<N> x) {
  using D = simd::VecD<N>;
  using U = simd::VecU64<N>;

  const U bits = x.bits();
  const U mant_mask = U::broadcast(0x000fffffffffffffull);
  const U one_bits = U::broadcast(0x3ff0000000000000ull);

  D e = detail::small_u64_to_double<N>(bits >> 52) - D::broadcast(1023.0);
  D m = D::from_bits((bits & mant_mask) | one_bits);  // [1, 2)

  // Keep the reduced argument in [sqrt(1/2), sqrt(2))
  const U ge = D::cmp_ge(m, D::broadcast(1.4142135623730951));
  m = D::select(ge, m * D::broadcast(0.5), m);
  e = e + D::select(ge, D::broadcast(1.0), D::broadcast(0.0));

  const D s = (m - D::broadcast(1.0)) / (m + D::broadcast(1.0));
  const D z = s * s;

  // 2*atanh(s) = 2s(1 + z/3 + z^2/5 + ...)
  D p = D::broadcast(2.0 / 17.0);
  p = p * z + D::broadcast(2.0 / 15.0);
  p = p * z + D::broadcast(2.0 / 13.0);
  p = p * z + D::broadcast(2.0 / 11.0);
  p = p * z + D::broadcast(2.0 / 9.0);
  p = p * z + D::broadcast(2.0 / 7.0);
  p = p * z + D::broadcast(2.0 / 5.0);
  p = p * z + D::broadcast(2.0 / 3.0);
  const D lg = (s + s) + s * (z * p);

  const D ln2_hi = D::broadcast(6.93147180369123816490e-01);
  const D ln2_lo = D::broadcast(1.90821492927058770002e-10);
  return e * ln2_hi + (e * ln2_lo + lg);
}

// Simultaneous sin/cos with Cody-Waite range reduction; adequate for
// |x| up to ~1e6 radians.
template <int N>
inline void sincos(simd::VecD<N> x, simd::VecD<N>& sin_out,
                   simd::VecD<N>& cos_out) {
  using D = simd::VecD<N>;
  using U = simd::VecU64<N>;

  const D two_over_pi = D::broadcast(6.36619772367581382433e-01);
  const D pio2_1 = D::broadcast(1.57079632673412561417e+00);
  const D pio2_2 = D::broadcast(6.07710050630396597660e-11);
  const D pio2_3 = D::broadcast(2.02226624879595063154e-21);

  const D k = D::round_nearest(x * two_over_pi);
  const D r = ((x - k * pio2_1) - k * pio2_2) - k * pio2_3;
  const D z = r * r;

  // Taylor polynomials on |r| <= pi/4
  D sp = D::broadcast(-7.64716373181981647590e-13);  // -1/15!
  sp = sp * z + D::broadcast(1.60590438368216145994e-10);
  sp = sp * z + D::broadcast(-2.50521083854417187751e-08);
  sp = sp * z + D::broadcast(2.75573192239198747630e-06);
  sp = sp * z + D::broadcast(-1.98412698412698412526e-04);
  sp = sp * z + D::broadcast(8.33333333333333333333e-03);
  sp = sp * z + D::broadcast(-1.66666666666666666667e-01);
  const D sr = r + (r * z) * sp;

  D cp = D::broadcast(4.77947733238738529744e-14);  // 1/16!
  cp = cp * z + D::broadcast(-1.14707455977297247139e-11);
  cp = cp * z + D::broadcast(2.08767569878680989792e-09);
  cp = cp * z + D::broadcast(-2.75573192239198747630e-07);
  cp = cp * z + D::broadcast(2.48015873015873015873e-05);
  cp = cp * z + D::broadcast(-1.38888888888888888889e-03);
  cp = cp * z + D::broadcast(4.16666666666666666667e-02);
  cp = cp * z + D::broadcast(-5.00000000000000000000e-01);
  const D cr = D::broadcast(1.0) + z * cp;

  // Quadrant bits of k via the round-trip-through-2^52 trick.
  const U kb = (k + D::broadcast(6755399441055744.0)).bits();  // 2^52 + 2^51
  const U one = U::broadcast(1);
  const U q0 = kb & one;
  const U q1 = (kb >> 1) & one;

  const U swap_mask = U::broadcast(0) - q0;  // all ones when quadrant is odd
  const U sin_sign = q1 << 63;
  const U cos_sign = (q0 ^ q1) << 63;

  const D s_base = D::select(swap_mask, cr, sr);
  const D c_base = D::select(swap_mask, sr, cr);
  sin_out = D::from_bits(s_base.bits() ^ sin_sign);
  cos_out = D::from_bits(c_base.bits() ^ cos_sign);
}

}  // namespace segeo::vmath
