#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "segeo/rng.hpp"
#include "segeo/simd_vec.hpp"
#include "segeo/vmath.hpp"
#include "test_helpers.hpp"

using namespace segeo;

namespace {
double log_pos1(double x) {
  return vmath::log_pos<1>(simd::VecD<1>::broadcast(x)).v;
}
void sincos1(double x, double& s, double& c) {
  simd::VecD<1> vs, vc;
  vmath::sincos<1>(simd::VecD<1>::broadcast(x), vs, vc);
  s = vs.v;
  c = vc.v;
}
}  // namespace

TEST_CASE("log_pos matches libm over many magnitudes") {
  testutil::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double mag = rng.uniform(-300.0, 300.0);
    const double x = rng.uniform(1.0, 2.0) * std::pow(2.0, mag);
    const double got = log_pos1(x);
    const double want = std::log(x);
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("sincos matches libm over +-1e4") {
  testutil::Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-1e4, 1e4);
    double s, c;
    sincos1(x, s, c);
    CHECK(std::abs(s - std::sin(x)) < 1e-12);
    CHECK(std::abs(c - std::cos(x)) < 1e-12);
    CHECK(s * s + c * c == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normal_pair is a pure function of (seed, path, step, draw)") {
  simd::VecD<1> a0, a1, b0, b1;
  rng::normal_pair<1>(42, simd::VecU64<1>::broadcast(7), 3, 1, a0, a1);
  rng::normal_pair<1>(42, simd::VecU64<1>::broadcast(7), 3, 1, b0, b1);
  CHECK(a0.v == b0.v);
  CHECK(a1.v == b1.v);

  rng::normal_pair<1>(42, simd::VecU64<1>::broadcast(8), 3, 1, b0, b1);
  CHECK(a0.v != b0.v);
  rng::normal_pair<1>(43, simd::VecU64<1>::broadcast(7), 3, 1, b0, b1);
  CHECK(a0.v != b0.v);
  rng::normal_pair<1>(42, simd::VecU64<1>::broadcast(7), 4, 1, b0, b1);
  CHECK(a0.v != b0.v);
  rng::normal_pair<1>(42, simd::VecU64<1>::broadcast(7), 3, 2, b0, b1);
  CHECK(a0.v != b0.v);
}

TEST_CASE("normal_pair moments") {
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
  for (int i = 0; i < n; ++i) {
    simd::VecD<1> z0, z1;
    rng::normal_pair<1>(1234, simd::VecU64<1>::broadcast(i), 0, 0, z0, z1);
    for (double z : {z0.v, z1.v}) {
      sum += z;
      sum2 += z * z;
      sum3 += z * z * z;
    }
  }
  const double m = sum / (2 * n);
  const double v = sum2 / (2 * n) - m * m;
  const double skew = sum3 / (2 * n);
  // 2n = 2e5 draws: se(mean) ~ 0.0022, se(var) ~ 0.0032.
  CHECK(std::abs(m) < 0.01);
  CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(skew) < 0.03);
}
