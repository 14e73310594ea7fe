#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "segeo/affinity.hpp"
#include "test_helpers.hpp"

using namespace segeo;

namespace {

constexpr double kPi = std::numbers::pi;

const KernelGrid& fp_kernel() {
  static const KernelGrid grid = [] {
    KernelParams p;
    p.kind = KernelKind::FokkerPlanck;
    p.n_paths = 1000000;
    p.steps = 30;
    return testutil::cached_kernel(p);  // symmetrized by the provider
  }();
  return grid;
}

Stimulus make_stimulus(std::vector<LiftedPoint> pts) {
  Stimulus s;
  s.elements = std::move(pts);
  s.labels.assign(s.elements.size(), "");
  return s;
}

}  // namespace

TEST_CASE("single element gives the 1x1 zero-diagonal matrix") {
  const AffinityMatrix a = build_affinity(make_stimulus({{0, 0, 0}}), fp_kernel());
  REQUIRE(a.n == 1);
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.degenerate);  // no off-diagonal mass at all
}

TEST_CASE("collinear pairs bind more strongly than perpendicular pairs") {
  const AffinityMatrix collinear = build_affinity(
      make_stimulus({{0, 0, 0}, {5, 0, 0}}), fp_kernel());
  const AffinityMatrix perpendicular = build_affinity(
      make_stimulus({{0, 0, kPi / 2}, {5, 0, kPi / 2}}), fp_kernel());
  CHECK(collinear.at(0, 1) > perpendicular.at(0, 1));
}

TEST_CASE("affinity decays with distance along a collinear pair") {
  double prev = 1e300;
  for (double d : {5.0, 10.0, 20.0, 40.0}) {
    const AffinityMatrix a =
        build_affinity(make_stimulus({{0, 0, 0}, {d, 0, 0}}), fp_kernel());
    CHECK(a.at(0, 1) <= prev);
    prev = a.at(0, 1);
  }
}

TEST_CASE("matrix is exactly symmetric with zero diagonal") {
  FhhParams p;
  p.seed = 9;
  const Stimulus s = gen_fhh(p);
  const AffinityMatrix a = build_affinity(s, fp_kernel());
  REQUIRE(a.n == s.size());
  for (std::size_t i = 0; i < a.n; ++i) {
    CHECK(a.at(i, i) == 0.0);
    for (std::size_t j = 0; j < a.n; ++j) {
      CHECK(a.at(i, j) == a.at(j, i));  // bit-equal
      CHECK(a.at(i, j) >= 0.0);
    }
  }
  CHECK(a.kernel_digest == kernel_digest(fp_kernel()));
}

TEST_CASE("permuting elements permutes rows and columns") {
  const Stimulus s = make_stimulus(
      {{0, 0, 0}, {6, 1, 0.2}, {11, 3, 0.5}, {2, 9, 1.1}});
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  Stimulus sp;
  sp.mode = s.mode;
  for (std::size_t i : perm) sp.elements.push_back(s.elements[i]);
  sp.labels.assign(sp.elements.size(), "");

  const AffinityMatrix a = build_affinity(s, fp_kernel());
  const AffinityMatrix ap = build_affinity(sp, fp_kernel());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) {
      CHECK(ap.at(i, j) == a.at(perm[i], perm[j]));
    }
  }
}

TEST_CASE("mode mismatch between stimulus and kernel is rejected") {
  Stimulus s = make_stimulus({{0, 0, 0}, {5, 0, 0}});
  s.mode = Polarity::Polarized;
  CHECK_THROWS_AS(build_affinity(s, fp_kernel()), std::invalid_argument);
}

TEST_CASE("serialize_affinity emits n then n rows") {
  const AffinityMatrix a = build_affinity(
      make_stimulus({{0, 0, 0}, {5, 0, 0}, {10, 0, 0}}), fp_kernel());
  const std::string text = serialize_affinity(a);
  CHECK(text.substr(0, 2) == "3\n");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
