#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "segeo/kernels.hpp"
#include "test_helpers.hpp"

using namespace segeo;

namespace {

constexpr double kPi = std::numbers::pi;

double total_mass(const KernelGrid& g) {
  double sum = 0.0;
  for (double v : g.values) sum += v;
  return sum * g.geom.bin_volume();
}

double l1_distance(const KernelGrid& a, const KernelGrid& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    d += std::abs(a.values[i] - b.values[i]);
  }
  return d;
}

// Mass-weighted spatial means of a grid.
void spatial_mean(const KernelGrid& g, double& mx, double& my) {
  double sum = 0.0, sx = 0.0, sy = 0.0;
  for (int ix = 0; ix < g.geom.nx; ++ix) {
    for (int iy = 0; iy < g.geom.ny; ++iy) {
      for (int it = 0; it < g.geom.ntheta; ++it) {
        const double v = g.values[g.geom.index(ix, iy, it)];
        sum += v;
        sx += v * g.geom.node_x(ix);
        sy += v * g.geom.node_y(iy);
      }
    }
  }
  mx = sx / sum;
  my = sy / sum;
}

}  // namespace

TEST_CASE("FP with zero angular noise collapses to the forward ray") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.sigma = 0.0;
  p.n_paths = 1000;
  p.steps = 20;
  const KernelGrid g = simulate_kernel(p);
  for (int ix = 0; ix < g.geom.nx; ++ix) {
    for (int iy = 0; iy < g.geom.ny; ++iy) {
      for (int it = 0; it < g.geom.ntheta; ++it) {
        const double v = g.values[g.geom.index(ix, iy, it)];
        if (v == 0.0) continue;
        // Unpolarized histograms are folded under planar point reflection,
        // so the ray's mass shows up on both +x and -x.
        const double x = g.geom.node_x(ix);
        CHECK(std::abs(x) > 0.5 * g.geom.wx);
        CHECK(std::abs(x) <= 20.0 + 0.5 * g.geom.wx);
        CHECK(std::abs(g.geom.node_y(iy)) <= 0.5 * g.geom.wy);
        CHECK(std::abs(wrap_displacement_angle(g.geom.node_theta(it),
                                               p.mode)) <= 0.5 * g.geom.wt);
      }
    }
  }
}

TEST_CASE("passage counting and normalization when nothing is discarded") {
  // 30 steps of unit length can never leave the +-50 px extent.
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.n_paths = 20000;
  p.steps = 30;
  const KernelGrid g = simulate_kernel(p);
  CHECK(g.retained_count == p.n_paths * p.steps);
  CHECK(total_mass(g) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate kernel when the extent discards all mass") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.sigma = 0.0;
  p.n_paths = 100;
  p.steps = 10;
  // Deterministic unit drift along +x leaves a +-0.4 px extent on the
  // first step, so every state of every path is discarded.
  GridSpec spec;
  spec.nx = spec.ny = 5;
  spec.half_width_x = spec.half_width_y = 0.4;
  CHECK_THROWS_AS(simulate_kernel(p, spec), degenerate_kernel_error);
}

TEST_CASE("FP drift is forward and has zero lateral mean") {
  // 8 independent seeds; the spread of the per-seed means estimates the
  // Monte-Carlo standard error of the lateral mean.
  std::vector<double> mys;
  double grand_my = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    KernelParams p;
    p.kind = KernelKind::FokkerPlanck;
    // Polarized mode keeps the histogram unfolded so the forward drift is
    // visible in the spatial mean.
    p.mode = Polarity::Polarized;
    p.n_paths = 50000;
    p.steps = 30;
    p.seed = seed;
    const KernelGrid g = simulate_kernel(p);
    double mx, my;
    spatial_mean(g, mx, my);
    CHECK(mx > 1.0);  // strong forward drift
    mys.push_back(my);
    grand_my += my / 8.0;
  }
  double var = 0.0;
  for (double my : mys) var += (my - grand_my) * (my - grand_my) / 7.0;
  const double se = std::sqrt(var / 8.0);
  CHECK(std::abs(grand_my) < 3.0 * se + 1e-12);
}

TEST_CASE("Monte-Carlo error shrinks with path count") {
  auto seeded = [](std::uint64_t n_paths, std::uint64_t seed) {
    KernelParams p;
    p.kind = KernelKind::FokkerPlanck;
    p.n_paths = n_paths;
    p.steps = 30;
    p.seed = seed;
    return testutil::cached_kernel(p);
  };
  const double d_small = l1_distance(seeded(250000, 201), seeded(250000, 202));
  const double d_large = l1_distance(seeded(1000000, 201), seeded(1000000, 202));
  // 1/sqrt(n) predicts a factor 2; require any shrink below the small-n gap.
  CHECK(d_large < d_small);
  CHECK(d_large > 0.25 * d_small);  // and not implausibly fast
}

TEST_CASE("symmetrize: fixed point, idempotence") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.n_paths = 20000;
  p.steps = 12;
  const KernelGrid g = simulate_kernel(p);

  // An all-equal grid is a fixed point wherever the inverted displacement
  // stays inside the extent; near the corners the inverse leaves the box and
  // the mirrored term vanishes.
  KernelGrid flat = g;
  for (double& v : flat.values) v = 0.125;
  const KernelGrid flat_sym = symmetrize(flat);
  const GridGeom& geom = flat_sym.geom;
  for (int ix = 0; ix < geom.nx; ++ix) {
    for (int iy = 0; iy < geom.ny; ++iy) {
      for (int it = 0; it < geom.ntheta; ++it) {
        const Displacement d{geom.node_x(ix), geom.node_y(iy),
                             geom.node_theta(it)};
        const Displacement inv = invert_displacement(d, p.mode);
        if (std::abs(inv.dx) > geom.half_width_x - geom.wx) continue;
        if (std::abs(inv.dy) > geom.half_width_y - geom.wy) continue;
        CHECK(flat_sym.values[geom.index(ix, iy, it)] ==
              doctest::Approx(0.125));
      }
    }
  }

  const KernelGrid s1 = symmetrize(g);
  CHECK(s1.symmetrized);
  // A grid already flagged symmetrized is returned unchanged.
  const KernelGrid s2 = symmetrize(s1);
  for (std::size_t i = 0; i < s1.values.size(); ++i) {
    CHECK(s2.values[i] == doctest::Approx(s1.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("SRL kernel is nearly symmetric already") {
  KernelParams p;
  p.kind = KernelKind::SubRiemannianLaplacian;
  p.n_paths = 1000000;
  p.steps = 30;
  const KernelGrid g = testutil::cached_kernel(p);
  const KernelGrid s = symmetrize(g);
  double change = 0.0, total = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    change += std::abs(s.values[i] - g.values[i]);
    total += std::abs(g.values[i]);
  }
  CHECK(change / total < 0.10);
}

TEST_CASE("eval_kernel interpolation and extent") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.n_paths = 50000;
  p.steps = 20;
  const KernelGrid g = simulate_kernel(p);

  // Exactly at a bin node the interpolant returns the stored value.
  const LiftedPoint origin{0, 0, 0};
  for (int ix : {55, 60, 70}) {
    for (int iy : {50, 52, 57}) {
      for (int it : {0, 10, 32}) {
        const double node_t = g.geom.node_theta(it);
        const LiftedPoint q{g.geom.node_x(ix), g.geom.node_y(iy),
                            wrap_angle(node_t, p.mode)};
        const double got = eval_kernel(g, origin, q, p.mode);
        CHECK(got ==
              doctest::Approx(g.values[g.geom.index(ix, iy, it)]).epsilon(1e-12));
      }
    }
  }

  // Beyond the planar extent the kernel is zero by decision.
  CHECK(eval_kernel(g, origin, {120.0, 0.0, 0.0}, p.mode) == 0.0);

  // Mode mismatch is rejected.
  CHECK_THROWS_AS(eval_kernel(g, origin, origin, Polarity::Polarized),
                  std::invalid_argument);
}

TEST_CASE("symmetrized kernel is exchange symmetric") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.n_paths = 1000000;
  p.steps = 30;
  const KernelGrid g = testutil::cached_kernel(p);  // provider symmetrizes FP
  REQUIRE(g.symmetrized);
  double vmax = 0.0;
  for (double v : g.values) vmax = std::max(vmax, v);
  testutil::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const LiftedPoint a{rng.uniform(-20, 20), rng.uniform(-20, 20),
                        wrap_angle(rng.uniform(0, 6), p.mode)};
    const LiftedPoint b{rng.uniform(-20, 20), rng.uniform(-20, 20),
                        wrap_angle(rng.uniform(0, 6), p.mode)};
    const double ab = eval_kernel(g, a, b, p.mode);
    const double ba = eval_kernel(g, b, a, p.mode);
    CHECK(std::abs(ab - ba) <= 1e-6 * vmax);
  }
}

TEST_CASE("FP anisotropy: forward cone beats lateral cone") {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.n_paths = 100000;
  p.steps = 30;
  const ConeMasses cones = cone_masses(simulate_kernel(p));
  CHECK(cones.forward > cones.lateral);
}

TEST_CASE("isotropic kernel planar marginal is reflection symmetric") {
  KernelParams p;
  p.kind = KernelKind::IsotropicLaplacian;
  p.n_paths = 200000;
  p.steps = 30;
  const KernelGrid g = simulate_kernel(p);

  // theta-marginal counts per spatial bin.
  const int nx = g.geom.nx, ny = g.geom.ny;
  std::vector<double> counts(static_cast<std::size_t>(nx) * ny, 0.0);
  const double to_count =
      static_cast<double>(p.n_paths * p.steps) * g.geom.bin_volume();
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      double s = 0.0;
      for (int it = 0; it < g.geom.ntheta; ++it) {
        s += g.values[g.geom.index(ix, iy, it)];
      }
      counts[static_cast<std::size_t>(ix) * ny + iy] = s * to_count;
    }
  }
  auto at = [&](int ix, int iy) {
    return counts[static_cast<std::size_t>(ix) * ny + iy];
  };
  // Compare each bin against its mirror and transpose.  Counts are not
  // Poisson: the short steps make a path revisit the same bin repeatedly, so
  // within-path clustering inflates the variance by up to the path length.
  // Use 3 standard errors with that worst-case cluster factor.
  const double cluster = static_cast<double>(p.steps);
  int violations = 0, compared = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const double c = at(ix, iy);
      for (const double m : {at(nx - 1 - ix, iy), at(iy, ix)}) {
        if (c + m < 25.0) continue;  // too sparse for a Gaussian bound
        ++compared;
        if (std::abs(c - m) > 3.0 * std::sqrt(cluster * (c + m)) + 1.0) {
          ++violations;
        }
      }
    }
  }
  // The isotropic kernel is tight (a few px), so only the central disc of
  // bins clears the sparsity floor.
  REQUIRE(compared > 50);
  // A 3-sigma test is expected to fail ~0.3% of the time per pair.
  CHECK(violations <= compared / 50 + 2);
}
