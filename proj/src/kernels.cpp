#include "segeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

#include "path_backend.hpp"

namespace segeo {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::FokkerPlanck: return "fokker-planck";
    case KernelKind::SubRiemannianLaplacian: return "sub-riemannian-laplacian";
    case KernelKind::IsotropicLaplacian: return "isotropic-laplacian";
  }
  return "?";
}

GridGeom GridGeom::make(const GridSpec& spec, Polarity mode) {
  if (spec.nx <= 0 || spec.ny <= 0 || spec.ntheta <= 0 ||
      spec.half_width_x <= 0.0 || spec.half_width_y <= 0.0) {
    throw std::invalid_argument("GridGeom: zero-sized grid");
  }
  GridGeom g;
  g.nx = spec.nx;
  g.ny = spec.ny;
  g.ntheta = spec.ntheta;
  g.half_width_x = spec.half_width_x;
  g.half_width_y = spec.half_width_y;
  g.period = angular_period(mode);
  g.wx = 2.0 * spec.half_width_x / spec.nx;
  g.wy = 2.0 * spec.half_width_y / spec.ny;
  g.wt = g.period / spec.ntheta;
  return g;
}

long GridGeom::flat_bin(double x, double y, double theta) const {
  const double gx = x / wx + 0.5 + 0.5 * (nx - 1);
  if (gx < 0.0 || gx >= nx) return -1;
  const double gy = y / wy + 0.5 + 0.5 * (ny - 1);
  if (gy < 0.0 || gy >= ny) return -1;
  double t = theta - period * std::floor(theta / period + 0.5);
  int it = static_cast<int>(std::floor((t + 0.5 * period) / wt + 0.5));
  if (it >= ntheta) it -= ntheta;
  if (it < 0) it += ntheta;
  return static_cast<long>(
      index(static_cast<int>(gx), static_cast<int>(gy), it));
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

detail::SimPlan make_plan(const KernelParams& p, const GridGeom& geom) {
  detail::SimPlan plan;
  plan.kind = p.kind;
  plan.ds = p.step;
  plan.sqrt_ds = std::sqrt(p.step);
  plan.drift = p.step;
  // Noise amplitudes scale diffusively with the step length.
  plan.sigma_eff = p.sigma * plan.sqrt_ds;
  plan.sigma1_eff = p.sigma1 * plan.sqrt_ds;
  plan.sigma3_eff = p.sigma3 * plan.sqrt_ds;
  plan.sigiso_eff = p.sigma_iso * plan.sqrt_ds;
  plan.rho_eff = p.rho * plan.sqrt_ds;
  plan.steps = static_cast<std::uint32_t>(p.steps);
  plan.seed = p.seed;
  plan.geom = geom;
  return plan;
}

void validate_params(const KernelParams& p) {
  if (p.n_paths < 1 || p.steps < 1) {
    throw std::invalid_argument("simulate_kernel: n_paths and steps must be >= 1");
  }
  if (!(p.step > 0.0)) {
    throw std::invalid_argument("simulate_kernel: step must be positive");
  }
  if (p.sigma < 0.0 || p.sigma1 < 0.0 || p.sigma3 < 0.0 || p.sigma_iso < 0.0 ||
      p.rho < 0.0) {
    throw std::invalid_argument("simulate_kernel: negative std-dev");
  }
}

}  // namespace

KernelGrid simulate_kernel(const KernelParams& params, const GridSpec& spec,
                           PathBackend backend, int n_workers) {
  validate_params(params);
  const GridGeom geom = GridGeom::make(spec, params.mode);
  const detail::SimPlan plan = make_plan(params, geom);

  detail::AccumulateFn accumulate = nullptr;
  switch (backend) {
    case PathBackend::Scalar:
      accumulate = detail::accumulate_paths_scalar;
      break;
    case PathBackend::Avx2:
      if (!avx2_available()) {
        throw std::invalid_argument("simulate_kernel: AVX2 not available");
      }
      accumulate = detail::accumulate_paths_avx2;
      break;
    case PathBackend::Auto:
      accumulate = avx2_available() ? detail::accumulate_paths_avx2
                                    : detail::accumulate_paths_scalar;
      break;
  }

  if (n_workers <= 0) {
    n_workers = static_cast<int>(
        std::max(1u, std::thread::hardware_concurrency()));
  }
  const std::uint64_t n = params.n_paths;
  const std::uint64_t chunk =
      std::max<std::uint64_t>(4, ((n / n_workers + 3) / 4) * 4);
  const int used =
      static_cast<int>(std::min<std::uint64_t>(n_workers, (n + chunk - 1) / chunk));

  std::vector<std::vector<std::uint64_t>> partial(
      used, std::vector<std::uint64_t>(geom.size(), 0));
  std::vector<std::uint64_t> retained(used, 0);

  auto run = [&](int w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin < end) {
      retained[w] = accumulate(plan, begin, end, partial[w].data());
    }
  };
  if (used == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (int w = 0; w < used; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  // Counter merge is an exact integer sum; worker count cannot change it.
  std::vector<std::uint64_t> counts(geom.size(), 0);
  std::uint64_t total_retained = 0;
  for (int w = 0; w < used; ++w) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += partial[w][i];
    total_retained += retained[w];
  }
  if (total_retained == 0) {
    throw degenerate_kernel_error(
        "simulate_kernel: all path mass fell outside the grid extent");
  }

  KernelGrid grid;
  grid.geom = geom;
  grid.params = params;
  grid.retained_count = total_retained;
  grid.values.resize(geom.size());

  // Unpolarized orientation is the pi-quotient: an element stands for both
  // contrasts, so the histogram is folded under planar point reflection
  // (bin centers map to bin centers exactly).
  double mass_per_count = 1.0;
  if (params.mode == Polarity::Unpolarized) {
    std::vector<std::uint64_t> folded(counts.size());
    for (int ix = 0; ix < geom.nx; ++ix) {
      for (int iy = 0; iy < geom.ny; ++iy) {
        for (int it = 0; it < geom.ntheta; ++it) {
          folded[geom.index(ix, iy, it)] =
              counts[geom.index(ix, iy, it)] +
              counts[geom.index(geom.nx - 1 - ix, geom.ny - 1 - iy, it)];
        }
      }
    }
    counts.swap(folded);
    mass_per_count = 0.5;
  }

  const double norm =
      mass_per_count /
      (static_cast<double>(params.n_paths) * static_cast<double>(params.steps) *
       geom.bin_volume());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    grid.values[i] = static_cast<double>(counts[i]) * norm;
  }
  return grid;
}

double interpolate(const KernelGrid& grid, const Displacement& d) {
  const GridGeom& g = grid.geom;
  if (std::abs(d.dx) > g.half_width_x || std::abs(d.dy) > g.half_width_y) {
    return 0.0;
  }
  const double gx = d.dx / g.wx + 0.5 * (g.nx - 1);
  const double gy = d.dy / g.wy + 0.5 * (g.ny - 1);
  double t = d.dtheta - g.period * std::floor(d.dtheta / g.period + 0.5);
  double gt = (t + 0.5 * g.period) / g.wt;
  if (gt >= g.ntheta) gt -= g.ntheta;

  const int ix0 = static_cast<int>(std::floor(gx));
  const int iy0 = static_cast<int>(std::floor(gy));
  const int it0 = static_cast<int>(std::floor(gt));
  const double fx = gx - ix0;
  const double fy = gy - iy0;
  const double ft = gt - it0;

  auto value_at = [&](int ix, int iy, int it) -> double {
    if (ix < 0 || ix >= g.nx || iy < 0 || iy >= g.ny) return 0.0;
    it %= g.ntheta;
    if (it < 0) it += g.ntheta;
    return grid.values[g.index(ix, iy, it)];
  };

  double acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double wxf = a ? fx : 1.0 - fx;
    for (int b = 0; b < 2; ++b) {
      const double wyf = b ? fy : 1.0 - fy;
      for (int c = 0; c < 2; ++c) {
        const double wtf = c ? ft : 1.0 - ft;
        acc += wxf * wyf * wtf * value_at(ix0 + a, iy0 + b, it0 + c);
      }
    }
  }
  return acc;
}

KernelGrid symmetrize(const KernelGrid& grid) {
  if (grid.symmetrized) return grid;
  KernelGrid out = grid;
  const GridGeom& g = grid.geom;
  const Polarity mode = grid.params.mode;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int it = 0; it < g.ntheta; ++it) {
        const Displacement d{g.node_x(ix), g.node_y(iy), g.node_theta(it)};
        const double mirrored = interpolate(grid, invert_displacement(d, mode));
        out.values[g.index(ix, iy, it)] =
            0.5 * (grid.values[g.index(ix, iy, it)] + mirrored);
      }
    }
  }
  out.symmetrized = true;
  return out;
}

double eval_kernel(const KernelGrid& grid, const LiftedPoint& p,
                   const LiftedPoint& q, Polarity mode) {
  if (angular_period(mode) != grid.geom.period) {
    throw std::invalid_argument("eval_kernel: polarity mode does not match grid");
  }
  const Displacement d = group_displacement(p, q, mode);
  if (!grid.symmetrized) return interpolate(grid, d);
  return 0.5 * (interpolate(grid, d) +
                interpolate(grid, invert_displacement(d, mode)));
}

ConeMasses cone_masses(const KernelGrid& grid) {
  const GridGeom& g = grid.geom;
  ConeMasses out;
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    const double ax = std::abs(g.node_x(ix));
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      const double ay = std::abs(g.node_y(iy));
      if (ax == ay) continue;
      double column = 0.0;
      for (std::size_t it = 0; it < g.ntheta; ++it) {
        column += grid.values[g.index(ix, iy, it)];
      }
      (ay < ax ? out.forward : out.lateral) += column * g.bin_volume();
    }
  }
  return out;
}

std::uint64_t kernel_digest(const KernelGrid& grid) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const KernelParams& p = grid.params;
  mix(&p.kind, sizeof(p.kind));
  mix(&p.sigma, sizeof(p.sigma));
  mix(&p.sigma1, sizeof(p.sigma1));
  mix(&p.sigma3, sizeof(p.sigma3));
  mix(&p.sigma_iso, sizeof(p.sigma_iso));
  mix(&p.rho, sizeof(p.rho));
  mix(&p.n_paths, sizeof(p.n_paths));
  mix(&p.steps, sizeof(p.steps));
  mix(&p.step, sizeof(p.step));
  mix(&p.seed, sizeof(p.seed));
  mix(&p.mode, sizeof(p.mode));
  mix(&grid.geom.nx, sizeof(grid.geom.nx));
  mix(&grid.geom.ny, sizeof(grid.geom.ny));
  mix(&grid.geom.ntheta, sizeof(grid.geom.ntheta));
  mix(&grid.geom.half_width_x, sizeof(grid.geom.half_width_x));
  mix(&grid.geom.half_width_y, sizeof(grid.geom.half_width_y));
  mix(&grid.symmetrized, sizeof(grid.symmetrized));
  return h;
}

}  // namespace segeo
