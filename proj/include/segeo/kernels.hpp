#pragma once

// Monte-Carlo estimation of the time-integrated connectivity kernels
// (Fokker-Planck, sub-Riemannian Laplacian, isotropic Laplacian),
// symmetrization, trilinear evaluation through the SE(2) group structure,
// and a binary cache file.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "segeo/geometry.hpp"

namespace segeo {

enum class KernelKind : std::uint8_t {
  FokkerPlanck = 0,
  SubRiemannianLaplacian = 1,
  IsotropicLaplacian = 2,
};

const char* to_string(KernelKind kind);

struct KernelParams {
  KernelKind kind = KernelKind::FokkerPlanck;
  double sigma = 0.15;      // angular std-dev per unit step (FP)
  double sigma1 = 1.2;      // tangential std-dev (SRL)
  double sigma3 = 0.11;     // angular std-dev (SRL)
  double sigma_iso = 0.15;  // planar std-dev (isotropic)
  double rho = 0.15;        // angular std-dev (isotropic)
  std::uint64_t n_paths = 1'000'000;
  std::uint64_t steps = 30;  // H, steps per path
  double step = 1.0;         // arc length per step, pixel units
  std::uint64_t seed = 0;
  Polarity mode = Polarity::Unpolarized;
};

struct GridSpec {
  int nx = 101;
  int ny = 101;
  int ntheta = 64;
  double half_width_x = 50.0;
  double half_width_y = 50.0;
};

// Bin geometry. Spatial nodes are symmetric around 0 (odd counts put a
// node on the pole); theta nodes start at -period/2 and are cyclic.
struct GridGeom {
  int nx = 0, ny = 0, ntheta = 0;
  double half_width_x = 0.0, half_width_y = 0.0;
  double period = 0.0;
  double wx = 0.0, wy = 0.0, wt = 0.0;

  static GridGeom make(const GridSpec& spec, Polarity mode);

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * ny * ntheta;
  }
  std::size_t index(int ix, int iy, int it) const {  // x-major
    return (static_cast<std::size_t>(ix) * ny + iy) * ntheta + it;
  }
  double bin_volume() const { return wx * wy * wt; }
  double node_x(int ix) const { return (ix - (nx - 1) / 2) * wx; }
  double node_y(int iy) const { return (iy - (ny - 1) / 2) * wy; }
  double node_theta(int it) const { return it * wt - 0.5 * period; }

  // Flat bin index for a path state, or -1 when (x, y) is outside the
  // extent. theta wraps cyclically.
  long flat_bin(double x, double y, double theta) const;
};

// A 3D histogram over displacement coordinates approximating a
// time-integrated fundamental solution.
struct KernelGrid {
  GridGeom geom;
  KernelParams params;
  bool symmetrized = false;
  std::uint64_t retained_count = 0;  // raw passage count before normalization
  std::vector<double> values;        // x-major, nonnegative
};

enum class PathBackend { Auto, Scalar, Avx2 };

bool avx2_available();

struct degenerate_kernel_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulates n_paths random paths of H steps from the origin and averages
// their passages over the grid bins. Deterministic for a fixed seed,
// independent of worker count and backend.
KernelGrid simulate_kernel(const KernelParams& params,
                           const GridSpec& spec = {},
                           PathBackend backend = PathBackend::Auto,
                           int n_workers = 0);

// Half-sum of the kernel with its pullback under displacement inversion.
// A grid already flagged symmetrized is returned unchanged.
KernelGrid symmetrize(const KernelGrid& grid);

// Plain trilinear interpolation at a displacement; cyclic in theta,
// zero outside the planar extent.
double interpolate(const KernelGrid& grid, const Displacement& d);

// Kernel value between two lifted points via the left-invariant
// displacement. On symmetrized grids evaluates the exchange-symmetric
// half-sum so that eval(p, q) == eval(q, p) up to roundoff.
double eval_kernel(const KernelGrid& grid, const LiftedPoint& p,
                   const LiftedPoint& q, Polarity mode);

// Planar mass split by direction from the pole: forward is |dy| < |dx|,
// lateral is |dy| > |dx| (diagonal bins excluded). The FP kernel is
// strongly forward-biased; the isotropic one is not.
struct ConeMasses {
  double forward = 0.0;
  double lateral = 0.0;
};
ConeMasses cone_masses(const KernelGrid& grid);

struct kernel_format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void save_kernel(const KernelGrid& grid, const std::filesystem::path& path);
KernelGrid load_kernel(const std::filesystem::path& path);

// FNV-1a digest of parameters and bin geometry; used for cache file naming
// and for the provenance field of affinity matrices.
std::uint64_t kernel_digest(const KernelGrid& grid);

}  // namespace segeo
