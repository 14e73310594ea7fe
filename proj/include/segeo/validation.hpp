#pragma once

// Quantitative comparison machinery: region-density vectors, the mean-square
// fit error between them, and the flanker facilitation score.

#include <stdexcept>
#include <string>
#include <vector>

#include "segeo/geometry.hpp"
#include "segeo/kernels.hpp"

namespace segeo {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // x0 < x1, y0 < y1

  bool contains(double x, double y) const {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
};

struct RegionPartition {
  std::vector<Rect> regions;  // pairwise-disjoint interiors

  std::size_t count() const { return regions.size(); }
};

// Uniform M x M grid of rectangles covering [x0,x1] x [y0,y1].
RegionPartition make_grid_partition(double x0, double y0, double x1, double y1,
                                    std::size_t mx, std::size_t my);

// One rectangle per line: "x0 y0 x1 y1"; '#' comments and blank lines skipped.
RegionPartition parse_partition(const std::string& text);

struct degenerate_density_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MassPoint {
  double x = 0.0;
  double y = 0.0;
  double mass = 1.0;
};

// Per-region total mass, L2-normalized; mass outside every region ignored.
// Zero total mass inside the partition -> degenerate_density_error.
std::vector<double> region_densities(const std::vector<MassPoint>& samples,
                                     const RegionPartition& partition);

// Same, for the (x, y) marginal of a kernel grid (theta summed out at each
// spatial node).
std::vector<double> region_densities(const KernelGrid& grid,
                                     const RegionPartition& partition);

// E = sqrt( (1/M) * sum_i (dp_i - dt_i)^2 )
double fit_error(const std::vector<double>& dp, const std::vector<double>& dt);

// sum_f ( eval_kernel(grid, center, f) - mean ), where mean is the grid's
// mean value over its support; the zero-mean shift encodes inhibition.
double facilitation_score(const LiftedPoint& center,
                          const std::vector<LiftedPoint>& flankers,
                          const KernelGrid& grid);

}  // namespace segeo
