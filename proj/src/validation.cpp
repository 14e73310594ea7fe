#include "segeo/validation.hpp"

#include <cmath>
#include <sstream>

namespace segeo {

namespace {

void validate_partition(const RegionPartition& p) {
  if (p.regions.empty()) {
    throw std::invalid_argument("partition must contain at least one region");
  }
  for (const Rect& r : p.regions) {
    if (!(r.x0 < r.x1) || !(r.y0 < r.y1)) {
      throw std::invalid_argument("partition rectangle is degenerate");
    }
  }
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    for (std::size_t j = i + 1; j < p.regions.size(); ++j) {
      const Rect& a = p.regions[i];
      const Rect& b = p.regions[j];
      const bool overlap = a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
      if (overlap) {
        throw std::invalid_argument("partition rectangles overlap");
      }
    }
  }
}

std::vector<double> normalize_or_throw(std::vector<double> mass) {
  double total = 0.0;
  for (double m : mass) total += m * m;
  if (total == 0.0) {
    throw degenerate_density_error(
        "no mass falls inside any partition region");
  }
  const double inv = 1.0 / std::sqrt(total);
  for (double& m : mass) m *= inv;
  return mass;
}

}  // namespace

RegionPartition make_grid_partition(double x0, double y0, double x1, double y1,
                                    std::size_t mx, std::size_t my) {
  if (mx == 0 || my == 0 || !(x0 < x1) || !(y0 < y1)) {
    throw std::invalid_argument("make_grid_partition: empty grid or flipped bounds");
  }
  RegionPartition p;
  const double wx = (x1 - x0) / static_cast<double>(mx);
  const double wy = (y1 - y0) / static_cast<double>(my);
  for (std::size_t iy = 0; iy < my; ++iy) {
    for (std::size_t ix = 0; ix < mx; ++ix) {
      p.regions.push_back({x0 + wx * static_cast<double>(ix),
                           y0 + wy * static_cast<double>(iy),
                           x0 + wx * static_cast<double>(ix + 1),
                           y0 + wy * static_cast<double>(iy + 1)});
    }
  }
  return p;
}

RegionPartition parse_partition(const std::string& text) {
  RegionPartition p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Rect r;
    if (!(ls >> r.x0 >> r.y0 >> r.x1 >> r.y1)) {
      std::string rest;
      ls.clear();
      if (ls >> rest) {
        throw std::invalid_argument("partition line " + std::to_string(lineno) +
                                    ": expected 'x0 y0 x1 y1'");
      }
      continue;  // blank or comment-only line
    }
    std::string extra;
    if (ls >> extra) {
      throw std::invalid_argument("partition line " + std::to_string(lineno) +
                                  ": trailing tokens");
    }
    p.regions.push_back(r);
  }
  validate_partition(p);
  return p;
}

std::vector<double> region_densities(const std::vector<MassPoint>& samples,
                                     const RegionPartition& partition) {
  validate_partition(partition);
  std::vector<double> mass(partition.count(), 0.0);
  for (const MassPoint& s : samples) {
    for (std::size_t i = 0; i < partition.count(); ++i) {
      if (partition.regions[i].contains(s.x, s.y)) {
        mass[i] += s.mass;
        break;
      }
    }
  }
  return normalize_or_throw(std::move(mass));
}

std::vector<double> region_densities(const KernelGrid& grid,
                                     const RegionPartition& partition) {
  validate_partition(partition);
  const GridGeom& g = grid.geom;
  std::vector<double> mass(partition.count(), 0.0);
  for (std::size_t ix = 0; ix < g.nx; ++ix) {
    const double x = g.node_x(ix);
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      const double y = g.node_y(iy);
      double column = 0.0;
      for (std::size_t it = 0; it < g.ntheta; ++it) {
        column += grid.values[g.index(ix, iy, it)];
      }
      if (column == 0.0) continue;
      for (std::size_t i = 0; i < partition.count(); ++i) {
        if (partition.regions[i].contains(x, y)) {
          mass[i] += column;
          break;
        }
      }
    }
  }
  return normalize_or_throw(std::move(mass));
}

double fit_error(const std::vector<double>& dp, const std::vector<double>& dt) {
  if (dp.size() != dt.size() || dp.empty()) {
    throw std::invalid_argument("fit_error: density vectors must match and be nonempty");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    const double d = dp[i] - dt[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(dp.size()));
}

double facilitation_score(const LiftedPoint& center,
                          const std::vector<LiftedPoint>& flankers,
                          const KernelGrid& grid) {
  if (flankers.empty()) return 0.0;

  double sum = 0.0;
  std::size_t support = 0;
  for (double v : grid.values) {
    if (v != 0.0) {
      sum += v;
      ++support;
    }
  }
  const double mean = support ? sum / static_cast<double>(support) : 0.0;

  double score = 0.0;
  for (const LiftedPoint& f : flankers) {
    score += eval_kernel(grid, center, f, grid.params.mode) - mean;
  }
  return score;
}

}  // namespace segeo
