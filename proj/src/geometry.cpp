#include "segeo/geometry.hpp"

#include <cmath>

namespace segeo {

namespace {

double wrap_into(double value, double lo, double period) {
  double w = value - period * std::floor((value - lo) / period);
  // floor rounding can land exactly on the upper edge
  if (w >= lo + period) w -= period;
  if (w < lo) w += period;
  return w;
}

// In unpolarized mode an element's frame is defined only up to rotation by
// pi, which flips the sign of the planar displacement. Displacements are
// canonicalized to the dx > 0 half-plane (dy > 0 on the dx = 0 line) so
// that invert/group_displacement stay mutually consistent; kernel grids
// carry the matching point-reflection symmetry.
Displacement canonicalize(Displacement d, Polarity mode) {
  if (mode == Polarity::Unpolarized &&
      (d.dx < 0.0 || (d.dx == 0.0 && d.dy < 0.0))) {
    d.dx = -d.dx;
    d.dy = -d.dy;
  }
  return d;
}

}  // namespace

double wrap_angle(double theta, Polarity mode) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  return wrap_into(theta, 0.0, angular_period(mode));
}

double wrap_displacement_angle(double dtheta, Polarity mode) {
  if (!std::isfinite(dtheta)) {
    throw std::invalid_argument("wrap_displacement_angle: non-finite angle");
  }
  const double period = angular_period(mode);
  return wrap_into(dtheta, -0.5 * period, period);
}

Displacement group_displacement(const LiftedPoint& p, const LiftedPoint& q,
                                Polarity mode) {
  const double c = std::cos(-p.theta);
  const double s = std::sin(-p.theta);
  const double ex = q.x - p.x;
  const double ey = q.y - p.y;
  return canonicalize({c * ex - s * ey, s * ex + c * ey,
                       wrap_displacement_angle(q.theta - p.theta, mode)},
                      mode);
}

Displacement invert_displacement(const Displacement& d, Polarity mode) {
  const double c = std::cos(-d.dtheta);
  const double s = std::sin(-d.dtheta);
  return canonicalize({-(c * d.dx - s * d.dy), -(s * d.dx + c * d.dy),
                       wrap_displacement_angle(-d.dtheta, mode)},
                      mode);
}

}  // namespace segeo
