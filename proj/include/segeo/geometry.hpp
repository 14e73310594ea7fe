#pragma once

// SE(2) group structure shared by the whole engine: lifted points
// (x, y, theta), left-invariant displacements between them, and the
// angle conventions of the two polarity modes.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace segeo {

// Polarized stimuli carry contrast sign, so orientation lives on the full
// circle; unpolarized orientation is the pi-quotient.
enum class Polarity { Polarized, Unpolarized };

inline double angular_period(Polarity mode) {
  return mode == Polarity::Polarized ? 2.0 * std::numbers::pi : std::numbers::pi;
}

// A point of R^2 x S^1, the cortical lift of an oriented stimulus element.
// Positions are in abstract pixel units, theta in radians.
struct LiftedPoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

// Offset from one lifted point to another expressed in the frame of the
// source point; the coordinates in which kernel grids are indexed.
// dtheta is wrapped into [-P/2, P/2) for the mode period P, so collinear
// pairs sit at dtheta = 0.
struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

// Wraps theta into the canonical point range of the mode:
// [0, 2pi) polarized, [0, pi) unpolarized. Idempotent.
double wrap_angle(double theta, Polarity mode);

// Wraps a displacement angle into the zero-centered range
// [-P/2, P/2) for the mode period P.
double wrap_displacement_angle(double dtheta, Polarity mode);

// Left-invariant displacement from p to q: (dx, dy) is q - p rotated by
// -p.theta, dtheta the wrapped angle difference. group_displacement(p, p)
// is the identity displacement.
Displacement group_displacement(const LiftedPoint& p, const LiftedPoint& q,
                                Polarity mode);

// Displacement from q to p given the displacement from p to q.
// Involution: invert(invert(d)) == d.
Displacement invert_displacement(const Displacement& d, Polarity mode);

// Left-invariant frame at p: X1 the orientation direction, X2 the angular
// direction, X3 the in-plane normal completing X1 to an orthonormal pair.
enum class VectorFieldTag { X1, X2, X3 };

struct Direction3 {
  double x, y, theta;
};

inline Direction3 vector_field(VectorFieldTag tag, const LiftedPoint& p) {
  switch (tag) {
    case VectorFieldTag::X1: return {std::cos(p.theta), std::sin(p.theta), 0.0};
    case VectorFieldTag::X2: return {0.0, 0.0, 1.0};
    case VectorFieldTag::X3: return {-std::sin(p.theta), std::cos(p.theta), 0.0};
  }
  throw std::logic_error("vector_field: bad tag");
}

}  // namespace segeo
