#pragma once

// Parametric generators for the grouping stimuli: Field-Hayes-Hess paths
// in random backgrounds, Kanizsa figures (triangle, square, bar), the
// contrast-polarity cartoon, a curve-vs-line pair, and a line-oriented
// text format.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "segeo/geometry.hpp"

namespace segeo {

struct Stimulus {
  std::vector<LiftedPoint> elements;
  Polarity mode = Polarity::Unpolarized;
  std::vector<std::string> labels;  // empty, or one tag per element

  std::size_t size() const { return elements.size(); }
  // Indices of elements whose label starts with the given prefix.
  std::vector<std::size_t> with_label_prefix(const std::string& prefix) const;
};

struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TurnPolicy { Alternating, RandomSign, Positive };

struct FhhParams {
  int n_path = 12;
  double angle_step_deg = 30.0;
  double element_gap = 4.5;
  int n_background = 20;
  double field_w = 120.0;
  double field_h = 120.0;
  double min_sep = 8.0;
  std::uint64_t seed = 0;
  TurnPolicy turn_policy = TurnPolicy::Alternating;
  Polarity mode = Polarity::Unpolarized;
};

// A connected chain of n_path elements (labels "path") inside a field of
// n_background random elements (labels "background"). Successive chain
// elements are displaced by element_gap along the running orientation,
// which turns by +-angle_step per link.
Stimulus gen_fhh(const FhhParams& params);

struct KanizsaParams {
  double side = 100.0;  // square side / triangle side / bar inducer distance
  double inducer_radius = 15.0;
  double mouth_angle_deg = 0.0;     // rotates each mouth edge toward the interior
  int elements_per_edge = 3;
  double rotation_jitter_deg = 0.0; // rotates inducer k as a whole by
                                    // jitter * (k + 1) / n degrees
  double arc_gap = 8.0;             // spacing of pacman body (arc) elements
  Polarity mode = Polarity::Unpolarized;
};

// Four pacman inducers at square corners. Labels: "inducer-K-mouth-E" for
// the two mouth-edge chains of inducer K, "inducer-K-arc" for its body.
Stimulus gen_kanizsa_square(const KanizsaParams& params);

// Three pacman inducers at triangle corners; labels as for the square.
Stimulus gen_kanizsa_triangle(const KanizsaParams& params);

// Two facing C-shaped inducers whose mouth edges are collinear iff
// offset = 0 (offset displaces the right inducer laterally).
Stimulus gen_kanizsa_bar(const KanizsaParams& params, double offset);

struct ContrastSquareParams {
  double side = 60.0;
  double notch_radius = 18.0;
  double element_gap = 4.0;
  double arc_gap = 2.75;  // semicircle sampling step; <= 0 means element_gap
  Polarity mode = Polarity::Polarized;
};

// Boundary elements of the two-region cartoon: a square split into a dark
// and a light half, with a semicircular bulge on the divider. Upper-edge
// elements carry labels "upper-dark" / "upper-light" and, in polarized
// mode, orientations differing by pi; divider arc elements are labeled
// "semicircle".
Stimulus gen_contrast_square(const ContrastSquareParams& params);

struct CurveLineParams {
  int n_curve = 14;
  double curve_gap = 4.0;
  double curve_turn_deg = 6.0;   // per-link turning of the curve
  int n_line = 12;
  double line_gap = 6.0;
  int n_background = 16;
  double field_w = 140.0;
  double field_h = 140.0;
  double min_sep = 8.0;
  double curve_jitter = 0.0;     // alternating orientation jitter (radians)
  std::uint64_t seed = 0;
  Polarity mode = Polarity::Unpolarized;
};

// A gently curved chain (labels "curve") and a straight chain ("line") in
// a random background; curve_jitter perturbs the curve's alignment.
Stimulus gen_curve_line(const CurveLineParams& params);

struct stimulus_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format: header "mode polarized|unpolarized", optional "# comment"
// lines, then "x y theta [label]" per element, radians, LF line endings.
Stimulus parse_stimulus(const std::string& text);
std::string serialize_stimulus(const Stimulus& s);

}  // namespace segeo
