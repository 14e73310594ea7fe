#pragma once

// SVG rendering of stimuli with perceptual units highlighted.  The canvas
// Y axis is flipped relative to stimulus coordinates (screen convention).

#include <string>
#include <vector>

#include "segeo/spectral.hpp"
#include "segeo/stimuli.hpp"

namespace segeo {

struct RenderSpec {
  double segment_length = 6.0;
  double canvas_width = 640.0;
  double canvas_height = 640.0;
  double margin = 20.0;
  std::vector<std::string> palette = {"#d62728", "#1f77b4", "#2ca02c",
                                      "#ff7f0e", "#9467bd"};
  std::string background_color = "#bbbbbb";
  double stroke_width = 2.0;
};

// One line segment per element, centered at (x, y) in direction theta.
// Unit of rank k uses palette[(k - 1) mod |palette|]; non-members use the
// background style.  Byte-deterministic for fixed inputs.
std::string render_svg(const Stimulus& s,
                       const std::vector<PerceptualUnit>& units,
                       const RenderSpec& spec = {});

}  // namespace segeo
