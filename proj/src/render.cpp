#include "segeo/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace segeo {

namespace {

void format_number(std::ostream& out, double v) {
  // Fixed precision keeps output byte-stable across libstdc++ versions.
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << v;
  std::string t = s.str();
  if (t == "-0.000") t = "0.000";
  out << t;
}

}  // namespace

std::string render_svg(const Stimulus& stim,
                       const std::vector<PerceptualUnit>& units,
                       const RenderSpec& spec) {
  if (!(spec.segment_length > 0.0) || spec.palette.empty()) {
    throw std::invalid_argument("render_svg: segment_length must be positive "
                                "and the palette nonempty");
  }
  const std::size_t n = stim.elements.size();
  for (const PerceptualUnit& u : units) {
    for (std::size_t i : u.members) {
      if (i >= n) {
        throw std::invalid_argument("render_svg: unit member index " +
                                    std::to_string(i) + " out of range");
      }
    }
  }

  // Earlier (more salient) units win when memberships overlap.
  std::vector<int> color_of(n, -1);
  for (std::size_t k = units.size(); k-- > 0;) {
    const int rank = units[k].rank;
    const int color = static_cast<int>((rank - 1) % static_cast<int>(spec.palette.size()));
    for (std::size_t i : units[k].members) color_of[i] = color;
  }

  double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
  if (n > 0) {
    min_x = min_y = std::numeric_limits<double>::infinity();
    max_x = max_y = -std::numeric_limits<double>::infinity();
    for (const LiftedPoint& p : stim.elements) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    if (min_x == max_x) max_x = min_x + 1.0;
    if (min_y == max_y) max_y = min_y + 1.0;
  }
  const double sx = (spec.canvas_width - 2.0 * spec.margin) / (max_x - min_x);
  const double sy = (spec.canvas_height - 2.0 * spec.margin) / (max_y - min_y);
  const double scale = std::min(sx, sy);
  // Y flipped: stimulus y grows upward, screen y grows downward.
  auto to_screen_x = [&](double x) { return spec.margin + (x - min_x) * scale; };
  auto to_screen_y = [&](double y) {
    return spec.canvas_height - spec.margin - (y - min_y) * scale;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  format_number(out, spec.canvas_width);
  out << "\" height=\"";
  format_number(out, spec.canvas_height);
  out << "\">\n";

  const double half = 0.5 * spec.segment_length;
  for (std::size_t i = 0; i < n; ++i) {
    const LiftedPoint& p = stim.elements[i];
    const double cx = to_screen_x(p.x);
    const double cy = to_screen_y(p.y);
    const double dx = half * std::cos(p.theta);
    const double dy = -half * std::sin(p.theta);  // flipped with the axis
    const std::string& color =
        color_of[i] >= 0 ? spec.palette[static_cast<std::size_t>(color_of[i])]
                         : spec.background_color;
    out << "  <line x1=\"";
    format_number(out, cx - dx);
    out << "\" y1=\"";
    format_number(out, cy - dy);
    out << "\" x2=\"";
    format_number(out, cx + dx);
    out << "\" y2=\"";
    format_number(out, cy + dy);
    out << "\" stroke=\"" << color << "\" stroke-width=\"";
    format_number(out, spec.stroke_width);
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace segeo
