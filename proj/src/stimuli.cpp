#include "segeo/stimuli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace segeo {

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double degrees) { return degrees * kPi / 180.0; }

// Engine-only uniforms; std::uniform_real_distribution is not portable
// across standard library implementations.
double uniform(std::mt19937_64& eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1p-53;
  return lo + u * (hi - lo);
}

bool far_from_all(const std::vector<LiftedPoint>& pts, double x, double y,
                  double min_sep) {
  for (const auto& p : pts) {
    const double dx = p.x - x;
    const double dy = p.y - y;
    if (dx * dx + dy * dy < min_sep * min_sep) return false;
  }
  return true;
}

void push(Stimulus& s, double x, double y, double theta, std::string label) {
  s.elements.push_back({x, y, wrap_angle(theta, s.mode)});
  s.labels.push_back(std::move(label));
}

// Scatters n background elements with uniform pose, respecting min_sep.
void add_background(Stimulus& s, int n, double w, double h, double min_sep,
                    std::mt19937_64& eng) {
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 2000; ++attempt) {
      const double x = uniform(eng, 0.0, w);
      const double y = uniform(eng, 0.0, h);
      if (!far_from_all(s.elements, x, y, min_sep)) continue;
      push(s, x, y, uniform(eng, 0.0, angular_period(s.mode)), "background");
      placed = true;
      break;
    }
    if (!placed) {
      throw capacity_error("gen: cannot place background element " +
                           std::to_string(i) + " with the given min_sep");
    }
  }
}

double rotate_toward(double dir_angle, double toward_angle, double amount) {
  // rotates dir_angle by +-amount, whichever moves it toward toward_angle
  const double delta =
      std::remainder(toward_angle - dir_angle, 2.0 * kPi);
  return dir_angle + (delta >= 0.0 ? amount : -amount);
}

struct PacmanSpec {
  double cx, cy;           // corner (disc center)
  double edge_dir[2];      // angles of the two mouth-edge directions
  double interior_dir;     // angle from the corner toward the figure center
};

// Emits one pacman: two mouth-edge chains along the (rotated) edge
// directions plus tangent-oriented elements along the remaining body arc.
void add_pacman(Stimulus& s, const PacmanSpec& spec, const KanizsaParams& p,
                int index, double jitter) {
  const double alpha = deg(p.mouth_angle_deg);
  double edge[2];
  for (int e = 0; e < 2; ++e) {
    edge[e] = rotate_toward(spec.edge_dir[e], spec.interior_dir, alpha) + jitter;
  }
  const double r = p.inducer_radius;
  for (int e = 0; e < 2; ++e) {
    // In polarized mode the orientation follows the illusory contour's
    // counter-clockwise winding: the edge toward the previous corner (e = 0)
    // carries the reversed tangent, so facing edges of adjacent inducers
    // agree in direction when the mouths are unrotated.
    const double orient =
        (p.mode == Polarity::Polarized && e == 0) ? edge[e] + kPi : edge[e];
    for (int j = 0; j < p.elements_per_edge; ++j) {
      const double t = r * (j + 0.5) / p.elements_per_edge;
      push(s, spec.cx + t * std::cos(edge[e]), spec.cy + t * std::sin(edge[e]),
           orient,
           "inducer-" + std::to_string(index) + "-mouth-" + std::to_string(e));
    }
  }

  // Body arc spans the reflex side between the two mouth edges.
  double a0 = edge[0];
  double a1 = edge[1];
  // order so that the mouth wedge is the short way from a0 to a1
  if (std::remainder(a1 - a0, 2.0 * kPi) < 0.0) std::swap(a0, a1);
  const double mouth_span = std::remainder(a1 - a0, 2.0 * kPi) < 0.0
                                ? std::remainder(a1 - a0, 2.0 * kPi) + 2.0 * kPi
                                : std::remainder(a1 - a0, 2.0 * kPi);
  const double arc_span = 2.0 * kPi - mouth_span;
  const int n_arc = std::max(1, static_cast<int>(arc_span * r / p.arc_gap));
  for (int j = 0; j < n_arc; ++j) {
    const double phi = a1 + arc_span * (j + 0.5) / n_arc;
    push(s, spec.cx + r * std::cos(phi), spec.cy + r * std::sin(phi),
         phi + 0.5 * kPi, "inducer-" + std::to_string(index) + "-arc");
  }
}

Stimulus kanizsa_polygon(const std::vector<std::pair<double, double>>& corners,
                         const KanizsaParams& p) {
  if (p.side <= 2.0 * p.inducer_radius) {
    throw std::invalid_argument("kanizsa: side must exceed twice the radius");
  }
  if (p.elements_per_edge < 1) {
    throw std::invalid_argument("kanizsa: elements_per_edge must be >= 1");
  }
  Stimulus s;
  s.mode = p.mode;
  const int n = static_cast<int>(corners.size());
  for (int k = 0; k < n; ++k) {
    const auto [cx, cy] = corners[k];
    const auto [px, py] = corners[(k + n - 1) % n];
    const auto [qx, qy] = corners[(k + 1) % n];
    PacmanSpec spec;
    spec.cx = cx;
    spec.cy = cy;
    spec.edge_dir[0] = std::atan2(py - cy, px - cx);
    spec.edge_dir[1] = std::atan2(qy - cy, qx - cx);
    spec.interior_dir = std::atan2(-cy, -cx);  // polygon centered at origin
    // Distinct per-inducer rotations: a uniform or alternating pattern would
    // leave degenerate inducer pairs under the polygon's symmetry group.
    const double jitter =
        deg(p.rotation_jitter_deg) * static_cast<double>(k + 1) / n;
    add_pacman(s, spec, p, k, jitter);
  }
  return s;
}

}  // namespace

std::vector<std::size_t> Stimulus::with_label_prefix(
    const std::string& prefix) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].rfind(prefix, 0) == 0) out.push_back(i);
  }
  return out;
}

Stimulus gen_fhh(const FhhParams& p) {
  if (p.n_path < 2) throw std::invalid_argument("gen_fhh: n_path must be >= 2");
  Stimulus s;
  s.mode = p.mode;
  std::mt19937_64 eng(p.seed);

  const double turn = deg(p.angle_step_deg);
  const double chain_extent = p.n_path * p.element_gap;
  if (chain_extent > std::min(p.field_w, p.field_h)) {
    throw capacity_error("gen_fhh: field too small for the path chain");
  }

  bool placed = false;
  for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
    const double x0 = uniform(eng, 0.0, p.field_w);
    const double y0 = uniform(eng, 0.0, p.field_h);
    double heading = uniform(eng, 0.0, 2.0 * kPi);

    std::vector<double> xs{x0}, ys{y0}, hs{heading};
    bool ok = true;
    for (int i = 1; i < p.n_path; ++i) {
      double sign = 1.0;
      switch (p.turn_policy) {
        case TurnPolicy::Alternating: sign = (i % 2 == 1) ? 1.0 : -1.0; break;
        case TurnPolicy::RandomSign: sign = (eng() & 1) ? 1.0 : -1.0; break;
        case TurnPolicy::Positive: sign = 1.0; break;
      }
      const double x = xs.back() + p.element_gap * std::cos(hs.back());
      const double y = ys.back() + p.element_gap * std::sin(hs.back());
      if (x < 0.0 || x > p.field_w || y < 0.0 || y > p.field_h) {
        ok = false;
        break;
      }
      xs.push_back(x);
      ys.push_back(y);
      hs.push_back(hs.back() + sign * turn);
    }
    if (!ok) continue;
    for (int i = 0; i < p.n_path; ++i) push(s, xs[i], ys[i], hs[i], "path");
    placed = true;
  }
  if (!placed) {
    throw capacity_error("gen_fhh: could not place the path chain in the field");
  }
  add_background(s, p.n_background, p.field_w, p.field_h, p.min_sep, eng);
  return s;
}

Stimulus gen_kanizsa_square(const KanizsaParams& p) {
  const double h = 0.5 * p.side;
  return kanizsa_polygon({{-h, -h}, {h, -h}, {h, h}, {-h, h}}, p);
}

Stimulus gen_kanizsa_triangle(const KanizsaParams& p) {
  // equilateral, centroid at the origin
  const double rc = p.side / std::sqrt(3.0);
  std::vector<std::pair<double, double>> corners;
  for (int k = 0; k < 3; ++k) {
    const double a = kPi / 2.0 + 2.0 * kPi * k / 3.0;
    corners.emplace_back(rc * std::cos(a), rc * std::sin(a));
  }
  return kanizsa_polygon(corners, p);
}

Stimulus gen_kanizsa_bar(const KanizsaParams& p, double offset) {
  if (p.side <= 2.0 * p.inducer_radius) {
    throw std::invalid_argument("kanizsa bar: side must exceed twice the radius");
  }
  Stimulus s;
  s.mode = p.mode;
  const double r = p.inducer_radius;
  const double h = 0.5 * r;                    // bar half-height
  const double reach = std::sqrt(r * r - h * h);
  const double gamma = std::asin(h / r);       // mouth half-angle at the center

  for (int k = 0; k < 2; ++k) {
    const double cx = (k == 0 ? -0.5 : 0.5) * p.side;
    const double cy = (k == 0 ? 0.0 : offset);
    const double toward = (k == 0) ? 0.0 : kPi;  // opening faces the other C
    const double sx = std::cos(toward);
    for (int e = 0; e < 2; ++e) {
      const double ey = (e == 0 ? 1.0 : -1.0) * h;
      for (int j = 0; j < p.elements_per_edge; ++j) {
        const double t = 0.2 * r + (reach - 0.2 * r) * (j + 0.5) / p.elements_per_edge;
        push(s, cx + sx * t, cy + ey, 0.0,
             "inducer-" + std::to_string(k) + "-mouth-" + std::to_string(e));
      }
    }
    const double a1 = toward + gamma;
    const double arc_span = 2.0 * kPi - 2.0 * gamma;
    const int n_arc = std::max(1, static_cast<int>(arc_span * r / p.arc_gap));
    for (int j = 0; j < n_arc; ++j) {
      const double phi = a1 + arc_span * (j + 0.5) / n_arc;
      push(s, cx + r * std::cos(phi), cy + r * std::sin(phi), phi + 0.5 * kPi,
           "inducer-" + std::to_string(k) + "-arc");
    }
  }
  return s;
}

Stimulus gen_contrast_square(const ContrastSquareParams& p) {
  Stimulus s;
  s.mode = p.mode;
  const double S = p.side;
  const double g = p.element_gap;
  const bool pol = p.mode == Polarity::Polarized;

  // upper edge, dark region below on the left half, light on the right;
  // the edge is sampled continuously so that in unpolarized mode it forms
  // a single chain, while the polarized orientation flip decouples the two
  // halves at the contrast boundary.
  const int n_half = std::max(1, static_cast<int>(0.5 * S / g));
  for (int i = 0; i < 2 * n_half; ++i) {
    const double x = 0.5 * g + i * g;
    push(s, x, S, (pol && i < n_half) ? kPi : 0.0,
         i < n_half ? "upper-dark" : "upper-light");
  }

  // dividing semicircle bulging into the light half
  const double rho = p.notch_radius;
  const double ag = p.arc_gap > 0.0 ? p.arc_gap : g;
  const int n_arc = std::max(1, static_cast<int>(kPi * rho / ag));
  for (int j = 0; j < n_arc; ++j) {
    const double phi = -0.5 * kPi + kPi * (j + 0.5) / n_arc;
    push(s, 0.5 * S + rho * std::cos(phi), 0.5 * S + rho * std::sin(phi),
         phi + 0.5 * kPi, "semicircle");
  }
  return s;
}

Stimulus gen_curve_line(const CurveLineParams& p) {
  Stimulus s;
  s.mode = p.mode;
  std::mt19937_64 eng(p.seed);

  // curve in the upper half, sweeping left to right
  {
    const double turn = deg(p.curve_turn_deg);
    double x = 0.25 * p.field_w;
    double y = 0.68 * p.field_h;
    double headingPos = 0.0;
    for (int i = 0; i < p.n_curve; ++i) {
      const double jitter =
          p.curve_jitter * (i % 2 == 0 ? 1.0 : -1.0);
      push(s, x, y, headingPos + jitter, "curve");
      x += p.curve_gap * std::cos(headingPos);
      y += p.curve_gap * std::sin(headingPos);
      headingPos += turn;
    }
  }
  // straight line in the lower half
  {
    double x = 0.22 * p.field_w;
    const double y = 0.3 * p.field_h;
    for (int i = 0; i < p.n_line; ++i) {
      push(s, x, y, 0.0, "line");
      x += p.line_gap;
    }
  }
  add_background(s, p.n_background, p.field_w, p.field_h, p.min_sep, eng);
  return s;
}

Stimulus parse_stimulus(const std::string& text) {
  Stimulus s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_mode = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_mode) {
      std::string kw, mode;
      ls >> kw >> mode;
      if (kw != "mode" || (mode != "polarized" && mode != "unpolarized")) {
        throw stimulus_parse_error(
            "line " + std::to_string(line_no) +
            ": expected header 'mode polarized|unpolarized'");
      }
      s.mode = mode == "polarized" ? Polarity::Polarized : Polarity::Unpolarized;
      have_mode = true;
      continue;
    }
    double x, y, theta;
    if (!(ls >> x >> y >> theta)) {
      throw stimulus_parse_error("line " + std::to_string(line_no) +
                                 ": expected 'x y theta [label]'");
    }
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta)) {
      throw stimulus_parse_error("line " + std::to_string(line_no) +
                                 ": non-finite element");
    }
    if (theta < 0.0 || theta >= angular_period(s.mode)) {
      throw stimulus_parse_error(
          "line " + std::to_string(line_no) +
          ": theta outside the canonical range of the mode");
    }
    std::string label;
    ls >> label;
    s.elements.push_back({x, y, theta});
    s.labels.push_back(label);
  }
  if (!have_mode || s.elements.empty()) {
    throw stimulus_parse_error("stimulus must declare a mode and at least one element");
  }
  return s;
}

std::string serialize_stimulus(const Stimulus& s) {
  std::ostringstream out;
  out.precision(17);
  out << "mode "
      << (s.mode == Polarity::Polarized ? "polarized" : "unpolarized") << "\n";
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    const auto& e = s.elements[i];
    out << e.x << " " << e.y << " " << e.theta;
    if (i < s.labels.size() && !s.labels[i].empty()) out << " " << s.labels[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace segeo
