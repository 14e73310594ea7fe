#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "segeo/stimuli.hpp"

using namespace segeo;

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

// Alignment residual of two oriented elements (radians, unpolarized):
// zero iff they share an orientation that also points along the line
// joining them.
double collinearity_residual(const LiftedPoint& a, const LiftedPoint& b) {
  const double link = std::atan2(b.y - a.y, b.x - a.x);
  const double r1 =
      std::abs(wrap_displacement_angle(a.theta - b.theta, Polarity::Unpolarized));
  const double r2 =
      std::abs(wrap_displacement_angle(a.theta - link, Polarity::Unpolarized));
  return std::max(r1, r2);
}

std::vector<std::size_t> labeled(const Stimulus& s, const std::string& exact) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    if (s.labels[i] == exact) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("FHH with zero turning is a straight collinear chain") {
  FhhParams p;
  p.angle_step_deg = 0.0;
  p.n_background = 0;
  const Stimulus s = gen_fhh(p);
  REQUIRE(s.size() == static_cast<std::size_t>(p.n_path));
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    CHECK(collinearity_residual(s.elements[i], s.elements[i + 1]) < 1e-9);
  }
}

TEST_CASE("FHH total turning equals the sum of per-step turns") {
  FhhParams p;
  p.angle_step_deg = 30.0;
  p.n_background = 0;
  p.turn_policy = TurnPolicy::Positive;
  const Stimulus s = gen_fhh(p);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double turn = wrap_displacement_angle(
        s.elements[i + 1].theta - s.elements[i].theta, s.mode);
    CHECK(turn == doctest::Approx(deg(30.0)).epsilon(1e-9));
    total += turn;
  }
  CHECK(total == doctest::Approx(11.0 * deg(30.0)).epsilon(1e-9));
}

TEST_CASE("FHH is deterministic per seed and labels partition the elements") {
  FhhParams p;
  p.seed = 42;
  const Stimulus a = gen_fhh(p);
  const Stimulus b = gen_fhh(p);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.elements[i].x == b.elements[i].x);
    CHECK(a.elements[i].y == b.elements[i].y);
    CHECK(a.elements[i].theta == b.elements[i].theta);
    CHECK(a.labels[i] == b.labels[i]);
  }
  CHECK(a.with_label_prefix("path").size() == 12);
  CHECK(a.with_label_prefix("background").size() == 20);
  for (const auto& e : a.elements) {
    CHECK(e.theta >= 0.0);
    CHECK(e.theta < angular_period(a.mode));
  }
}

TEST_CASE("FHH capacity errors") {
  FhhParams p;
  p.field_w = p.field_h = 20.0;  // cannot hold a 12 x 4.5 px chain
  CHECK_THROWS_AS(gen_fhh(p), capacity_error);
  FhhParams crowded;
  crowded.n_background = 2000;
  CHECK_THROWS_AS(gen_fhh(crowded), capacity_error);
}

TEST_CASE("Kanizsa square: aligned mouths are collinear, rotated mouths open") {
  KanizsaParams p;
  p.side = 100.0;
  p.inducer_radius = 15.0;

  p.mouth_angle_deg = 0.0;
  const Stimulus aligned = gen_kanizsa_square(p);
  p.mouth_angle_deg = 20.0;
  const Stimulus rotated = gen_kanizsa_square(p);

  for (int k = 0; k < 4; ++k) {
    // Inducer k's edge 1 faces edge 0 of the next corner along the side.
    const auto lhs = labeled(aligned, "inducer-" + std::to_string(k) + "-mouth-1");
    const auto rhs = labeled(
        aligned, "inducer-" + std::to_string((k + 1) % 4) + "-mouth-0");
    REQUIRE(!lhs.empty());
    REQUIRE(!rhs.empty());
    for (std::size_t i : lhs) {
      for (std::size_t j : rhs) {
        CHECK(collinearity_residual(aligned.elements[i], aligned.elements[j]) <
              1e-9);
      }
    }
    // Element indices are not stable across mouth angles (the arc element
    // count depends on the mouth span), so look the labels up again in the
    // rotated stimulus.  Both facing edges rotate toward the interior by
    // 20 degrees, so their orientations now differ by 40 degrees.
    const auto lhs_r = labeled(rotated, "inducer-" + std::to_string(k) + "-mouth-1");
    const auto rhs_r = labeled(
        rotated, "inducer-" + std::to_string((k + 1) % 4) + "-mouth-0");
    REQUIRE(!lhs_r.empty());
    REQUIRE(!rhs_r.empty());
    for (std::size_t i : lhs_r) {
      for (std::size_t j : rhs_r) {
        const double dt = wrap_displacement_angle(
            rotated.elements[i].theta - rotated.elements[j].theta,
            Polarity::Unpolarized);
        CHECK(std::abs(dt) == doctest::Approx(deg(40.0)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("Kanizsa square: strong rotation jitter breaks every alignment") {
  KanizsaParams p;
  p.rotation_jitter_deg = 45.0;
  const Stimulus s = gen_kanizsa_square(p);
  double min_residual = kPi;
  for (int k = 0; k < 4; ++k) {
    for (int e = 0; e < 2; ++e) {
      const auto mine =
          labeled(s, "inducer-" + std::to_string(k) + "-mouth-" + std::to_string(e));
      for (int k2 = 0; k2 < 4; ++k2) {
        if (k2 == k) continue;
        for (int e2 = 0; e2 < 2; ++e2) {
          const auto other = labeled(
              s, "inducer-" + std::to_string(k2) + "-mouth-" + std::to_string(e2));
          for (std::size_t i : mine) {
            for (std::size_t j : other) {
              min_residual = std::min(
                  min_residual,
                  collinearity_residual(s.elements[i], s.elements[j]));
            }
          }
        }
      }
    }
  }
  CHECK(min_residual > deg(10.0));
}

TEST_CASE("Kanizsa triangle: six mouth chains, collinear across each side") {
  KanizsaParams p;
  const Stimulus s = gen_kanizsa_triangle(p);
  std::set<std::string> chains;
  for (const auto& label : s.labels) {
    if (label.find("mouth") != std::string::npos) chains.insert(label);
  }
  CHECK(chains.size() == 6);
  for (int k = 0; k < 3; ++k) {
    const auto lhs = labeled(s, "inducer-" + std::to_string(k) + "-mouth-1");
    const auto rhs =
        labeled(s, "inducer-" + std::to_string((k + 1) % 3) + "-mouth-0");
    REQUIRE(!lhs.empty());
    REQUIRE(!rhs.empty());
    for (std::size_t i : lhs) {
      for (std::size_t j : rhs) {
        CHECK(collinearity_residual(s.elements[i], s.elements[j]) < 1e-9);
      }
    }
  }
}

TEST_CASE("Kanizsa bar: collinear when aligned, displaced by the offset") {
  KanizsaParams p;
  p.side = 80.0;

  const Stimulus aligned = gen_kanizsa_bar(p, 0.0);
  for (int e = 0; e < 2; ++e) {
    const auto l = labeled(aligned, "inducer-0-mouth-" + std::to_string(e));
    const auto r = labeled(aligned, "inducer-1-mouth-" + std::to_string(e));
    REQUIRE(!l.empty());
    REQUIRE(!r.empty());
    for (std::size_t i : l) {
      for (std::size_t j : r) {
        CHECK(collinearity_residual(aligned.elements[i], aligned.elements[j]) <
              1e-9);
      }
    }
  }

  const Stimulus shifted = gen_kanizsa_bar(p, 10.0);
  for (int e = 0; e < 2; ++e) {
    const auto l = labeled(shifted, "inducer-0-mouth-" + std::to_string(e));
    const auto r = labeled(shifted, "inducer-1-mouth-" + std::to_string(e));
    for (std::size_t i : l) {
      for (std::size_t j : r) {
        // parallel chains (all horizontal) separated laterally by the offset
        CHECK(shifted.elements[i].theta ==
              doctest::Approx(shifted.elements[j].theta));
        CHECK(std::abs(shifted.elements[j].y - shifted.elements[i].y) ==
              doctest::Approx(10.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("contrast square: polarity flips the upper edge orientations") {
  ContrastSquareParams p;

  p.mode = Polarity::Unpolarized;
  const Stimulus unpol = gen_contrast_square(p);
  for (std::size_t i : unpol.with_label_prefix("upper")) {
    CHECK(unpol.elements[i].theta == doctest::Approx(0.0));
  }

  p.mode = Polarity::Polarized;
  const Stimulus pol = gen_contrast_square(p);
  const auto dark = pol.with_label_prefix("upper-dark");
  const auto light = pol.with_label_prefix("upper-light");
  REQUIRE(!dark.empty());
  REQUIRE(!light.empty());
  for (std::size_t i : dark) {
    for (std::size_t j : light) {
      const double dt = std::abs(wrap_displacement_angle(
          pol.elements[i].theta - pol.elements[j].theta, Polarity::Polarized));
      CHECK(dt == doctest::Approx(kPi));
    }
  }

  // semicircle orientation steps equal the arc discretization step
  const auto arc = pol.with_label_prefix("semicircle");
  REQUIRE(arc.size() >= 3);
  const double step = kPi / static_cast<double>(arc.size());
  for (std::size_t k = 0; k + 1 < arc.size(); ++k) {
    const double dt = wrap_displacement_angle(
        pol.elements[arc[k + 1]].theta - pol.elements[arc[k]].theta,
        Polarity::Polarized);
    CHECK(dt == doctest::Approx(step).epsilon(1e-9));
  }
}

TEST_CASE("stimulus text format") {
  const Stimulus one = parse_stimulus("mode polarized\n0 0 0\n");
  CHECK(one.size() == 1);
  CHECK(one.mode == Polarity::Polarized);
  CHECK(one.elements[0].x == 0.0);

  // Round-trip of a generated stimulus is lossless.
  FhhParams p;
  p.seed = 3;
  const Stimulus s = gen_fhh(p);
  const Stimulus r = parse_stimulus(serialize_stimulus(s));
  REQUIRE(r.size() == s.size());
  CHECK(r.mode == s.mode);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(r.elements[i].x == doctest::Approx(s.elements[i].x).epsilon(1e-12));
    CHECK(r.elements[i].y == doctest::Approx(s.elements[i].y).epsilon(1e-12));
    CHECK(r.elements[i].theta ==
          doctest::Approx(s.elements[i].theta).epsilon(1e-12));
    CHECK(r.labels[i] == s.labels[i]);
  }

  // Out-of-range angle for the declared mode.
  CHECK_THROWS_AS(parse_stimulus("mode unpolarized\n0 0 4.0\n"),
                  stimulus_parse_error);
  // Malformed element line; the error names the line.
  CHECK_THROWS_WITH_AS(parse_stimulus("mode polarized\n0 0 0\nnot numbers\n"),
                       doctest::Contains("line 3"), stimulus_parse_error);
  // Missing header.
  CHECK_THROWS_AS(parse_stimulus("0 0 0\n"), stimulus_parse_error);
}
