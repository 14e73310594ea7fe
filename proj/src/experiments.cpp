#include "segeo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace segeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

KernelGrid simulate_ready(const KernelParams& params, const GridSpec& spec,
                          PathBackend backend) {
  KernelGrid grid = simulate_kernel(params, spec, backend);
  if (params.kind == KernelKind::FokkerPlanck) grid = symmetrize(grid);
  return grid;
}

std::uint64_t config_digest(const KernelParams& p, const GridSpec& s) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint8_t kind = static_cast<std::uint8_t>(p.kind);
  const std::uint8_t mode = static_cast<std::uint8_t>(p.mode);
  mix(&kind, 1);
  mix(&mode, 1);
  mix(&p.sigma, sizeof p.sigma);
  mix(&p.sigma1, sizeof p.sigma1);
  mix(&p.sigma3, sizeof p.sigma3);
  mix(&p.sigma_iso, sizeof p.sigma_iso);
  mix(&p.rho, sizeof p.rho);
  mix(&p.n_paths, sizeof p.n_paths);
  mix(&p.steps, sizeof p.steps);
  mix(&p.step, sizeof p.step);
  mix(&p.seed, sizeof p.seed);
  mix(&s.nx, sizeof s.nx);
  mix(&s.ny, sizeof s.ny);
  mix(&s.ntheta, sizeof s.ntheta);
  mix(&s.half_width_x, sizeof s.half_width_x);
  mix(&s.half_width_y, sizeof s.half_width_y);
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

// Distinct inducer indices (labels "inducer-K-...") among unit members.
int inducers_spanned(const Stimulus& s, const PerceptualUnit& unit) {
  std::set<std::string> seen;
  for (std::size_t i : unit.members) {
    const std::string& label = s.labels[i];
    if (label.rfind("inducer-", 0) != 0) continue;
    const auto second_dash = label.find('-', 8);
    seen.insert(label.substr(0, second_dash));
  }
  return static_cast<int>(seen.size());
}

double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (std::size_t i : a) inter += b.count(i);
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

// The extracted unit whose members are mostly labeled with the prefix;
// returns nullptr if no unit has a majority of that label.
const PerceptualUnit* unit_for_label(const Stimulus& s,
                                     const std::vector<PerceptualUnit>& units,
                                     const std::string& prefix) {
  for (const PerceptualUnit& u : units) {
    std::size_t hits = 0;
    for (std::size_t i : u.members) {
      if (s.labels[i].rfind(prefix, 0) == 0) ++hits;
    }
    if (2 * hits > u.members.size()) return &u;
  }
  return nullptr;
}

KernelParams fp_defaults(std::uint64_t steps, Polarity mode = Polarity::Unpolarized) {
  KernelParams p;
  p.kind = KernelKind::FokkerPlanck;
  p.steps = steps;
  p.mode = mode;
  return p;
}

KernelParams srl_defaults(std::uint64_t steps) {
  KernelParams p;
  p.kind = KernelKind::SubRiemannianLaplacian;
  p.steps = steps;
  return p;
}

KernelParams iso_defaults(std::uint64_t steps) {
  KernelParams p;
  p.kind = KernelKind::IsotropicLaplacian;
  p.steps = steps;
  return p;
}

Stimulus chain(double x0, double y0, double theta, double gap, int n,
               const std::string& label, Stimulus base = {}) {
  for (int i = 0; i < n; ++i) {
    base.elements.push_back({x0 + gap * i * std::cos(theta),
                             y0 + gap * i * std::sin(theta),
                             base.mode == Polarity::Unpolarized
                                 ? wrap_angle(theta, Polarity::Unpolarized)
                                 : wrap_angle(theta, Polarity::Polarized)});
    base.labels.push_back(label);
  }
  return base;
}

}  // namespace

KernelProvider direct_provider(PathBackend backend) {
  return [backend](const KernelParams& params, const GridSpec& spec) {
    return simulate_ready(params, spec, backend);
  };
}

KernelProvider caching_provider(std::string cache_dir, PathBackend backend) {
  return [cache_dir = std::move(cache_dir), backend](const KernelParams& params,
                                                     const GridSpec& spec) {
    namespace fs = std::filesystem;
    const fs::path path =
        fs::path(cache_dir) / (hex64(config_digest(params, spec)) + ".sgk");
    if (fs::exists(path)) {
      return load_kernel(path.string());
    }
    KernelGrid grid = simulate_ready(params, spec, backend);
    fs::create_directories(fs::path(cache_dir));
    save_kernel(grid, path.string());
    return grid;
  };
}

std::vector<FhhRow> experiment_fhh_sweep(const KernelProvider& provider,
                                         const std::vector<double>& angles_deg,
                                         const std::vector<std::uint64_t>& seeds) {
  if (angles_deg.empty() || seeds.empty()) {
    throw std::invalid_argument("experiment_fhh_sweep: empty sweep grid");
  }
  // One kernel serves every configuration: the field size (hence d_max and
  // the auto horizon) does not depend on the angle or seed.
  FhhParams probe;
  probe.angle_step_deg = angles_deg.front();
  probe.seed = seeds.front();
  const std::uint64_t steps = auto_steps(gen_fhh(probe), 1.0);
  const KernelGrid kernel = provider(fp_defaults(steps), GridSpec{});

  std::vector<FhhRow> rows;
  for (double angle : angles_deg) {
    FhhRow row;
    row.angle_deg = angle;
    for (std::uint64_t seed : seeds) {
      FhhParams p;
      p.angle_step_deg = angle;
      p.seed = seed;
      const Stimulus s = gen_fhh(p);
      const GroupResult g = group_stimulus(s, kernel);
      if (g.units.empty()) continue;
      row.lambda1 += g.units[0].saliency;
      if (g.units.size() > 1) row.lambda2 += g.units[1].saliency;
      const LabelScore path_score = score_against_label(s, g.units[0], "path");
      const LabelScore bg_score = score_against_label(s, g.units[0], "background");
      row.recall += path_score.recall;
      row.contamination += bg_score.precision;
    }
    const double inv = 1.0 / static_cast<double>(seeds.size());
    row.lambda1 *= inv;
    row.lambda2 *= inv;
    row.recall *= inv;
    row.contamination *= inv;
    rows.push_back(row);
  }
  return rows;
}

Stimulus canonical_kanizsa_triangle(KernelKind kind) {
  KanizsaParams p;
  if (kind == KernelKind::SubRiemannianLaplacian) {
    // The SRL kernel is short range: a tighter figure keeps the mouth gaps
    // within its reach.
    p.side = 36.0;
    p.inducer_radius = 12.0;
    p.arc_gap = 8.0;
  } else {
    p.side = 48.0;
    p.inducer_radius = 14.0;
    p.arc_gap = 8.0;
  }
  return gen_kanizsa_triangle(p);
}

Stimulus canonical_kanizsa_square(double mouth_angle_deg) {
  // Polarized with sparse body arcs: the mouth-angle transition needs the
  // cross-inducer coupling to die off monotonically, which the pi-quotient
  // of unpolarized orientations and dense arc bridges would both spoil.
  KanizsaParams p;
  p.side = 46.0;
  p.inducer_radius = 14.0;
  p.mouth_angle_deg = mouth_angle_deg;
  p.arc_gap = 40.0;
  p.mode = Polarity::Polarized;
  return gen_kanizsa_square(p);
}

Stimulus canonical_contrast_square(Polarity mode) {
  ContrastSquareParams p;
  p.mode = mode;
  return gen_contrast_square(p);
}

SquareSweep experiment_square_sweep(const KernelProvider& provider,
                                    const std::vector<double>& angles_deg) {
  if (angles_deg.empty()) {
    throw std::invalid_argument("experiment_square_sweep: empty sweep grid");
  }
  std::vector<double> sorted = angles_deg;
  std::sort(sorted.begin(), sorted.end());

  SquareSweep sweep;
  for (double angle : sorted) {
    const Stimulus s = canonical_kanizsa_square(angle);
    const std::uint64_t steps = auto_steps(s, 1.0);
    const KernelGrid kernel =
        provider(fp_defaults(steps, Polarity::Polarized), GridSpec{});
    const GroupResult g = group_stimulus(s, kernel);
    SquareRow row;
    row.mouth_angle_deg = angle;
    if (!g.units.empty()) {
      row.lambda1 = g.units[0].saliency;
      if (g.units.size() > 1) row.lambda2 = g.units[1].saliency;
      row.inducers_spanned = inducers_spanned(s, g.units[0]);
      row.cross_inducer = row.inducers_spanned == 4;
    }
    sweep.rows.push_back(row);
  }
  // Critical angle: midpoint of the last transition from cross-inducer to
  // single-inducer grouping.
  sweep.critical_angle_deg = sorted.back();
  for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
    if (sweep.rows[i - 1].cross_inducer && !sweep.rows[i].cross_inducer) {
      sweep.critical_angle_deg =
          0.5 * (sweep.rows[i - 1].mouth_angle_deg + sweep.rows[i].mouth_angle_deg);
    }
  }
  return sweep;
}

SwapResult experiment_swap(const KernelProvider& provider, double jitter_rad) {
  CurveLineParams base;
  const Stimulus s_base = gen_curve_line(base);
  CurveLineParams pert = base;
  pert.curve_jitter = jitter_rad;
  const Stimulus s_pert = gen_curve_line(pert);

  const std::uint64_t steps = auto_steps(s_base, 1.0);
  const KernelGrid kernel = provider(fp_defaults(steps), GridSpec{});

  const GroupResult g_base = group_stimulus(s_base, kernel);
  const GroupResult g_pert = group_stimulus(s_pert, kernel);

  SwapResult out;
  const PerceptualUnit* curve_base = unit_for_label(s_base, g_base.units, "curve");
  const PerceptualUnit* line_base = unit_for_label(s_base, g_base.units, "line");
  const PerceptualUnit* curve_pert = unit_for_label(s_pert, g_pert.units, "curve");
  const PerceptualUnit* line_pert = unit_for_label(s_pert, g_pert.units, "line");
  if (!curve_base || !line_base || !curve_pert || !line_pert) return out;

  out.lambda_curve_base = curve_base->saliency;
  out.lambda_line_base = line_base->saliency;
  out.lambda_curve_pert = curve_pert->saliency;
  out.lambda_line_pert = line_pert->saliency;
  out.curve_overlap = jaccard(curve_base->members, curve_pert->members);
  out.line_overlap = jaccard(line_base->members, line_pert->members);
  out.swapped = (out.lambda_curve_base > out.lambda_line_base) &&
                (out.lambda_line_pert > out.lambda_curve_pert);
  return out;
}

DichotomyResult experiment_fp_vs_srl(const KernelProvider& provider) {
  // Both stimuli use two blocks that are congruent under a rigid motion, so
  // their sub-spectra are exactly degenerate up to one deliberate detuning:
  // the outermost element of the second block is rotated by a fraction of a
  // degree. The leading eigenvector then spans both blocks only when the
  // kernel's cross coupling exceeds the detuning-set threshold, turning the
  // kernels' range profiles into a clean grouped/split decision.
  //
  // Far case: two collinear 6-element segments, 14 px apart. The drifting
  // FP kernel bridges the gap at roughly 75x the strength of the diffusive
  // SRL kernel, so a 0.4-degree detuning sits between the two thresholds.
  const double far_detune = 0.4 * kPi / 180.0;
  Stimulus far = chain(0.0, 0.0, 0.0, 3.5, 6, "seg-0");
  far = chain(5 * 3.5 + 14.0, 0.0, 0.0, 3.5, 6, "seg-1", std::move(far));
  far.elements.back().theta = far_detune;

  // Sharp case: a compact 4-element chain with a 60-degree bend, the second
  // pair starting 1 px past the vertex. Every cross pair lies within a few
  // pixels at a large relative angle: there SRL, which can turn nearly in
  // place, couples stronger than FP, whose forward drift carries paths away
  // before they can turn. A 0.3-degree detuning splits FP but not SRL.
  const double leg_angle = 60.0 * kPi / 180.0;
  const double kink_detune = 0.3 * kPi / 180.0;
  Stimulus corner;
  corner.elements.push_back({-3.0, 0.0, 0.0});
  corner.elements.push_back({0.0, 0.0, 0.0});
  corner.elements.push_back({std::cos(leg_angle), std::sin(leg_angle),
                             leg_angle});
  corner.elements.push_back({4.0 * std::cos(leg_angle),
                             4.0 * std::sin(leg_angle),
                             leg_angle + kink_detune});
  corner.labels = {"leg-0", "leg-0", "leg-1", "leg-1"};

  auto spans_both = [](const Stimulus& s, const GroupResult& g,
                       const std::string& a, const std::string& b) {
    if (g.units.empty()) return false;
    const LabelScore sa = score_against_label(s, g.units[0], a);
    const LabelScore sb = score_against_label(s, g.units[0], b);
    return sa.recall >= 0.5 && sb.recall >= 0.5;
  };

  DichotomyResult out;
  {
    const std::uint64_t steps = auto_steps(far, 1.0);
    const KernelGrid fp = provider(fp_defaults(steps), GridSpec{});
    const KernelGrid srl = provider(srl_defaults(steps), GridSpec{});
    out.fp_groups_far = spans_both(far, group_stimulus(far, fp), "seg-0", "seg-1");
    out.srl_groups_far = spans_both(far, group_stimulus(far, srl), "seg-0", "seg-1");
  }
  {
    // The corner stimulus is only ~6 px across, far below what the auto-H
    // rule assumes; SRL needs a longer horizon for its angular diffusion to
    // reach 60 degrees. Reuse the far case's 16-step horizon so both
    // configurations are judged with the same kernels.
    const std::uint64_t steps = auto_steps(far, 1.0);
    const KernelGrid fp = provider(fp_defaults(steps), GridSpec{});
    const KernelGrid srl = provider(srl_defaults(steps), GridSpec{});
    out.fp_groups_sharp =
        spans_both(corner, group_stimulus(corner, fp), "leg-0", "leg-1");
    out.srl_groups_sharp =
        spans_both(corner, group_stimulus(corner, srl), "leg-0", "leg-1");
  }
  return out;
}

IsoResult experiment_isotropic(const KernelProvider& provider) {
  const Stimulus s = canonical_kanizsa_square(0.0);
  const std::uint64_t steps = auto_steps(s, 1.0);
  const KernelGrid fp = provider(fp_defaults(steps, Polarity::Polarized), GridSpec{});
  KernelParams iso_params = iso_defaults(steps);
  iso_params.mode = Polarity::Polarized;
  const KernelGrid iso = provider(iso_params, GridSpec{});

  IsoResult out;
  const GroupResult g_fp = group_stimulus(s, fp);
  const GroupResult g_iso = group_stimulus(s, iso);
  if (!g_fp.units.empty()) out.fp_inducers = inducers_spanned(s, g_fp.units[0]);
  if (!g_iso.units.empty()) out.iso_inducers = inducers_spanned(s, g_iso.units[0]);
  return out;
}

std::string format_fhh_rows(const std::vector<FhhRow>& rows) {
  std::ostringstream out;
  out.precision(6);
  out << "angle_deg lambda1 lambda2 recall contamination\n";
  for (const FhhRow& r : rows) {
    out << r.angle_deg << ' ' << r.lambda1 << ' ' << r.lambda2 << ' '
        << r.recall << ' ' << r.contamination << '\n';
  }
  return out.str();
}

std::string format_square_sweep(const SquareSweep& sweep) {
  std::ostringstream out;
  out.precision(6);
  out << "mouth_angle_deg lambda1 lambda2 inducers_spanned cross_inducer\n";
  for (const SquareRow& r : sweep.rows) {
    out << r.mouth_angle_deg << ' ' << r.lambda1 << ' ' << r.lambda2 << ' '
        << r.inducers_spanned << ' ' << (r.cross_inducer ? 1 : 0) << '\n';
  }
  out << "critical_angle_deg " << sweep.critical_angle_deg << '\n';
  return out.str();
}

std::string format_swap(const SwapResult& r) {
  std::ostringstream out;
  out.precision(6);
  out << "lambda_curve_base " << r.lambda_curve_base << '\n'
      << "lambda_line_base " << r.lambda_line_base << '\n'
      << "lambda_curve_perturbed " << r.lambda_curve_pert << '\n'
      << "lambda_line_perturbed " << r.lambda_line_pert << '\n'
      << "curve_overlap " << r.curve_overlap << '\n'
      << "line_overlap " << r.line_overlap << '\n'
      << "swapped " << (r.swapped ? 1 : 0) << '\n';
  return out.str();
}

std::string format_dichotomy(const DichotomyResult& r) {
  std::ostringstream out;
  out << "fp_groups_far " << (r.fp_groups_far ? 1 : 0) << '\n'
      << "srl_groups_far " << (r.srl_groups_far ? 1 : 0) << '\n'
      << "srl_groups_sharp " << (r.srl_groups_sharp ? 1 : 0) << '\n'
      << "fp_groups_sharp " << (r.fp_groups_sharp ? 1 : 0) << '\n';
  return out.str();
}

std::string format_isotropic(const IsoResult& r) {
  std::ostringstream out;
  out << "fp_inducers " << r.fp_inducers << '\n'
      << "iso_inducers " << r.iso_inducers << '\n';
  return out.str();
}

}  // namespace segeo
