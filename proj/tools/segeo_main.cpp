// segeo: sub-Riemannian contour-grouping engine, command-line front end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "segeo/experiments.hpp"
#include "segeo/kernels.hpp"
#include "segeo/pipeline.hpp"
#include "segeo/render.hpp"
#include "segeo/spectral.hpp"
#include "segeo/stimuli.hpp"
#include "segeo/validation.hpp"

namespace {

using namespace segeo;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

PathBackend parse_backend(const std::string& name) {
  if (name == "auto") return PathBackend::Auto;
  if (name == "scalar") return PathBackend::Scalar;
  if (name == "avx2") return PathBackend::Avx2;
  throw CLI::ValidationError("--backend", "expected auto, scalar or avx2");
}

std::string cache_dir_from_env() {
  const char* dir = std::getenv("SEGEO_KERNEL_CACHE");
  return dir ? std::string(dir) : std::string();
}

KernelProvider make_provider(PathBackend backend) {
  const std::string dir = cache_dir_from_env();
  if (dir.empty()) return direct_provider(backend);
  return caching_provider(dir, backend);
}

struct KernelFlags {
  std::string kind = "fp";
  double sigma = 0.15;
  double sigma1 = 1.2;
  double sigma3 = 0.11;
  double sigma_iso = 0.15;
  double rho = 0.15;
  std::uint64_t paths = 1000000;
  std::uint64_t steps = 0;  // 0: auto from the stimulus
  double step = 1.0;
  std::uint64_t seed = 0;
  std::string mode = "unpolarized";
  std::size_t nx = 101, ny = 101, ntheta = 64;
  double half_width = 50.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "kernel kind: fp, srl or iso")
        ->check(CLI::IsMember({"fp", "srl", "iso"}));
    cmd->add_option("--sigma", sigma, "FP angular diffusion");
    cmd->add_option("--sigma1", sigma1, "SRL spatial diffusion");
    cmd->add_option("--sigma3", sigma3, "SRL angular diffusion");
    cmd->add_option("--sigma-iso", sigma_iso, "isotropic spatial diffusion");
    cmd->add_option("--rho", rho, "isotropic angular diffusion");
    cmd->add_option("--paths", paths, "number of Monte-Carlo paths");
    cmd->add_option("--steps", steps, "path length in steps (0: auto H rule)");
    cmd->add_option("--step", step, "step length in pixels");
    cmd->add_option("--seed", seed, "simulation seed");
    cmd->add_option("--mode", mode, "polarized or unpolarized")
        ->check(CLI::IsMember({"polarized", "unpolarized"}));
    cmd->add_option("--nx", nx, "grid nodes in x");
    cmd->add_option("--ny", ny, "grid nodes in y");
    cmd->add_option("--ntheta", ntheta, "grid nodes in theta");
    cmd->add_option("--half-width", half_width, "planar half extent in pixels");
  }

  KernelParams params() const {
    KernelParams p;
    p.kind = kind == "fp"    ? KernelKind::FokkerPlanck
             : kind == "srl" ? KernelKind::SubRiemannianLaplacian
                             : KernelKind::IsotropicLaplacian;
    p.sigma = sigma;
    p.sigma1 = sigma1;
    p.sigma3 = sigma3;
    p.sigma_iso = sigma_iso;
    p.rho = rho;
    p.n_paths = paths;
    p.steps = steps;
    p.step = step;
    p.seed = seed;
    p.mode = mode == "polarized" ? Polarity::Polarized : Polarity::Unpolarized;
    return p;
  }

  GridSpec grid() const {
    GridSpec s;
    s.nx = nx;
    s.ny = ny;
    s.ntheta = ntheta;
    s.half_width_x = half_width;
    s.half_width_y = half_width;
    return s;
  }
};

struct StimulusFlags {
  std::string file;
  std::string generate;
  double angle_step = 30.0;
  std::uint64_t seed = 0;
  double side = 60.0;
  double radius = 15.0;
  double mouth_angle = 0.0;
  double rotation_jitter = 0.0;
  double jitter = 0.0;
  double offset = 0.0;
  std::string mode = "unpolarized";

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--stimulus", file, "stimulus text file");
    auto* g = cmd->add_option(
        "--generate", generate,
        "generator: fhh, kanizsa-triangle, kanizsa-square, kanizsa-bar, "
        "contrast-square, curve-line");
    g->check(CLI::IsMember({"fhh", "kanizsa-triangle", "kanizsa-square",
                            "kanizsa-bar", "contrast-square", "curve-line"}));
    f->excludes(g);
    cmd->add_option("--angle-step", angle_step, "FHH turning angle, degrees");
    cmd->add_option("--stimulus-seed", seed, "generator seed");
    cmd->add_option("--side", side, "Kanizsa figure side, pixels");
    cmd->add_option("--radius", radius, "inducer radius, pixels");
    cmd->add_option("--mouth-angle", mouth_angle, "inducer mouth rotation, degrees");
    cmd->add_option("--rotation-jitter", rotation_jitter,
                    "per-inducer rotation spread, degrees");
    cmd->add_option("--jitter", jitter, "curve orientation jitter, radians");
    cmd->add_option("--offset", offset, "Kanizsa-bar lateral offset, pixels");
    cmd->add_option("--stimulus-mode", mode, "polarized or unpolarized")
        ->check(CLI::IsMember({"polarized", "unpolarized"}));
  }

  Stimulus build() const {
    const Polarity pol =
        mode == "polarized" ? Polarity::Polarized : Polarity::Unpolarized;
    if (!file.empty()) return parse_stimulus(read_file(file));
    if (generate.empty()) {
      throw CLI::ValidationError("stimulus",
                                 "exactly one of --stimulus or --generate is required");
    }
    if (generate == "fhh") {
      FhhParams p;
      p.angle_step_deg = angle_step;
      p.seed = seed;
      p.mode = pol;
      return gen_fhh(p);
    }
    KanizsaParams kp;
    kp.side = side;
    kp.inducer_radius = radius;
    kp.mouth_angle_deg = mouth_angle;
    kp.rotation_jitter_deg = rotation_jitter;
    kp.mode = pol;
    if (generate == "kanizsa-triangle") return gen_kanizsa_triangle(kp);
    if (generate == "kanizsa-square") return gen_kanizsa_square(kp);
    if (generate == "kanizsa-bar") return gen_kanizsa_bar(kp, offset);
    if (generate == "contrast-square") {
      ContrastSquareParams p;
      p.side = side;
      p.mode = pol;
      return gen_contrast_square(p);
    }
    CurveLineParams p;
    p.curve_jitter = jitter;
    p.seed = seed;
    p.mode = pol;
    return gen_curve_line(p);
  }
};

struct SpectralFlags {
  double threshold = 0.3;
  double floor_fraction = 0.1;
  int max_units = 10;
  std::string deflation = "zero";

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "membership threshold, relative");
    cmd->add_option("--floor", floor_fraction, "saliency floor fraction");
    cmd->add_option("--max-units", max_units, "maximum units extracted");
    cmd->add_option("--deflation", deflation, "zero or orthogonal")
        ->check(CLI::IsMember({"zero", "orthogonal"}));
  }

  ExtractParams params() const {
    ExtractParams p;
    p.rel_threshold = threshold;
    p.saliency_floor_fraction = floor_fraction;
    p.max_units = max_units;
    p.deflation =
        deflation == "zero" ? Deflation::ZeroRowsCols : Deflation::Orthogonal;
    return p;
  }
};

int cmd_kernel(const KernelFlags& kf, const std::string& out_path,
               PathBackend backend) {
  KernelParams params = kf.params();
  if (params.steps == 0) params.steps = 30;
  KernelGrid grid = simulate_kernel(params, kf.grid(), backend);
  if (params.kind == KernelKind::FokkerPlanck) grid = symmetrize(grid);
  save_kernel(grid, out_path);

  double mass = 0.0;
  for (double v : grid.values) mass += v;
  mass *= grid.geom.bin_volume();
  const ConeMasses cones = cone_masses(grid);
  std::cout.precision(12);
  std::cout << "kind " << to_string(params.kind) << '\n'
            << "mass " << mass << '\n'
            << "anisotropy " << cones.forward / cones.lateral << '\n'
            << "file " << out_path << '\n';
  return 0;
}

int cmd_group(const StimulusFlags& sf, const KernelFlags& kf,
              const SpectralFlags& spf, const std::string& kernel_path,
              const std::string& report_path, const std::string& render_path,
              PathBackend backend) {
  const Stimulus stim = sf.build();
  if (stim.elements.empty()) {
    throw CLI::ValidationError("stimulus", "stimulus is empty");
  }
  KernelGrid grid;
  if (!kernel_path.empty()) {
    grid = load_kernel(kernel_path);
  } else {
    KernelParams params = kf.params();
    if (params.steps == 0) params.steps = auto_steps(stim, params.step);
    grid = make_provider(backend)(params, kf.grid());
  }
  const GroupResult result = group_stimulus(stim, grid, spf.params());
  const std::string report = unit_report(result);
  if (report_path.empty()) {
    std::cout << report;
  } else {
    write_file(report_path, report);
  }
  if (!render_path.empty()) {
    write_file(render_path, render_svg(stim, result.units));
  }
  return 0;
}

int cmd_experiment(const std::string& name, PathBackend backend) {
  const KernelProvider provider = make_provider(backend);
  if (name == "fhh-sweep") {
    std::cout << format_fhh_rows(experiment_fhh_sweep(provider));
  } else if (name == "square-sweep") {
    std::cout << format_square_sweep(experiment_square_sweep(provider));
  } else if (name == "swap") {
    std::cout << format_swap(experiment_swap(provider));
  } else if (name == "fp-vs-srl") {
    std::cout << format_dichotomy(experiment_fp_vs_srl(provider));
  } else if (name == "isotropic") {
    std::cout << format_isotropic(experiment_isotropic(provider));
  } else {
    throw CLI::ValidationError(
        "experiment", "unknown experiment '" + name +
                          "'; available: fhh-sweep, square-sweep, swap, "
                          "fp-vs-srl, isotropic");
  }
  return 0;
}

int cmd_validate_self_fit(const KernelFlags& kf, PathBackend backend) {
  KernelParams a = kf.params();
  if (a.steps == 0) a.steps = 30;
  KernelParams b = a;
  b.seed = a.seed + 1;
  const KernelGrid ga = simulate_kernel(a, kf.grid(), backend);
  const KernelGrid gb = simulate_kernel(b, kf.grid(), backend);
  const RegionPartition part = make_grid_partition(
      -kf.half_width, -kf.half_width, kf.half_width, kf.half_width, 10, 10);
  const double e = fit_error(region_densities(ga, part), region_densities(gb, part));
  std::cout.precision(12);
  std::cout << "self_fit_error " << e << '\n';
  return 0;
}

// One configuration per line: "name cx cy ct fx fy ft [fx fy ft ...]".
int cmd_validate_facilitation(const std::string& config_path,
                              const std::string& kernel_path,
                              const KernelFlags& kf, PathBackend backend) {
  KernelGrid grid;
  if (!kernel_path.empty()) {
    grid = load_kernel(kernel_path);
  } else {
    KernelParams params = kf.params();
    if (params.steps == 0) params.steps = 30;
    params.kind = KernelKind::FokkerPlanck;
    grid = make_provider(backend)(params, kf.grid());
  }
  std::istringstream in(read_file(config_path));
  std::string line;
  int lineno = 0;
  std::cout.precision(12);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    LiftedPoint center;
    if (!(ls >> name >> center.x >> center.y >> center.theta)) {
      throw std::runtime_error("facilitation config line " +
                               std::to_string(lineno) + ": expected "
                               "'name cx cy ct fx fy ft ...'");
    }
    std::vector<LiftedPoint> flankers;
    LiftedPoint f;
    while (ls >> f.x >> f.y >> f.theta) flankers.push_back(f);
    std::cout << name << ' ' << facilitation_score(center, flankers, grid)
              << '\n';
  }
  return 0;
}

int cmd_validate_sweep(const std::string& partition_path,
                       const std::string& density_path,
                       const std::vector<double>& sigmas,
                       const std::vector<std::uint64_t>& paths_list,
                       const std::vector<std::uint64_t>& steps_list,
                       const KernelFlags& kf, PathBackend backend) {
  if (sigmas.empty() || paths_list.empty() || steps_list.empty()) {
    throw CLI::ValidationError("sweep",
                               "the sweep grid is empty: provide --sigmas, "
                               "--paths-list and --steps-list");
  }
  const RegionPartition part = parse_partition(read_file(partition_path));
  std::vector<double> target;
  {
    std::istringstream in(read_file(density_path));
    double v;
    while (in >> v) target.push_back(v);
  }
  if (target.size() != part.count()) {
    throw std::runtime_error("density file entries do not match partition size");
  }

  std::cout.precision(12);
  std::cout << "sigma paths steps fit_error\n";
  double best_e = -1.0;
  std::string best_row;
  for (double sigma : sigmas) {
    for (std::uint64_t paths : paths_list) {
      for (std::uint64_t steps : steps_list) {
        KernelParams p = kf.params();
        p.kind = KernelKind::FokkerPlanck;
        p.sigma = sigma;
        p.n_paths = paths;
        p.steps = steps;
        const KernelGrid grid = make_provider(backend)(p, kf.grid());
        const double e = fit_error(region_densities(grid, part), target);
        std::ostringstream row;
        row.precision(12);
        row << sigma << ' ' << paths << ' ' << steps << ' ' << e;
        std::cout << row.str() << '\n';
        if (best_e < 0.0 || e < best_e) {
          best_e = e;
          best_row = row.str();
        }
      }
    }
  }
  std::cout << "best " << best_row << '\n';
  return 0;
}

int cmd_render(const StimulusFlags& sf, const std::string& report_path,
               const std::string& out_path, double segment_length) {
  const Stimulus stim = sf.build();
  std::vector<PerceptualUnit> units;
  if (!report_path.empty()) {
    std::istringstream in(read_file(report_path));
    std::string word;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      if (!(ls >> word) || word != "unit") continue;
      PerceptualUnit u;
      std::string tag, members;
      if (!(ls >> u.rank >> tag >> u.saliency >> tag >> members)) continue;
      std::istringstream ms(members);
      std::string tok;
      while (std::getline(ms, tok, ',')) {
        u.members.insert(static_cast<std::size_t>(std::stoull(tok)));
      }
      units.push_back(std::move(u));
    }
  }
  RenderSpec spec;
  spec.segment_length = segment_length;
  const std::string svg = render_svg(stim, units, spec);
  if (out_path.empty()) {
    std::cout << svg;
  } else {
    write_file(out_path, svg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Riemannian contour grouping engine"};
  app.require_subcommand(1);
  std::string backend_name = "auto";
  app.add_option("--backend", backend_name, "path backend: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "simulate and save a kernel");
  KernelFlags kernel_kf;
  kernel_kf.attach(kernel_cmd);
  std::string kernel_out;
  kernel_cmd->add_option("-o,--out", kernel_out, "output .sgk file")->required();

  // group
  auto* group_cmd = app.add_subcommand("group", "extract perceptual units");
  StimulusFlags group_sf;
  KernelFlags group_kf;
  SpectralFlags group_spf;
  group_sf.attach(group_cmd);
  group_kf.attach(group_cmd);
  group_spf.attach(group_cmd);
  std::string group_kernel, group_report, group_render;
  group_cmd->add_option("--kernel", group_kernel, "precomputed .sgk kernel");
  group_cmd->add_option("--out", group_report, "report file (default stdout)");
  group_cmd->add_option("--render", group_render, "SVG output file");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a named sweep");
  std::string exp_name;
  exp_cmd->add_option("name", exp_name,
                      "fhh-sweep, square-sweep, swap, fp-vs-srl, isotropic")
      ->required();

  // validate
  auto* val_cmd = app.add_subcommand("validate", "fit and facilitation checks");
  val_cmd->require_subcommand(1);
  KernelFlags val_kf;

  auto* self_cmd = val_cmd->add_subcommand("self-fit",
                                           "fit error between two seeds");
  val_kf.attach(self_cmd);

  auto* fac_cmd = val_cmd->add_subcommand("facilitation",
                                          "flanker score table");
  std::string fac_config, fac_kernel;
  fac_cmd->add_option("--config", fac_config, "flanker configuration file")
      ->required();
  fac_cmd->add_option("--kernel", fac_kernel, "precomputed .sgk kernel");
  KernelFlags fac_kf;
  fac_kf.attach(fac_cmd);

  auto* sweep_cmd = val_cmd->add_subcommand("sweep",
                                            "grid-search kernel parameters");
  std::string sweep_partition, sweep_density;
  std::vector<double> sweep_sigmas;
  std::vector<std::uint64_t> sweep_paths, sweep_steps;
  sweep_cmd->add_option("--partition", sweep_partition, "partition file")
      ->required();
  sweep_cmd->add_option("--density", sweep_density, "target density file")
      ->required();
  sweep_cmd->add_option("--sigmas", sweep_sigmas, "sigma values");
  sweep_cmd->add_option("--paths-list", sweep_paths, "path counts");
  sweep_cmd->add_option("--steps-list", sweep_steps, "step counts");
  KernelFlags sweep_kf;
  sweep_kf.attach(sweep_cmd);

  // render
  auto* render_cmd = app.add_subcommand("render", "draw a stimulus as SVG");
  StimulusFlags render_sf;
  render_sf.attach(render_cmd);
  std::string render_report, render_out;
  double render_seglen = 6.0;
  render_cmd->add_option("--report", render_report, "unit report to color by");
  render_cmd->add_option("-o,--out", render_out, "SVG file (default stdout)");
  render_cmd->add_option("--segment-length", render_seglen, "segment length, px");

  CLI11_PARSE(app, argc, argv);

  try {
    const PathBackend backend = parse_backend(backend_name);
    if (kernel_cmd->parsed()) return cmd_kernel(kernel_kf, kernel_out, backend);
    if (group_cmd->parsed()) {
      return cmd_group(group_sf, group_kf, group_spf, group_kernel,
                       group_report, group_render, backend);
    }
    if (exp_cmd->parsed()) return cmd_experiment(exp_name, backend);
    if (val_cmd->parsed()) {
      if (self_cmd->parsed()) return cmd_validate_self_fit(val_kf, backend);
      if (fac_cmd->parsed()) {
        return cmd_validate_facilitation(fac_config, fac_kernel, fac_kf, backend);
      }
      return cmd_validate_sweep(sweep_partition, sweep_density, sweep_sigmas,
                                sweep_paths, sweep_steps, sweep_kf, backend);
    }
    if (render_cmd->parsed()) {
      return cmd_render(render_sf, render_report, render_out, render_seglen);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
