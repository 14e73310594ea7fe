#pragma once

// The grouping experiment families behind the `experiment` subcommand:
// FHH angle sweep, Kanizsa square mouth-angle sweep, curve-vs-line
// eigenvalue swap, FP-vs-SRL range dichotomy, and the isotropic control.
// Shared between the CLI and the acceptance harness so both run the same
// configurations.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "segeo/kernels.hpp"
#include "segeo/pipeline.hpp"

namespace segeo {

// How experiments obtain kernels; lets callers add a file cache.
using KernelProvider =
    std::function<KernelGrid(const KernelParams&, const GridSpec&)>;

// Simulates on demand (FP kernels symmetrized).
KernelProvider direct_provider(PathBackend backend = PathBackend::Auto);

// Loads from / saves to cache_dir, keyed by a parameter digest; falls back
// to simulation on a miss.
KernelProvider caching_provider(std::string cache_dir,
                                PathBackend backend = PathBackend::Auto);

struct FhhRow {
  double angle_deg = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double recall = 0.0;         // unit-1 recall of "path" labels, seed-averaged
  double contamination = 0.0;  // background fraction of unit-1, seed-averaged
};
std::vector<FhhRow> experiment_fhh_sweep(
    const KernelProvider& provider,
    const std::vector<double>& angles_deg = {15, 30, 45, 60, 90},
    const std::vector<std::uint64_t>& seeds = {1, 2, 3, 4, 5});

struct SquareRow {
  double mouth_angle_deg = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int inducers_spanned = 0;  // distinct inducers with a member in unit 1
  bool cross_inducer = false;
};
struct SquareSweep {
  std::vector<SquareRow> rows;
  double critical_angle_deg = 0.0;  // midpoint of the last cross->single flip
};
SquareSweep experiment_square_sweep(
    const KernelProvider& provider,
    const std::vector<double>& angles_deg = {5, 15, 25, 35, 45});

struct SwapResult {
  double lambda_curve_base = 0.0;
  double lambda_line_base = 0.0;
  double lambda_curve_pert = 0.0;
  double lambda_line_pert = 0.0;
  double curve_overlap = 0.0;  // Jaccard overlap of the curve unit before/after
  double line_overlap = 0.0;
  bool swapped = false;
};
SwapResult experiment_swap(const KernelProvider& provider,
                           double jitter_rad = 0.17453292519943295);

struct DichotomyResult {
  bool fp_groups_far = false;    // FP joins widely separated collinear segments
  bool srl_groups_far = false;
  bool srl_groups_sharp = false; // SRL joins a sharp-angle chain
  bool fp_groups_sharp = false;
};
DichotomyResult experiment_fp_vs_srl(const KernelProvider& provider);

struct IsoResult {
  int fp_inducers = 0;   // inducers spanned by unit 1 under FP
  int iso_inducers = 0;  // same under the isotropic kernel
};
IsoResult experiment_isotropic(const KernelProvider& provider);

// The canonical stimuli the experiments (and acceptance runs) use.
Stimulus canonical_kanizsa_triangle(KernelKind kind);
Stimulus canonical_kanizsa_square(double mouth_angle_deg);
Stimulus canonical_contrast_square(Polarity mode);

// Tabular text renderings for the CLI.
std::string format_fhh_rows(const std::vector<FhhRow>& rows);
std::string format_square_sweep(const SquareSweep& sweep);
std::string format_swap(const SwapResult& r);
std::string format_dichotomy(const DichotomyResult& r);
std::string format_isotropic(const IsoResult& r);

}  // namespace segeo
