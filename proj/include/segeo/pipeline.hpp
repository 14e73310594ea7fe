#pragma once

// End-to-end grouping pipeline: stimulus + kernel -> affinity -> units.

#include <string>
#include <vector>

#include "segeo/affinity.hpp"
#include "segeo/kernels.hpp"
#include "segeo/spectral.hpp"
#include "segeo/stimuli.hpp"

namespace segeo {

// Maximum pairwise distance between stimulus elements.  Elements labeled
// "background" are excluded whenever any element carries another label, so
// the horizon is set by the inducers when a stimulus distinguishes them.
double max_inducer_distance(const Stimulus& s);

// Auto rule for the diffusion horizon: H = (1/3) d_max, converted to a step
// count with the configured step length (at least 1).
std::uint64_t auto_steps(const Stimulus& s, double step_length);

struct GroupResult {
  AffinityMatrix affinity;
  std::vector<PerceptualUnit> units;
  std::vector<double> eigenvalues;  // saliency of each extracted unit
};

// Runs the three-step algorithm: affinity matrix, leading eigenvectors with
// deflation, membership thresholding.
GroupResult group_stimulus(const Stimulus& s, const KernelGrid& grid,
                           const ExtractParams& params = {});

// Line-oriented report:
//   unit <rank> saliency <value> members <i,j,k,...>
//   ...
//   eigenvalues <l1 l2 ... lm>
std::string unit_report(const GroupResult& result);

// Recall and precision of unit members against elements whose label starts
// with the prefix; zero when the unit or the labeled set is empty.
struct LabelScore {
  double recall = 0.0;
  double precision = 0.0;
};
LabelScore score_against_label(const Stimulus& s, const PerceptualUnit& unit,
                               const std::string& label_prefix);

}  // namespace segeo
