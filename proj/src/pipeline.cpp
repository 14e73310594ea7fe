#include "segeo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace segeo {

double max_inducer_distance(const Stimulus& s) {
  if (s.elements.size() < 2) {
    throw std::invalid_argument("max_inducer_distance: need at least two elements");
  }
  std::vector<std::size_t> idx;
  const bool labeled = s.labels.size() == s.elements.size();
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    if (labeled && s.labels[i] == "background") continue;
    idx.push_back(i);
  }
  if (idx.size() < 2) {  // all background: fall back to every element
    idx.resize(s.elements.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  }
  double d2max = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const LiftedPoint& p = s.elements[idx[a]];
      const LiftedPoint& q = s.elements[idx[b]];
      const double dx = p.x - q.x;
      const double dy = p.y - q.y;
      d2max = std::max(d2max, dx * dx + dy * dy);
    }
  }
  return std::sqrt(d2max);
}

std::uint64_t auto_steps(const Stimulus& s, double step_length) {
  if (!(step_length > 0.0)) {
    throw std::invalid_argument("auto_steps: step length must be positive");
  }
  const double horizon = max_inducer_distance(s) / 3.0;
  const double n = std::round(horizon / step_length);
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

GroupResult group_stimulus(const Stimulus& s, const KernelGrid& grid,
                           const ExtractParams& params) {
  if (s.elements.empty()) {
    throw std::invalid_argument("group_stimulus: empty stimulus");
  }
  GroupResult out;
  out.affinity = build_affinity(s, grid);
  out.units = extract_units(out.affinity, params);
  out.eigenvalues.reserve(out.units.size());
  for (const PerceptualUnit& u : out.units) out.eigenvalues.push_back(u.saliency);
  return out;
}

std::string unit_report(const GroupResult& result) {
  std::ostringstream out;
  out.precision(12);
  for (const PerceptualUnit& u : result.units) {
    out << "unit " << u.rank << " saliency " << u.saliency << " members ";
    bool first = true;
    for (std::size_t i : u.members) {
      if (!first) out << ',';
      out << i;
      first = false;
    }
    out << '\n';
  }
  out << "eigenvalues";
  for (double l : result.eigenvalues) out << ' ' << l;
  out << '\n';
  return out.str();
}

LabelScore score_against_label(const Stimulus& s, const PerceptualUnit& unit,
                               const std::string& label_prefix) {
  LabelScore score;
  if (s.labels.size() != s.elements.size()) return score;
  std::size_t labeled = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    const bool match = s.labels[i].rfind(label_prefix, 0) == 0;
    if (match) ++labeled;
    if (match && unit.members.count(i)) ++hits;
  }
  if (labeled > 0) score.recall = static_cast<double>(hits) / static_cast<double>(labeled);
  if (!unit.members.empty()) {
    score.precision =
        static_cast<double>(hits) / static_cast<double>(unit.members.size());
  }
  return score;
}

}  // namespace segeo
