#pragma once

// Symmetric eigen-analysis of affinity matrices, iterative perceptual-unit
// extraction, and the discrete mean-field activity dynamics.

#include <set>
#include <stdexcept>
#include <vector>

#include "segeo/affinity.hpp"

namespace segeo {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, largest-|component| positive
  bool degenerate = false;     // zero matrix, or near-equal leading values
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Algebraically largest eigenvalue and eigenvector of a symmetric matrix.
// Dense decomposition up to n = 512, power iteration with deflation above.
EigenPair leading_eigenpair(const AffinityMatrix& a, double tol = 1e-10);

// Full spectrum, eigenvalues descending, orthonormal eigenvectors.
struct SpectralResult {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
};
SpectralResult eigen_decompose(const AffinityMatrix& a, double tol = 1e-10);

// Indices i with |v_i| >= rel_threshold * max_j |v_j|; empty for the zero
// vector.
std::set<std::size_t> membership(const std::vector<double>& v,
                                 double rel_threshold);

struct PerceptualUnit {
  std::set<std::size_t> members;
  double saliency = 0.0;
  int rank = 0;  // extraction order, starting at 1
};

enum class Deflation {
  ZeroRowsCols,  // remove the identified unit from the matrix
  Orthogonal,    // project onto the orthogonal complement of the eigenvector
};

struct ExtractParams {
  double rel_threshold = 0.3;
  double saliency_floor_fraction = 0.1;
  int max_units = 10;
  Deflation deflation = Deflation::ZeroRowsCols;
};

// Repeated leading-eigenvector extraction with deflation; stops when the
// current eigenvalue drops below the floor fraction of the first one.
std::vector<PerceptualUnit> extract_units(const AffinityMatrix& a,
                                          const ExtractParams& params = {});

struct MeanFieldParams {
  double lambda_decay = 1.0;
  double sigmoid_slope = 1.0;
  double sigmoid_saturation = 1.0;
  double dt = 0.01;
  int n_steps = 10000;
};

struct MeanFieldResult {
  std::vector<double> u;    // final activity
  double residual = 0.0;    // ||du/dt||_inf at the last step
};

struct instability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit Euler integration of du/dt = -lambda u + s(A u) with
// s(x) = saturation * tanh(slope * x / saturation).
MeanFieldResult mean_field_evolve(const AffinityMatrix& a,
                                  const std::vector<double>& u0,
                                  const MeanFieldParams& params = {});

}  // namespace segeo
