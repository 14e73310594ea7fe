#include "segeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace segeo {

namespace {

double frobenius(const AffinityMatrix& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return std::sqrt(s);
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

// Cyclic Jacobi rotations; fine for the desk-scale matrices this engine
// works with.
void jacobi(std::vector<double>& m, std::vector<double>& vecs, std::size_t n) {
  vecs.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vecs[i * n + i] = 1.0;

  double norm = 0.0;
  for (double v : m) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  const double threshold = 1e-15 * norm;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
    }
    if (std::sqrt(2.0 * off) <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (std::abs(apq) <= threshold / n) continue;
        const double app = m[p * n + p];
        const double aqq = m[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m[k * n + p];
          const double akq = m[k * n + q];
          m[k * n + p] = c * akp - s * akq;
          m[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m[p * n + k];
          const double aqk = m[q * n + k];
          m[p * n + k] = c * apk - s * aqk;
          m[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vecs[k * n + p];
          const double vkq = vecs[k * n + q];
          vecs[k * n + p] = c * vkp - s * vkq;
          vecs[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

std::vector<double> matvec(const AffinityMatrix& a, const std::vector<double>& v) {
  std::vector<double> out(a.n, 0.0);
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) s += a.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

EigenPair power_iteration(const AffinityMatrix& a, double tol) {
  const std::size_t n = a.n;
  const double anorm = frobenius(a);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(1.0 + i);
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> w = matvec(a, v);
    lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - lambda * v[i];
      res += r * r;
    }
    res = std::sqrt(res);
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (res <= tol * anorm) {
      fix_sign(v);
      return {lambda, v, false};
    }
  }
  double res_final = 0.0;
  {
    std::vector<double> w = matvec(a, v);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - lambda * v[i];
      res_final += r * r;
    }
    res_final = std::sqrt(res_final);
  }
  throw convergence_error("leading_eigenpair: power iteration stalled, residual " +
                          std::to_string(res_final));
}

}  // namespace

SpectralResult eigen_decompose(const AffinityMatrix& a, double /*tol*/) {
  const std::size_t n = a.n;
  std::vector<double> m = a.values;
  std::vector<double> vecs;
  jacobi(m, vecs, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return m[i * n + i] > m[j * n + j];
  });

  SpectralResult out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(m[k * n + k]);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = vecs[i * n + k];
    fix_sign(v);
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

EigenPair leading_eigenpair(const AffinityMatrix& a, double tol) {
  if (a.n == 0) throw std::invalid_argument("leading_eigenpair: empty matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("leading_eigenpair: tol must be > 0");

  const double anorm = frobenius(a);
  if (anorm == 0.0) {
    std::vector<double> e1(a.n, 0.0);
    e1[0] = 1.0;
    return {0.0, e1, true};
  }

  if (a.n > 512) return power_iteration(a, tol);

  SpectralResult full = eigen_decompose(a, tol);
  EigenPair out;
  out.value = full.eigenvalues[0];
  out.vector = full.eigenvectors[0];
  out.degenerate = full.eigenvalues.size() > 1 &&
                   std::abs(full.eigenvalues[0] - full.eigenvalues[1]) <
                       1e-9 * std::abs(full.eigenvalues[0]);

  std::vector<double> w = matvec(a, out.vector);
  double res = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double r = w[i] - out.value * out.vector[i];
    res += r * r;
  }
  if (std::sqrt(res) > tol * anorm) {
    throw convergence_error("leading_eigenpair: residual " +
                            std::to_string(std::sqrt(res)) +
                            " exceeds tolerance");
  }
  return out;
}

std::set<std::size_t> membership(const std::vector<double>& v,
                                 double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw std::invalid_argument("membership: rel_threshold must be in (0, 1)");
  }
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  std::set<std::size_t> out;
  if (vmax == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= rel_threshold * vmax) out.insert(i);
  }
  return out;
}

std::vector<PerceptualUnit> extract_units(const AffinityMatrix& a,
                                          const ExtractParams& params) {
  if (params.max_units < 1 || !(params.saliency_floor_fraction > 0.0)) {
    throw std::invalid_argument("extract_units: stop parameters must be positive");
  }
  std::vector<PerceptualUnit> units;
  AffinityMatrix work = a;
  double lambda_first = 0.0;

  for (int rank = 1; rank <= params.max_units; ++rank) {
    const EigenPair lead = leading_eigenpair(work);
    if (lead.value <= 0.0) break;
    if (rank == 1) {
      lambda_first = lead.value;
    } else if (lead.value < params.saliency_floor_fraction * lambda_first) {
      break;
    }
    const std::set<std::size_t> members =
        membership(lead.vector, params.rel_threshold);
    if (members.empty()) break;
    units.push_back({members, lead.value, rank});

    if (params.deflation == Deflation::ZeroRowsCols) {
      for (std::size_t i : members) {
        for (std::size_t j = 0; j < work.n; ++j) {
          work.at(i, j) = 0.0;
          work.at(j, i) = 0.0;
        }
      }
    } else {
      // A <- (I - vv^T) A (I - vv^T), symmetry kept by construction
      const std::vector<double>& v = lead.vector;
      std::vector<double> av = matvec(work, v);
      const double vav = std::inner_product(v.begin(), v.end(), av.begin(), 0.0);
      for (std::size_t i = 0; i < work.n; ++i) {
        for (std::size_t j = i; j < work.n; ++j) {
          const double updated = work.at(i, j) - av[i] * v[j] - v[i] * av[j] +
                                 vav * v[i] * v[j];
          work.at(i, j) = updated;
          work.at(j, i) = updated;
        }
      }
    }
  }
  return units;
}

MeanFieldResult mean_field_evolve(const AffinityMatrix& a,
                                  const std::vector<double>& u0,
                                  const MeanFieldParams& params) {
  if (!(params.dt > 0.0) || !(params.lambda_decay > 0.0)) {
    throw std::invalid_argument("mean_field_evolve: dt and lambda must be > 0");
  }
  if (u0.size() != a.n) {
    throw std::invalid_argument("mean_field_evolve: u0 size mismatch");
  }
  const double sat = params.sigmoid_saturation;
  const double slope = params.sigmoid_slope;
  auto sigmoid = [sat, slope](double x) { return sat * std::tanh(slope * x / sat); };

  std::vector<double> u = u0;
  double residual = 0.0;
  for (int step = 0; step < params.n_steps; ++step) {
    std::vector<double> au(a.n, 0.0);
    for (std::size_t i = 0; i < a.n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.n; ++j) s += a.at(i, j) * u[j];
      au[i] = s;
    }
    residual = 0.0;
    double umax = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) {
      const double du = -params.lambda_decay * u[i] + sigmoid(au[i]);
      residual = std::max(residual, std::abs(du));
      u[i] += params.dt * du;
      umax = std::max(umax, std::abs(u[i]));
    }
    if (umax > 1e8) {
      throw instability_error(
          "mean_field_evolve: activity diverged; reduce dt");
    }
  }
  return {std::move(u), residual};
}

}  // namespace segeo
