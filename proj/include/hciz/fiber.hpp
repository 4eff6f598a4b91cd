#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/matrix.hpp"
#include "hciz/random.hpp"

namespace hciz {

inline double default_cluster_tol(std::span<const double> row) {
  double span = row.empty() ? 0.0 : row.front() - row.back();
  return 1e-8 * (1.0 + std::abs(span));
}

// Distinct values delta_1 > ... > delta_m of a row with multiplicities, and
// the vector mu left after removing n_i - 1 copies of each delta_i from the
// row above.
struct ReducedSpectrum {
  std::vector<double> deltas;
  std::vector<int> mults;
  std::vector<double> mu;
};

// Clusters row_km1 into distinct values and strips the forced copies from
// row_k. Both rows sorted non-increasing.
inline ReducedSpectrum reduced_spectrum(std::span<const double> row_k,
                                        std::span<const double> row_km1,
                                        double tol) {
  if (row_k.size() != row_km1.size() + 1) {
    throw DomainError("reduced_spectrum: rows must have sizes k and k-1");
  }
  ReducedSpectrum rs;
  const int km1 = static_cast<int>(row_km1.size());
  int p = 0;
  while (p < km1) {
    int q = p;
    while (q + 1 < km1 && row_km1[p] - row_km1[q + 1] <= tol) ++q;
    double sum = 0.0;
    for (int i = p; i <= q; ++i) sum += row_km1[i];
    rs.deltas.push_back(sum / (q - p + 1));
    rs.mults.push_back(q - p + 1);
    p = q + 1;
  }
  std::vector<double> remaining(row_k.begin(), row_k.end());
  std::vector<bool> removed(remaining.size(), false);
  for (std::size_t i = 0; i < rs.deltas.size(); ++i) {
    double spread = 2.0 * tol * rs.mults[i];
    for (int copy = 0; copy + 1 < rs.mults[i]; ++copy) {
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < remaining.size(); ++j) {
        if (removed[j]) continue;
        double dist = std::abs(remaining[j] - rs.deltas[i]);
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(j);
        }
      }
      if (best < 0 || best_dist > spread) {
        throw InconsistencyError(
            "reduced_spectrum: forced copy of a repeated value is missing");
      }
      removed[best] = true;
    }
  }
  for (std::size_t j = 0; j < remaining.size(); ++j) {
    if (!removed[j]) rs.mu.push_back(remaining[j]);
  }
  std::sort(rs.mu.begin(), rs.mu.end(), std::greater<double>());
  if (rs.mu.size() != rs.deltas.size() + 1) {
    throw InconsistencyError("reduced_spectrum: wrong reduced length");
  }
  return rs;
}

// Sphere radii r_i = sqrt(-prod_j (delta_i - mu_j) / prod_{j!=i}
// (delta_i - delta_j)). Interlacing makes the radicand nonnegative; small
// negative values from rounding are clamped to zero.
inline std::vector<double> sphere_radii(const ReducedSpectrum& rs) {
  const int m = static_cast<int>(rs.deltas.size());
  std::vector<double> r(m);
  for (int i = 0; i < m; ++i) {
    double num = 1.0;
    for (double mu : rs.mu) num *= rs.deltas[i] - mu;
    double den = 1.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) den *= rs.deltas[i] - rs.deltas[j];
    }
    double radicand = -num / den;
    if (radicand < 0.0) {
      if (radicand < -1e-12) {
        throw InconsistencyError("sphere_radii: negative radicand");
      }
      radicand = 0.0;
    }
    r[i] = std::sqrt(radicand);
  }
  return r;
}

// The randomness of one extension step: new corner entry c, per-block sphere
// radii, and the sampled off-diagonal column v in the diagonalized basis.
struct FiberStep {
  double c = 0.0;
  std::vector<double> radii;
  Eigen::VectorXcd v;
  ReducedSpectrum reduced;
};

inline FiberStep make_fiber_step(std::span<const double> row_k,
                                 std::span<const double> row_km1, double tol,
                                 Rng& rng) {
  FiberStep step;
  step.reduced = reduced_spectrum(row_k, row_km1, tol);
  step.radii = sphere_radii(step.reduced);
  double sk = 0.0, sk1 = 0.0;
  for (double v : row_k) sk += v;
  for (double v : row_km1) sk1 += v;
  step.c = sk - sk1;
  step.v.resize(static_cast<int>(row_km1.size()));
  int off = 0;
  for (std::size_t i = 0; i < step.reduced.deltas.size(); ++i) {
    int ni = step.reduced.mults[i];
    step.v.segment(off, ni) = sample_complex_sphere(ni, step.radii[i], rng);
    off += ni;
  }
  return step;
}

// Grows a (k-1)x(k-1) matrix with spectrum row_km1 into a k x k matrix with
// spectrum row_k, uniformly over all admissible extensions. cluster_tol < 0
// picks the default from the spread of row_km1.
inline HermitianMatrix extend_submatrix(const HermitianMatrix& s_prev,
                                        std::span<const double> row_k,
                                        std::span<const double> row_km1,
                                        Rng& rng, double cluster_tol = -1.0) {
  const int km1 = s_prev.dim();
  if (static_cast<int>(row_km1.size()) != km1 ||
      static_cast<int>(row_k.size()) != km1 + 1) {
    throw DomainError("extend_submatrix: row sizes mismatch");
  }
  SpectralDecomposition sd = hermitian_eigendecompose(s_prev);
  double scale = 1.0;
  for (double v : row_km1) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < km1; ++i) {
    if (std::abs(sd.eigenvalues[i] - row_km1[i]) > 1e-8 * scale) {
      throw DomainError("extend_submatrix: spectrum of S_prev != row_km1");
    }
  }
  if (cluster_tol < 0.0) cluster_tol = default_cluster_tol(row_km1);
  FiberStep step = make_fiber_step(row_k, row_km1, cluster_tol, rng);
  Eigen::VectorXcd w = sd.eigenvectors.mat() * step.v;
  Eigen::MatrixXcd out(km1 + 1, km1 + 1);
  out.topLeftCorner(km1, km1) = s_prev.mat();
  out.col(km1).head(km1) = w;
  out.row(km1).head(km1) = w.adjoint();
  out(km1, km1) = step.c;
  return HermitianMatrix(std::move(out));
}

// Uniform random matrix in the fiber of the Rayleigh map over P, built by
// growing S[1] -> S[n] one bordered row/column at a time. The multiplicity
// clustering tolerance is taken from the spread of the top row.
inline HermitianMatrix sample_fiber(const RayleighTriangle& p, Rng& rng) {
  if (!p.interlaces(kMembershipTol)) {
    throw DomainError("sample_fiber: triangle violates interlacing");
  }
  const int n = p.size();
  double tol = default_cluster_tol(p.row(n));
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = p.at(1, 1);
  HermitianMatrix s(m);
  for (int k = 2; k <= n; ++k) {
    s = extend_submatrix(s, p.row(k), p.row(k - 1), rng, tol);
  }
  return s;
}

}  // namespace hciz
