#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "hciz/errors.hpp"
#include "hciz/matrix.hpp"
#include "hciz/orbit.hpp"

namespace hciz {

// Parameters of the private rank-k approximation mechanism. The sensitivity
// of <A, P> under a one-row swap of the dataset is 1, so sensitivity_sigma
// stays at its default except for experiments.
struct DPConfig {
  double epsilon = 1.0;
  int k = 1;
  double sensitivity_sigma = 1.0;
  double utility_delta = 0.1;
  double utility_constant_C = 16.0;

  void validate(int d) const {
    if (epsilon <= 0.0) throw DomainError("DPConfig: epsilon must be > 0");
    if (k < 1 || k > d) throw DomainError("DPConfig: k out of range");
    if (sensitivity_sigma <= 0.0) {
      throw DomainError("DPConfig: sensitivity_sigma must be > 0");
    }
    if (utility_delta <= 0.0 || utility_delta >= 1.0) {
      throw DomainError("DPConfig: utility_delta must be in (0,1)");
    }
  }
};

// Rank-k Hermitian projection sampled by the mechanism; checks P* = P,
// P^2 = P and trace P = k to 1e-8 at construction.
struct ProjectionSample {
  HermitianMatrix P;
  int rank;

  ProjectionSample(HermitianMatrix p, int k) : P(std::move(p)), rank(k) {
    Eigen::MatrixXcd diff = P.mat() * P.mat() - P.mat();
    if (diff.cwiseAbs().maxCoeff() > 1e-8) {
      throw StructuralError("ProjectionSample: P^2 != P");
    }
    if (std::abs(P.mat().trace().real() - rank) > 1e-8) {
      throw StructuralError("ProjectionSample: trace(P) != k");
    }
  }
};

inline double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.mat().adjoint() * b.mat()).trace().real();
}

// Exponential mechanism over rank-k projections: sample from the density
// proportional to exp((eps/4sigma) <A, P>) on the orbit of k ones, with the
// infinity-divergence sampler at xi = eps/2, then conjugate into A's
// eigenbasis. Eigenvalues are recomputed from A rather than taken on trust.
// A custom SamplerConfig overrides the derived walk parameters.
inline ProjectionSample dp_rank_k_projection(
    const HermitianMatrix& a, const DPConfig& cfg, Rng& rng,
    const std::optional<SamplerConfig>& sampler_cfg = std::nullopt) {
  const int d = a.dim();
  cfg.validate(d);
  SpectralDecomposition sd = hermitian_eigendecompose(a);
  double scale = 1.0 + std::abs(sd.eigenvalues[0]);
  if (sd.eigenvalues[d - 1] < -1e-9 * scale) {
    throw DomainError("dp_rank_k_projection: A must be PSD");
  }
  if (cfg.k == d) {
    // The orbit of the identity is a single point.
    return ProjectionSample(
        HermitianMatrix(Eigen::MatrixXcd::Identity(d, d)), d);
  }
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
  lambda.head(cfg.k).setOnes();
  Eigen::VectorXd y =
      (cfg.epsilon / (4.0 * cfg.sensitivity_sigma)) * sd.eigenvalues;
  double xi = cfg.epsilon / 2.0;

  GTPolytope poly = build_polytope(lambda);
  ExponentSpec spec = reduce_exponent(y, poly);
  SamplerConfig walk_cfg =
      sampler_cfg ? *sampler_cfg : make_inf_config(poly, spec, xi);
  walk_cfg.validate();
  RayleighTriangle p = grid_walk_chain(poly, spec, walk_cfg, rng, 1).front();
  HermitianMatrix x = sample_fiber(p, rng);
  return ProjectionSample(sd.eigenvectors.conjugate(x), cfg.k);
}

// Batch version: one set of chains for the whole batch instead of a fresh
// burn-in per draw. Output is deterministic in seed (see sample_orbit_batch).
inline std::vector<ProjectionSample> dp_rank_k_batch(
    const HermitianMatrix& a, const DPConfig& cfg, long num,
    std::uint64_t seed,
    const std::optional<SamplerConfig>& sampler_cfg = std::nullopt) {
  const int d = a.dim();
  cfg.validate(d);
  SpectralDecomposition sd = hermitian_eigendecompose(a);
  double scale = 1.0 + std::abs(sd.eigenvalues[0]);
  if (sd.eigenvalues[d - 1] < -1e-9 * scale) {
    throw DomainError("dp_rank_k_batch: A must be PSD");
  }
  std::vector<ProjectionSample> out;
  out.reserve(num);
  if (cfg.k == d) {
    for (long i = 0; i < num; ++i) {
      out.emplace_back(HermitianMatrix(Eigen::MatrixXcd::Identity(d, d)), d);
    }
    return out;
  }
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
  lambda.head(cfg.k).setOnes();
  Eigen::VectorXd y =
      (cfg.epsilon / (4.0 * cfg.sensitivity_sigma)) * sd.eigenvalues;
  double xi = cfg.epsilon / 2.0;
  GTPolytope poly = build_polytope(lambda);
  ExponentSpec spec = reduce_exponent(y, poly);
  SamplerConfig walk_cfg =
      sampler_cfg ? *sampler_cfg : make_inf_config(poly, spec, xi);
  walk_cfg.mode = SamplerMode::inf;
  walk_cfg.seed = seed;
  OrbitProblem prob(lambda, y, SamplerMode::inf, xi);
  for (auto& x : sample_orbit_batch(prob, walk_cfg, num)) {
    out.emplace_back(sd.eigenvectors.conjugate(x), cfg.k);
  }
  return out;
}

// |<A, P> - <A', P>| for an adjacent pair; bounded by 1 when A' differs from
// A by swapping one unit-norm data vector.
inline double sensitivity_check(const HermitianMatrix& a,
                                const HermitianMatrix& a_prime,
                                const ProjectionSample& p) {
  return std::abs(trace_inner(a, p.P) - trace_inner(a_prime, p.P));
}

// log of the covering number bound (1 + 8/zeta)^(2dk) for the set of rank-k
// projections.
inline double covering_bound_log(int d, int k, double zeta) {
  if (zeta <= 0.0) throw DomainError("covering_bound_log: zeta must be > 0");
  return 2.0 * d * k * std::log1p(8.0 / zeta);
}

// Spectral mass C * dk * log(1/delta) / (eps * delta) above which the
// utility guarantee applies; gates the utility assertions in tests.
inline double utility_threshold(int d, int k, const DPConfig& cfg) {
  cfg.validate(std::max(d, cfg.k));
  return cfg.utility_constant_C * d * k * std::log(1.0 / cfg.utility_delta) /
         (cfg.epsilon * cfg.utility_delta);
}

}  // namespace hciz
