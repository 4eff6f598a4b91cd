#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "hciz/errors.hpp"

namespace hciz {

using Rng = std::mt19937_64;

// Stateless mix of a root seed and a stream index, used to hand independent
// generators to worker chains while keeping batch output deterministic.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double gaussian(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline Eigen::VectorXd gaussian_vector(int dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gaussian(rng);
  return v;
}

inline Eigen::VectorXcd complex_gaussian_vector(int dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = std::complex<double>(gaussian(rng), gaussian(rng));
  }
  return v;
}

// Uniform point on the sphere of the given radius in C^dim.
inline Eigen::VectorXcd sample_complex_sphere(int dim, double radius,
                                              Rng& rng) {
  if (dim < 1) throw DomainError("sample_complex_sphere: dim must be >= 1");
  if (radius < 0.0) {
    throw DomainError("sample_complex_sphere: radius must be >= 0");
  }
  if (radius == 0.0) return Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd v = complex_gaussian_vector(dim, rng);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = complex_gaussian_vector(dim, rng);
    nrm = v.norm();
  }
  return v * (radius / nrm);
}

// Uniform direction on the unit sphere in R^dim.
inline Eigen::VectorXd sample_real_direction(int dim, Rng& rng) {
  Eigen::VectorXd v = gaussian_vector(dim, rng);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = gaussian_vector(dim, rng);
    nrm = v.norm();
  }
  return v / nrm;
}

}  // namespace hciz
