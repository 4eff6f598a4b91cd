#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <cmath>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/fiber.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/logconcave.hpp"
#include "hciz/matrix.hpp"

namespace hciz {

// Sampling target: the density proportional to exp(<Y, X>) on the orbit of
// diag(lambda). Y may be given as a Hermitian matrix or, when diagonal, as
// its sorted diagonal vector.
struct OrbitProblem {
  Eigen::VectorXd lambda;
  Eigen::VectorXd y;
  std::optional<HermitianMatrix> Y;
  SamplerMode mode = SamplerMode::tv;
  double xi = 0.1;

  OrbitProblem(Eigen::VectorXd lambda_in, Eigen::VectorXd y_in,
               SamplerMode mode_in = SamplerMode::tv, double xi_in = 0.1)
      : lambda(std::move(lambda_in)),
        y(std::move(y_in)),
        mode(mode_in),
        xi(xi_in) {
    validate();
  }

  OrbitProblem(Eigen::VectorXd lambda_in, HermitianMatrix y_matrix,
               SamplerMode mode_in = SamplerMode::tv, double xi_in = 0.1)
      : lambda(std::move(lambda_in)),
        Y(std::move(y_matrix)),
        mode(mode_in),
        xi(xi_in) {
    validate();
  }

  void validate() const {
    if (xi <= 0.0) throw DomainError("OrbitProblem: xi must be > 0");
    for (int i = 0; i + 1 < lambda.size(); ++i) {
      if (lambda[i] < lambda[i + 1]) {
        throw DomainError("OrbitProblem: lambda must be sorted non-increasing");
      }
    }
    if (Y) {
      if (Y->dim() != lambda.size()) {
        throw DomainError("OrbitProblem: Y dimension mismatch");
      }
    } else {
      if (y.size() != lambda.size()) {
        throw DomainError("OrbitProblem: y dimension mismatch");
      }
      for (int i = 0; i + 1 < y.size(); ++i) {
        if (y[i] < y[i + 1]) {
          throw DomainError("OrbitProblem: y must be sorted non-increasing");
        }
      }
    }
  }
};

namespace detail {

struct DiagonalReduction {
  Eigen::VectorXd y;
  std::optional<UnitaryMatrix> conjugator;
};

// Non-diagonal Y is reduced to the diagonal pipeline by its own
// eigendecomposition; samples are conjugated back afterwards.
inline DiagonalReduction reduce_to_diagonal(const OrbitProblem& prob) {
  if (!prob.Y) return DiagonalReduction{prob.y, std::nullopt};
  SpectralDecomposition sd = hermitian_eigendecompose(*prob.Y);
  return DiagonalReduction{sd.eigenvalues, std::move(sd.eigenvectors)};
}

inline std::vector<RayleighTriangle> sample_triangles(
    const GTPolytope& poly, const ExponentSpec& spec, const SamplerConfig& cfg,
    Rng& rng, long count) {
  if (cfg.mode == SamplerMode::tv) {
    return hit_and_run_chain(poly, spec, cfg, rng, count);
  }
  return grid_walk_chain(poly, spec, cfg, rng, count);
}

}  // namespace detail

// One sample from the orbit density. Pipeline: polytope + reduced exponent,
// polytope sampler selected by mode, then exact fiber reconstruction; the
// output spectrum is lambda up to numerical error.
inline HermitianMatrix sample_orbit(const OrbitProblem& prob,
                                    const SamplerConfig& cfg, Rng& rng) {
  detail::DiagonalReduction red = detail::reduce_to_diagonal(prob);
  GTPolytope poly = build_polytope(prob.lambda);
  ExponentSpec spec = reduce_exponent(red.y, poly);
  RayleighTriangle p =
      detail::sample_triangles(poly, spec, cfg, rng, 1).front();
  HermitianMatrix x = sample_fiber(p, rng);
  if (red.conjugator) x = red.conjugator->conjugate(x);
  return x;
}

// Deterministic batch: cfg.chains independent chains with seeds derived from
// cfg.seed, each burning in once and emitting its share of thinned samples.
// Output order is by chain then by emission, independent of threading.
inline std::vector<HermitianMatrix> sample_orbit_batch(
    const OrbitProblem& prob, const SamplerConfig& cfg, long num) {
  cfg.validate();
  detail::DiagonalReduction red = detail::reduce_to_diagonal(prob);
  GTPolytope poly = build_polytope(prob.lambda);
  ExponentSpec spec = reduce_exponent(red.y, poly);

  const int chains = cfg.chains;
  std::vector<std::vector<HermitianMatrix>> per_chain(chains);
  auto run_chain = [&](int c) {
    long quota = num / chains + (c < num % chains ? 1 : 0);
    if (quota == 0) return;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c)));
    std::vector<RayleighTriangle> ps =
        detail::sample_triangles(poly, spec, cfg, rng, quota);
    per_chain[c].reserve(quota);
    for (const auto& p : ps) {
      HermitianMatrix x = sample_fiber(p, rng);
      if (red.conjugator) x = red.conjugator->conjugate(x);
      per_chain[c].push_back(std::move(x));
    }
  };
  std::vector<std::thread> workers;
  workers.reserve(chains);
  for (int c = 0; c < chains; ++c) workers.emplace_back(run_chain, c);
  for (auto& w : workers) w.join();

  std::vector<HermitianMatrix> out;
  out.reserve(num);
  for (auto& chain : per_chain) {
    for (auto& x : chain) out.push_back(std::move(x));
  }
  return out;
}

// Triangle-level batch with the same chain/seed layout as
// sample_orbit_batch, for callers that stop before the fiber step.
inline std::vector<RayleighTriangle> sample_triangle_batch(
    const OrbitProblem& prob, const SamplerConfig& cfg, long num) {
  cfg.validate();
  detail::DiagonalReduction red = detail::reduce_to_diagonal(prob);
  GTPolytope poly = build_polytope(prob.lambda);
  ExponentSpec spec = reduce_exponent(red.y, poly);
  const int chains = cfg.chains;
  std::vector<std::vector<RayleighTriangle>> per_chain(chains);
  auto run_chain = [&](int c) {
    long quota = num / chains + (c < num % chains ? 1 : 0);
    if (quota == 0) return;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c)));
    per_chain[c] = detail::sample_triangles(poly, spec, cfg, rng, quota);
  };
  std::vector<std::thread> workers;
  workers.reserve(chains);
  for (int c = 0; c < chains; ++c) workers.emplace_back(run_chain, c);
  for (auto& w : workers) w.join();
  std::vector<RayleighTriangle> out;
  out.reserve(num);
  for (auto& chain : per_chain) {
    for (auto& p : chain) out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

struct ValueCluster {
  double value;
  int size;
};

inline std::vector<ValueCluster> cluster_sorted_desc(
    const Eigen::VectorXd& v, double tol) {
  std::vector<ValueCluster> out;
  int n = static_cast<int>(v.size());
  int p = 0;
  while (p < n) {
    int q = p;
    double sum = v[p];
    while (q + 1 < n && v[p] - v[q + 1] <= tol) {
      ++q;
      sum += v[q];
    }
    out.push_back(ValueCluster{sum / (q - p + 1), q - p + 1});
    p = q + 1;
  }
  return out;
}

// log of the confluent Vandermonde factor: cross-cluster differences raised
// to the product of multiplicities, times the per-cluster factorials.
inline double log_confluent_vandermonde(const std::vector<ValueCluster>& cl) {
  double s = 0.0;
  for (std::size_t a = 0; a < cl.size(); ++a) {
    for (std::size_t b = a + 1; b < cl.size(); ++b) {
      s += static_cast<double>(cl[a].size) * cl[b].size *
           std::log(cl[a].value - cl[b].value);
    }
    for (int d = 1; d < cl[a].size; ++d) s += std::lgamma(d + 1.0);
  }
  return s;
}

// Mixed derivative d^e/dy^e d^d/dl^d of exp(y*l), divided by exp(y*l):
// sum over t of C(e,t) * d!/(d-t)! * y^(d-t) * l^(e-t).
inline double confluent_entry_factor(double y, double l, int e, int d) {
  double s = 0.0;
  int tmax = std::min(e, d);
  for (int t = 0; t <= tmax; ++t) {
    double term = std::exp(std::lgamma(e + 1.0) - std::lgamma(t + 1.0) -
                           std::lgamma(e - t + 1.0) + std::lgamma(d + 1.0) -
                           std::lgamma(d - t + 1.0));
    term *= std::pow(y, d - t) * std::pow(l, e - t);
    s += term;
  }
  return s;
}

}  // namespace detail

// log of the orbit partition function via the determinant formula
//   Z = (prod_p p!) det([exp(y_i l_j)]) / prod_{i<j} (y_i-y_j)(l_i-l_j),
// evaluated in the confluent limit when entries of y or lambda coincide:
// repeated rows/columns are replaced by derivative rows/columns of
// exp(y*l) (descending derivative order within each cluster) and the
// Vandermonde denominators by their confluent counterparts. Rows are
// rescaled before the LU factorization so large y*l products stay in range.
inline double log_partition(const Eigen::VectorXd& y_in,
                            const Eigen::VectorXd& lambda_in) {
  if (y_in.size() != lambda_in.size()) {
    throw DomainError("log_partition: length mismatch");
  }
  const int n = static_cast<int>(y_in.size());
  if (n < 1) throw DomainError("log_partition: empty input");

  Eigen::VectorXd y = y_in;
  Eigen::VectorXd l = lambda_in;
  std::sort(y.data(), y.data() + n, std::greater<double>());
  std::sort(l.data(), l.data() + n, std::greater<double>());

  auto yc = detail::cluster_sorted_desc(y, default_equality_tol(y));
  auto lc = detail::cluster_sorted_desc(l, default_equality_tol(l));

  struct Line {
    double value;
    int order;
  };
  std::vector<Line> rows, cols;
  for (const auto& c : yc) {
    for (int e = c.size - 1; e >= 0; --e) rows.push_back(Line{c.value, e});
  }
  for (const auto& c : lc) {
    for (int d = c.size - 1; d >= 0; --d) cols.push_back(Line{c.value, d});
  }

  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd row_shift(n);
  for (int i = 0; i < n; ++i) {
    double a = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) a = std::max(a, rows[i].value * cols[j].value);
    row_shift[i] = a;
    for (int j = 0; j < n; ++j) {
      double factor = detail::confluent_entry_factor(
          rows[i].value, cols[j].value, rows[i].order, cols[j].order);
      m(i, j) = factor * std::exp(rows[i].value * cols[j].value - a);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double log_abs_det = 0.0;
  double sign = lu.permutationP().determinant() > 0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    double u = lu.matrixLU()(i, i);
    if (u == 0.0) {
      throw InconsistencyError("log_partition: singular scaled matrix");
    }
    if (u < 0.0) sign = -sign;
    log_abs_det += std::log(std::abs(u));
  }
  if (sign <= 0.0) {
    throw InconsistencyError("log_partition: determinant lost its sign");
  }

  double log_factorials = 0.0;
  for (int p = 1; p <= n - 1; ++p) log_factorials += std::lgamma(p + 1.0);
  return log_factorials + log_abs_det + row_shift.sum() -
         detail::log_confluent_vandermonde(yc) -
         detail::log_confluent_vandermonde(lc);
}

// E_nu <Y, X> as the directional derivative of log Z at t = 1 along y, by
// central difference; Richardson extrapolation halves h once and removes the
// leading error term.
inline double expected_inner_product(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& lambda, double h,
                                     bool richardson = false) {
  if (h <= 0.0) throw DomainError("expected_inner_product: h must be > 0");
  auto central = [&](double step) {
    double up = log_partition((1.0 + step) * y, lambda);
    double dn = log_partition((1.0 - step) * y, lambda);
    return (up - dn) / (2.0 * step);
  };
  double d1 = central(h);
  if (!richardson) return d1;
  double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace hciz
