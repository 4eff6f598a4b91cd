#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hciz/dp.hpp"
#include "hciz/stats.hpp"
#include "test_util.hpp"

using namespace hciz;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SamplerConfig walk_cfg(double pitch, long burn, long thin) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::inf;
  cfg.grid_resolution = pitch;
  cfg.burn_in = burn;
  cfg.thinning = thin;
  return cfg;
}

// Dataset-style PSD matrix: sum of outer products of unit-ball vectors.
HermitianMatrix data_matrix(int d, int rows, Rng& rng,
                            std::vector<Eigen::VectorXcd>* data = nullptr) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int r = 0; r < rows; ++r) {
    Eigen::VectorXcd v = sample_complex_sphere(d, uniform01(rng), rng);
    a += v * v.adjoint();
    if (data) data->push_back(v);
  }
  return HermitianMatrix(std::move(a));
}

HermitianMatrix random_projection(int d, int k, Rng& rng) {
  Eigen::MatrixXcd u = sample_haar_unitary(d, rng).mat().leftCols(k);
  return HermitianMatrix(u * u.adjoint());
}

double exp_mean_01(double beta) {
  if (std::abs(beta) < 1e-12) return 0.5;
  return (std::exp(beta) * (beta - 1.0) + 1.0) / (beta * std::expm1(beta));
}

}  // namespace

TEST_CASE("dp config validation") {
  DPConfig cfg;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(2), DomainError);
  cfg.epsilon = 1.0;
  cfg.k = 3;
  CHECK_THROWS_AS(cfg.validate(2), DomainError);
  cfg.k = 2;
  cfg.utility_delta = 1.5;
  CHECK_THROWS_AS(cfg.validate(2), DomainError);
  cfg.utility_delta = 0.1;
  CHECK_NOTHROW(cfg.validate(2));
}

TEST_CASE("covering bound values") {
  CHECK(std::exp(covering_bound_log(1, 1, 8.0)) == Catch::Approx(4.0));
  CHECK(std::exp(covering_bound_log(2, 1, 4.0)) == Catch::Approx(81.0));
  CHECK(covering_bound_log(3, 2, 1e12) == Catch::Approx(0.0).margin(1e-9));
  CHECK_THROWS_AS(covering_bound_log(1, 1, 0.0), DomainError);
}

TEST_CASE("utility threshold arithmetic") {
  DPConfig cfg;
  cfg.epsilon = 2.0;
  cfg.k = 1;
  cfg.utility_delta = 0.1;
  cfg.utility_constant_C = 16.0;
  double t = utility_threshold(4, 1, cfg);
  CHECK(t == Catch::Approx(16.0 * 4.0 * std::log(10.0) / 0.2));

  DPConfig near_one = cfg;
  near_one.utility_delta = 0.999999;
  CHECK(utility_threshold(4, 1, near_one) < 1e-4);

  CHECK(utility_threshold(8, 1, cfg) == Catch::Approx(2.0 * t));
}

TEST_CASE("sensitivity is zero for identical inputs and tight at one") {
  Rng rng(501);
  HermitianMatrix a = data_matrix(3, 5, rng);
  ProjectionSample p(random_projection(3, 1, rng), 1);
  CHECK(sensitivity_check(a, a, p) == 0.0);

  Eigen::VectorXcd v = sample_complex_sphere(3, 1.0, rng);
  HermitianMatrix av = HermitianMatrix(Eigen::MatrixXcd(v * v.adjoint()));
  HermitianMatrix zero(Eigen::MatrixXcd::Zero(3, 3).eval());
  ProjectionSample pv(av, 1);
  CHECK(sensitivity_check(av, zero, pv) == Catch::Approx(1.0));
}

TEST_CASE("sensitivity bound holds under fuzzing") {
  Rng rng(503);
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    int d = 2 + static_cast<int>(uniform01(rng) * 3);
    std::vector<Eigen::VectorXcd> data;
    HermitianMatrix a = data_matrix(d, 6, rng, &data);
    Eigen::VectorXcd v2 = sample_complex_sphere(d, uniform01(rng), rng);
    HermitianMatrix a_prime(a.mat() - data[0] * data[0].adjoint() +
                            v2 * v2.adjoint());
    int k = 1 + static_cast<int>(uniform01(rng) * d);
    ProjectionSample p(random_projection(d, std::min(k, d), rng),
                       std::min(k, d));
    worst = std::max(worst, sensitivity_check(a, a_prime, p));
  }
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("k = d forces the identity projection") {
  Rng rng(507);
  HermitianMatrix a = data_matrix(3, 5, rng);
  DPConfig cfg;
  cfg.epsilon = 1.0;
  cfg.k = 3;
  ProjectionSample p = dp_rank_k_projection(a, cfg, rng);
  CHECK((p.P.mat() - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(std::abs(trace_inner(a, p.P) - a.mat().trace().real()) < 1e-12);
}

TEST_CASE("mechanism rejects bad inputs") {
  Rng rng(509);
  DPConfig cfg;
  cfg.epsilon = 1.0;
  cfg.k = 5;
  HermitianMatrix a = data_matrix(3, 4, rng);
  CHECK_THROWS_AS(dp_rank_k_projection(a, cfg, rng), DomainError);

  cfg.k = 1;
  HermitianMatrix indefinite =
      HermitianMatrix::diagonal(vec({1.0, -0.5, 0.2}));
  CHECK_THROWS_AS(dp_rank_k_projection(indefinite, cfg, rng), DomainError);
}

TEST_CASE("sampled projections satisfy the projection invariants") {
  Rng rng(511);
  HermitianMatrix a = HermitianMatrix::diagonal(vec({2.0, 1.0, 0.5}));
  DPConfig cfg;
  cfg.epsilon = 4.0;
  cfg.k = 2;
  auto ps = dp_rank_k_batch(a, cfg, 50, 513,
                            walk_cfg(1.0 / 64.0, 20000, 200));
  for (const auto& p : ps) {
    Eigen::MatrixXcd pp = p.P.mat();
    REQUIRE((pp * pp - pp).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE((pp - pp.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE(std::abs(pp.trace().real() - 2.0) < 1e-8);
  }
}

TEST_CASE("small epsilon approaches the uniform projection average") {
  // For eps -> 0 the mechanism tends to Haar: E<A,P> -> (k/d) tr A.
  HermitianMatrix a = HermitianMatrix::diagonal(vec({1.5, 0.7}));
  DPConfig cfg;
  cfg.epsilon = 0.02;
  cfg.k = 1;
  // Thinning of ~2x the lattice relaxation time (~830 steps at 64 cells)
  // keeps the kept draws near-independent, so the naive stderr applies.
  auto ps = dp_rank_k_batch(a, cfg, 3000, 517,
                            walk_cfg(1.0 / 64.0, 30000, 2000));
  std::vector<double> inner;
  inner.reserve(ps.size());
  for (const auto& p : ps) inner.push_back(trace_inner(a, p.P));
  auto s = summarize(inner);
  CHECK(std::abs(s.mean - 0.5 * (1.5 + 0.7)) < 3.0 * s.stderr_mean + 2e-3);
}

TEST_CASE("large epsilon approaches the top eigenvalue") {
  // d=2, k=1: X11 of the diagonal pipeline has density exp(beta x) with
  // beta = (eps/4)(g1 - g2); E<A,P> = g2 + (g1-g2) E[x].
  double g1 = 2.0, g2 = 1.2;
  HermitianMatrix a = HermitianMatrix::diagonal(vec({g1, g2}));
  DPConfig cfg;
  cfg.epsilon = 40.0;
  cfg.k = 1;
  double beta = cfg.epsilon / 4.0 * (g1 - g2);
  auto ps = dp_rank_k_batch(a, cfg, 4000, 519,
                            walk_cfg(1.0 / 256.0, 300000, 2000));
  std::vector<double> inner;
  inner.reserve(ps.size());
  for (const auto& p : ps) inner.push_back(trace_inner(a, p.P));
  auto s = summarize(inner);
  double oracle = g2 + (g1 - g2) * exp_mean_01(beta);
  CHECK(std::abs(s.mean - oracle) < 3.0 * s.stderr_mean + 2e-3);
}

TEST_CASE("mechanism is unitarily covariant") {
  Rng rng(523);
  HermitianMatrix a = HermitianMatrix::diagonal(vec({1.8, 0.9}));
  UnitaryMatrix v = sample_haar_unitary(2, rng);
  HermitianMatrix rotated = v.conjugate(a);
  DPConfig cfg;
  cfg.epsilon = 6.0;
  cfg.k = 1;
  SamplerConfig wc = walk_cfg(1.0 / 64.0, 30000, 2500);
  auto pa = dp_rank_k_batch(a, cfg, 2000, 527, wc);
  auto pb = dp_rank_k_batch(rotated, cfg, 2000, 529, wc);
  std::vector<double> ia, ib;
  for (const auto& p : pa) ia.push_back(trace_inner(a, p.P));
  for (const auto& p : pb) ib.push_back(trace_inner(rotated, p.P));
  auto ks = ks_two_sample(ia, ib);
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("expected utility grows with the spectral gap") {
  DPConfig cfg;
  cfg.epsilon = 8.0;
  cfg.k = 1;
  std::vector<double> gaps = {0.2, 0.8, 2.0};
  std::vector<double> means, errs;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    HermitianMatrix a = HermitianMatrix::diagonal(vec({1.0 + gaps[i], 1.0}));
    auto ps = dp_rank_k_batch(a, cfg, 2000, 531 + i,
                              walk_cfg(1.0 / 64.0, 30000, 1500));
    std::vector<double> inner;
    for (const auto& p : ps) {
      inner.push_back(trace_inner(a, p.P) - 1.0);  // subtract the floor g2
    }
    auto s = summarize(inner);
    means.push_back(s.mean);
    errs.push_back(s.stderr_mean);
  }
  for (std::size_t i = 0; i + 1 < means.size(); ++i) {
    CHECK(means[i + 1] > means[i] - 3.0 * std::hypot(errs[i], errs[i + 1]));
  }
}
