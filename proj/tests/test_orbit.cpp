#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hciz/orbit.hpp"
#include "hciz/stats.hpp"
#include "test_util.hpp"

using namespace hciz;
using testutil::random_sorted_desc;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SamplerConfig quick_tv(long burn, long thin, std::uint64_t seed = 0) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::tv;
  cfg.burn_in = burn;
  cfg.thinning = thin;
  cfg.seed = seed;
  return cfg;
}

double exp_mean_01(double beta) {
  if (std::abs(beta) < 1e-12) return 0.5;
  return (std::exp(beta) * (beta - 1.0) + 1.0) / (beta * std::expm1(beta));
}

// Simpson quadrature of f over [0,1].
template <typename F>
double simpson01(F f, int panels = 2000) {
  double h = 1.0 / panels;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) s += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Monte Carlo estimate of the orbit partition function over Haar draws.
std::pair<double, double> mc_partition(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& lambda, int num,
                                       Rng& rng) {
  const int n = static_cast<int>(y.size());
  HermitianMatrix lam = HermitianMatrix::diagonal(lambda);
  std::vector<double> vals(num);
  for (int i = 0; i < num; ++i) {
    HermitianMatrix x = sample_haar_unitary(n, rng).conjugate(lam);
    double inner = 0.0;
    for (int k = 0; k < n; ++k) inner += y[k] * x.mat()(k, k).real();
    vals[i] = std::exp(inner);
  }
  auto s = summarize(vals);
  return {s.mean, s.stderr_mean};
}

}  // namespace

TEST_CASE("log_partition closed form at n=2") {
  double lz = log_partition(vec({1.0, 0.0}), vec({1.0, 0.0}));
  CHECK(std::abs(lz - std::log(M_E - 1.0)) < 1e-9);

  // Large exponents go through the scaled determinant path.
  double big = log_partition(vec({50.0, 0.0}), vec({1.0, 0.0}));
  CHECK(std::abs(big - (std::log(std::expm1(50.0)) - std::log(50.0))) < 1e-9);
}

TEST_CASE("log_partition vanishes at y = 0") {
  CHECK(std::abs(log_partition(vec({0.0, 0.0}), vec({1.0, 0.0}))) < 1e-9);
  CHECK(std::abs(log_partition(vec({0.0, 0.0, 0.0}), vec({2.0, 1.0, 0.5}))) <
        1e-9);
  CHECK(std::abs(log_partition(vec({0.0, 0.0, 0.0}), vec({1.0, 1.0, 0.0}))) <
        1e-9);
  CHECK(std::abs(log_partition(vec({0.0, 0.0, 0.0, 0.0}),
                               vec({3.0, 1.0, 1.0, 0.0}))) < 1e-9);
}

TEST_CASE("log_partition is symmetric and shift covariant") {
  Rng rng(401);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(uniform01(rng) * 4);
    Eigen::VectorXd y = random_sorted_desc(n, rng, -1.0, 1.5);
    Eigen::VectorXd l = random_sorted_desc(n, rng, -0.5, 2.0);
    double a = log_partition(y, l);
    double b = log_partition(l, y);
    REQUIRE(std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)));

    double c = 2.0 * uniform01(rng) - 1.0;
    double shifted =
        log_partition(y + Eigen::VectorXd::Constant(n, c), l);
    REQUIRE(std::abs(shifted - a - c * l.sum()) < 1e-9 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("log_partition agrees with Monte Carlo, including confluent cases") {
  Rng rng(403);
  struct Case {
    Eigen::VectorXd y, lambda;
  };
  std::vector<Case> cases = {
      {vec({1.0, 0.0}), vec({1.0, 0.0})},
      {vec({0.7, 0.3, 0.0}), vec({1.0, 1.0, 0.0})},
      {vec({0.5, 0.5, 0.0}), vec({1.5, 1.0, 0.0})},
      {vec({0.5, 0.5, 0.0}), vec({1.0, 1.0, 0.0})},
      {vec({0.9, 0.4, 0.1, 0.0}), vec({1.0, 1.0, 0.0, 0.0})},
  };
  for (const auto& c : cases) {
    auto [mc, se] = mc_partition(c.y, c.lambda, 200000, rng);
    double z = std::exp(log_partition(c.y, c.lambda));
    REQUIRE(std::abs(z - mc) < 3.0 * se);
  }
}

TEST_CASE("log_partition input validation") {
  CHECK_THROWS_AS(log_partition(vec({1.0}), vec({1.0, 0.0})), DomainError);
}

TEST_CASE("expected_inner_product against quadrature") {
  // For lambda=(1,0), y=(1,0) the statistic X11 has density e^x on [0,1].
  double quad = simpson01([](double x) { return x * std::exp(x); }) /
                simpson01([](double x) { return std::exp(x); });
  double eip = expected_inner_product(vec({1.0, 0.0}), vec({1.0, 0.0}), 1e-4);
  CHECK(std::abs(eip - quad) < 1e-6);
  CHECK(quad == Catch::Approx(exp_mean_01(1.0)).epsilon(1e-9));

  CHECK(expected_inner_product(vec({0.0, 0.0}), vec({1.0, 0.0}), 1e-4) ==
        Catch::Approx(0.0).margin(1e-9));
  CHECK_THROWS_AS(
      expected_inner_product(vec({1.0, 0.0}), vec({1.0, 0.0}), 0.0),
      DomainError);
}

TEST_CASE("central difference converges at second order") {
  Eigen::VectorXd y = vec({1.0, 0.0});
  Eigen::VectorXd l = vec({1.0, 0.0});
  double quad = simpson01([](double x) { return x * std::exp(x); }) /
                simpson01([](double x) { return std::exp(x); });
  double dev1 = std::abs(expected_inner_product(y, l, 0.2) - quad);
  double dev2 = std::abs(expected_inner_product(y, l, 0.1) - quad);
  CHECK(dev1 / dev2 > 3.2);
  CHECK(dev1 / dev2 < 4.8);
  double rich = std::abs(expected_inner_product(y, l, 0.2, true) - quad);
  CHECK(rich < dev2);
}

TEST_CASE("orbit problem validation") {
  CHECK_THROWS_AS(OrbitProblem(vec({0.0, 1.0}), vec({1.0, 0.0})), DomainError);
  CHECK_THROWS_AS(OrbitProblem(vec({1.0, 0.0}), vec({0.0, 1.0})), DomainError);
  CHECK_THROWS_AS(
      OrbitProblem(vec({1.0, 0.0}), vec({1.0, 0.0}), SamplerMode::tv, -1.0),
      DomainError);
  CHECK_THROWS_AS(OrbitProblem(vec({1.0, 0.0}), vec({1.0})), DomainError);
}

TEST_CASE("uniform orbit sampling has the invariant mean") {
  OrbitProblem prob(vec({1.0, 0.0}), vec({0.0, 0.0}));
  SamplerConfig cfg = quick_tv(100, 2, 405);
  auto samples = sample_orbit_batch(prob, cfg, 10000);
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const auto& x : samples) xs.push_back(x.mat()(0, 0).real());
  auto s = summarize(xs);
  CHECK(std::abs(s.mean - 0.5) < 3.0 * s.stderr_mean);
}

TEST_CASE("every orbit sample carries the requested spectrum") {
  Rng rng(407);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(uniform01(rng) * 4);
    Eigen::VectorXd lambda = random_sorted_desc(n, rng, -1.0, 1.0);
    Eigen::VectorXd y = random_sorted_desc(n, rng, -0.5, 0.5);
    OrbitProblem prob(lambda, y);
    SamplerConfig cfg = quick_tv(50, 5, 1000 + trial);
    for (const auto& x : sample_orbit_batch(prob, cfg, 20)) {
      Eigen::VectorXd eig = hermitian_eigenvalues(x.mat());
      for (int i = 0; i < n; ++i) {
        REQUIRE(std::abs(eig[i] - lambda[i]) < 1e-8 * (1.0 + std::abs(lambda[i])));
      }
    }
  }
}

TEST_CASE("large slope concentrates the rank-one coordinate") {
  OrbitProblem prob(vec({1.0, 0.0}), vec({20.0, 0.0}));
  SamplerConfig cfg = quick_tv(100, 2, 409);
  auto samples = sample_orbit_batch(prob, cfg, 10000);
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const auto& x : samples) xs.push_back(x.mat()(0, 0).real());
  auto s = summarize(xs);
  CHECK(std::abs(s.mean - exp_mean_01(20.0)) < 3.0 * s.stderr_mean);
}

TEST_CASE("non-diagonal Y matches diagonal sampling plus conjugation") {
  Rng rng(411);
  UnitaryMatrix v = sample_haar_unitary(2, rng);
  Eigen::VectorXd yd = vec({1.2, 0.1});
  HermitianMatrix y = v.conjugate(HermitianMatrix::diagonal(yd));
  Eigen::VectorXd lambda = vec({1.0, 0.0});

  OrbitProblem full(lambda, y);
  OrbitProblem diag(lambda, yd);
  SamplerConfig cfg_a = quick_tv(100, 2, 413);
  SamplerConfig cfg_b = quick_tv(100, 2, 417);
  auto sa = sample_orbit_batch(full, cfg_a, 5000);
  auto sb = sample_orbit_batch(diag, cfg_b, 5000);
  std::vector<double> ia, ib;
  for (const auto& x : sa) {
    ia.push_back((y.mat().adjoint() * x.mat()).trace().real());
  }
  for (const auto& x : sb) {
    ib.push_back((HermitianMatrix::diagonal(yd).mat() * x.mat()).trace().real());
  }
  auto ks = ks_two_sample(ia, ib);
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("empirical moment matches the partition derivative") {
  Eigen::VectorXd lambda = vec({1.0, 0.5, 0.0});
  Eigen::VectorXd y = vec({1.0, 0.4, 0.0});
  OrbitProblem prob(lambda, y);
  SamplerConfig cfg = quick_tv(2000, 40, 419);
  auto samples = sample_orbit_batch(prob, cfg, 5000);
  std::vector<double> inner;
  inner.reserve(samples.size());
  for (const auto& x : samples) {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += y[k] * x.mat()(k, k).real();
    inner.push_back(v);
  }
  auto s = summarize(inner);
  double oracle = expected_inner_product(y, lambda, 1e-4);
  CHECK(std::abs(s.mean - oracle) < 3.0 * s.stderr_mean);
}

TEST_CASE("moment matching at n = 4") {
  Eigen::VectorXd lambda = vec({1.5, 1.0, 0.5, 0.0});
  Eigen::VectorXd y = vec({0.9, 0.5, 0.2, 0.0});
  OrbitProblem prob(lambda, y);
  SamplerConfig cfg = quick_tv(4000, 80, 431);
  auto samples = sample_orbit_batch(prob, cfg, 8000);
  std::vector<double> inner;
  inner.reserve(samples.size());
  for (const auto& x : samples) {
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += y[k] * x.mat()(k, k).real();
    inner.push_back(v);
  }
  auto s = summarize(inner);
  double oracle = expected_inner_product(y, lambda, 1e-4);
  CHECK(std::abs(s.mean - oracle) < 3.0 * s.stderr_mean);
}

TEST_CASE("batch sampling is deterministic in the seed") {
  OrbitProblem prob(vec({1.0, 0.5, 0.0}), vec({0.8, 0.2, 0.0}));
  SamplerConfig cfg = quick_tv(50, 3, 421);
  cfg.chains = 3;
  auto a = sample_orbit_batch(prob, cfg, 30);
  auto b = sample_orbit_batch(prob, cfg, 30);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].mat() == b[i].mat());
  }
  SamplerConfig other = cfg;
  other.seed = 422;
  auto c = sample_orbit_batch(prob, other, 30);
  bool all_equal = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].mat() != c[i].mat()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}
