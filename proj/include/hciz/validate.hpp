#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hciz/dp.hpp"
#include "hciz/fiber.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/io.hpp"
#include "hciz/logconcave.hpp"
#include "hciz/orbit.hpp"
#include "hciz/stats.hpp"

namespace hciz {

// One named acceptance check: statistic compared against a threshold.
struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool larger_is_better = false;  // true for p-values
  bool passed = false;
  double seconds = 0.0;
  std::string series_name;
  std::vector<std::pair<double, double>> series;
};

struct ValidationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  Json diagnostics;  // chain diagnostics of the suite's representative run

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  Json to_json() const {
    Json js = Json::array();
    for (const auto& c : checks) {
      js.push_back(Json{{"name", c.name},
                        {"statistic", c.statistic},
                        {"threshold", c.threshold},
                        {"comparison", c.larger_is_better ? ">" : "<="},
                        {"passed", c.passed},
                        {"seconds", c.seconds}});
    }
    Json out{{"suite", suite}, {"checks", js}, {"all_passed", all_passed()}};
    if (!diagnostics.is_null()) out["chain_diagnostics"] = diagnostics;
    return out;
  }
};

namespace validation {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline CheckResult check_leq(const std::string& name, double statistic,
                             double threshold, double seconds) {
  CheckResult c;
  c.name = name;
  c.statistic = statistic;
  c.threshold = threshold;
  c.passed = statistic <= threshold;
  c.seconds = seconds;
  return c;
}

inline CheckResult check_gt(const std::string& name, double statistic,
                            double threshold, double seconds) {
  CheckResult c;
  c.name = name;
  c.statistic = statistic;
  c.threshold = threshold;
  c.larger_is_better = true;
  c.passed = statistic > threshold;
  c.seconds = seconds;
  return c;
}

inline Eigen::VectorXd vecd(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Eigen::VectorXd random_sorted(int n, Rng& rng, double lo, double hi,
                                     double min_gap) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * uniform01(rng);
  std::sort(v.begin(), v.end(), std::greater<double>());
  for (int i = 1; i < n; ++i) v[i] = std::min(v[i], v[i - 1] - min_gap);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = v[i];
  return out;
}

inline double exp_mean_01(double beta) {
  if (std::abs(beta) < 1e-12) return 0.5;
  return (std::exp(beta) * (beta - 1.0) + 1.0) / (beta * std::expm1(beta));
}

inline SamplerConfig tv_cfg(long burn, long thin, std::uint64_t seed,
                            int chains = 4) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::tv;
  cfg.burn_in = burn;
  cfg.thinning = thin;
  cfg.chains = chains;
  cfg.seed = seed;
  return cfg;
}

inline SamplerConfig inf_cfg(double pitch, long burn, long thin,
                             std::uint64_t seed, int chains = 4) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::inf;
  cfg.grid_resolution = pitch;
  cfg.burn_in = burn;
  cfg.thinning = thin;
  cfg.chains = chains;
  cfg.seed = seed;
  return cfg;
}

// Both sides of the bordered characteristic polynomial identity evaluated at
// one point; the independent oracle for the fiber construction.
inline std::pair<double, double> charpoly_sides(const ReducedSpectrum& rs,
                                                std::span<const double> radii,
                                                double c, double t) {
  double lhs = 1.0;
  for (double mu : rs.mu) lhs *= t - mu;
  double rhs = t - c;
  for (double d : rs.deltas) rhs *= t - d;
  for (std::size_t i = 0; i < rs.deltas.size(); ++i) {
    double skip = 1.0;
    for (std::size_t j = 0; j < rs.deltas.size(); ++j) {
      if (j != i) skip *= t - rs.deltas[j];
    }
    rhs -= radii[i] * radii[i] * skip;
  }
  return {lhs, rhs};
}

}  // namespace validation

// Criterion 1: sampled orbit elements carry exactly the requested spectrum.
inline CheckResult criterion_spectrum_exactness() {
  using namespace validation;
  Timer timer;
  Rng rng(9001);
  double worst = 0.0;
  for (int prob_idx = 0; prob_idx < 20; ++prob_idx) {
    int n = 2 + prob_idx % 5;
    Eigen::VectorXd lambda = random_sorted(n, rng, -1.0, 1.0, 0.02);
    Eigen::VectorXd y = random_sorted(n, rng, -0.5, 0.5, 0.01);
    OrbitProblem prob(lambda, y);
    auto samples =
        sample_orbit_batch(prob, tv_cfg(50, 5, 9100 + prob_idx), 1000);
    for (const auto& x : samples) {
      Eigen::VectorXd eig = hermitian_eigenvalues(x.mat());
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(eig[i] - lambda[i]) /
                                    (1.0 + std::abs(lambda[i])));
      }
    }
  }
  return check_leq("spectrum-exactness(max rel err, 20x1000)", worst, 1e-8,
                   timer.seconds());
}

// Criterion 2: rayleigh_map(sample_fiber(P)) returns P entrywise.
inline CheckResult criterion_rayleigh_round_trip() {
  using namespace validation;
  Timer timer;
  Rng rng(9007);
  double worst = 0.0;
  for (const auto& lambda :
       {vecd({1.0, 0.0}), vecd({2.0, 1.0, 0.0}), vecd({1.0, 1.0, 0.0}),
        vecd({3.0, 1.0, 1.0, 0.0})}) {
    GTPolytope poly = build_polytope(lambda);
    for (int s = 0; s < 1000; ++s) {
      RayleighTriangle p = uniform_gt_sample(poly, rng);
      RayleighTriangle back = rayleigh_map(sample_fiber(p, rng));
      for (std::size_t i = 0; i < p.packed().size(); ++i) {
        worst = std::max(worst, std::abs(back.packed()[i] - p.packed()[i]));
      }
    }
  }
  return check_leq("rayleigh-round-trip(max entry err, 4x1000)", worst, 1e-8,
                   timer.seconds());
}

// Criterion 3: the bordered characteristic polynomial identity at m+2
// random points per extension step, 1e4 fuzzed steps.
inline CheckResult criterion_charpoly_identity() {
  using namespace validation;
  Timer timer;
  Rng rng(9011);
  std::vector<Eigen::VectorXd> lambdas = {
      vecd({1.0, 0.0}), vecd({1.0, 0.5, 0.0}), vecd({1.0, 1.0, 0.0}),
      vecd({3.0, 1.0, 1.0, 0.0}), vecd({2.0, 1.5, 1.0, 0.5, 0.0, -1.0})};
  double worst = 0.0;
  long steps = 0;
  std::size_t which = 0;
  while (steps < 10000) {
    const Eigen::VectorXd& lambda = lambdas[which];
    which = (which + 1) % lambdas.size();
    GTPolytope poly = build_polytope(lambda);
    RayleighTriangle p = uniform_gt_sample(poly, rng);
    double tol = default_cluster_tol(p.row(poly.n()));
    double span = lambda[0] - lambda[lambda.size() - 1];
    for (int k = 2; k <= poly.n(); ++k) {
      ReducedSpectrum rs = reduced_spectrum(p.row(k), p.row(k - 1), tol);
      std::vector<double> radii = sphere_radii(rs);
      double c = 0.0;
      for (double v : p.row(k)) c += v;
      for (double v : p.row(k - 1)) c -= v;
      int m = static_cast<int>(rs.deltas.size());
      for (int pt = 0; pt < m + 2; ++pt) {
        double t = lambda[lambda.size() - 1] - 0.5 +
                   (span + 1.0) * uniform01(rng);
        auto [lhs, rhs] = charpoly_sides(rs, radii, c, t);
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
      ++steps;
    }
  }
  return check_leq("charpoly-identity(max rel err, 1e4 steps)", worst, 1e-8,
                   timer.seconds());
}

// Criterion 4: uniform case. Mean of X11 and a two-sample KS against direct
// Haar conjugation.
inline std::vector<CheckResult> criterion_haar_baseline() {
  using namespace validation;
  Timer timer;
  const long num = 100000;
  OrbitProblem prob(vecd({1.0, 0.0}), vecd({0.0, 0.0}));
  auto samples = sample_orbit_batch(prob, tv_cfg(200, 2, 9013), num);
  std::vector<double> pipeline;
  pipeline.reserve(num);
  for (const auto& x : samples) pipeline.push_back(x.mat()(0, 0).real());
  auto s = summarize(pipeline);
  double z = std::abs(s.mean - 0.5) / s.stderr_mean;
  CheckResult mean_check =
      check_leq("haar-baseline(|mean-0.5| z-score, 1e5)", z, 3.0,
                timer.seconds());

  Timer timer2;
  Rng rng(9017);
  HermitianMatrix lam = HermitianMatrix::diagonal(vecd({1.0, 0.0}));
  std::vector<double> direct;
  direct.reserve(num);
  for (long i = 0; i < num; ++i) {
    direct.push_back(
        sample_haar_unitary(2, rng).conjugate(lam).mat()(0, 0).real());
  }
  auto ks = ks_two_sample(pipeline, direct);
  CheckResult ks_check = check_gt("haar-baseline(KS p vs direct conj, 1e5)",
                                  ks.p_value, 0.01, timer2.seconds());
  return {mean_check, ks_check};
}

// Criterion 5: rank-one law against the closed-form exponential CDF.
inline std::vector<CheckResult> criterion_rank_one_law() {
  using namespace validation;
  std::vector<CheckResult> out;
  int idx = 0;
  for (double beta : {1.0, 5.0, 20.0}) {
    Timer timer;
    OrbitProblem prob(vecd({1.0, 0.0}), vecd({beta, 0.0}));
    auto samples =
        sample_orbit_batch(prob, tv_cfg(200, 2, 9019 + idx), 100000);
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& x : samples) xs.push_back(x.mat()(0, 0).real());
    auto ks = ks_test(xs, [beta](double x) {
      return std::clamp(std::expm1(beta * x) / std::expm1(beta), 0.0, 1.0);
    });
    out.push_back(check_gt(
        "rank-one-law(KS p, beta=" + std::to_string(static_cast<int>(beta)) +
            ", 1e5)",
        ks.p_value, 0.01, timer.seconds()));
    ++idx;
  }
  return out;
}

// Criterion 6: moment/partition consistency.
inline std::vector<CheckResult> criterion_moment_partition() {
  using namespace validation;
  std::vector<CheckResult> out;
  {
    Timer timer;
    Eigen::VectorXd lambda = vecd({1.0, 0.5, 0.0});
    Eigen::VectorXd y = vecd({1.0, 0.4, 0.0});
    OrbitProblem prob(lambda, y);
    auto samples = sample_orbit_batch(prob, tv_cfg(2000, 60, 9023), 20000);
    std::vector<double> inner;
    inner.reserve(samples.size());
    for (const auto& x : samples) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += y[k] * x.mat()(k, k).real();
      inner.push_back(v);
    }
    auto s = summarize(inner);
    double oracle = expected_inner_product(y, lambda, 1e-4);
    double z = std::abs(s.mean - oracle) / s.stderr_mean;
    out.push_back(check_leq("moments(E<Y,X> vs dlogZ z-score, 2e4)", z, 3.0,
                            timer.seconds()));
  }
  {
    Timer timer;
    double lz = log_partition(vecd({1.0, 0.0}), vecd({1.0, 0.0}));
    out.push_back(check_leq("partition(|logZ - log(e-1)|)",
                            std::abs(lz - std::log(M_E - 1.0)), 1e-9,
                            timer.seconds()));
  }
  {
    Timer timer;
    Rng rng(9029);
    HermitianMatrix lam = HermitianMatrix::diagonal(vecd({1.0, 0.0}));
    const long num = 1000000;
    std::vector<double> vals(num);
    for (long i = 0; i < num; ++i) {
      HermitianMatrix x = sample_haar_unitary(2, rng).conjugate(lam);
      vals[i] = std::exp(x.mat()(0, 0).real());
    }
    auto s = summarize(vals);
    double z = std::abs(s.mean - (M_E - 1.0)) / s.stderr_mean;
    out.push_back(check_leq("partition(MC HCIZ z-score, 1e6)", z, 3.0,
                            timer.seconds()));
  }
  return out;
}

// Criterion 7: infinity-divergence mode, binned sup-log-ratio against the
// closed-form 1-D target.
inline std::vector<CheckResult> criterion_inf_divergence() {
  using namespace validation;
  std::vector<CheckResult> out;
  const double xi = 0.1;
  const int bins = 20;
  int idx = 0;
  for (double slope : {0.0, 2.0}) {
    Timer timer;
    Eigen::VectorXd lambda = vecd({1.0, 0.0});
    Eigen::VectorXd y = vecd({slope, 0.0});
    OrbitProblem prob(lambda, y, SamplerMode::inf, xi);
    SamplerConfig cfg = inf_cfg(1.0 / 128.0, 200000, 600, 9031 + idx);
    auto samples = sample_orbit_batch(prob, cfg, 1000000);
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& x : samples) xs.push_back(x.mat()(0, 0).real());
    Histogram h = make_histogram(xs, 0.0, 1.0, bins);
    double worst = -std::numeric_limits<double>::infinity();
    CheckResult c;
    c.series_name = "bin_center,log_ratio";
    for (int b = 0; b < bins; ++b) {
      double lo = static_cast<double>(b) / bins;
      double hi = (b + 1.0) / bins;
      double mass = slope == 0.0 ? (hi - lo)
                                 : (std::exp(slope * hi) - std::exp(slope * lo)) /
                                       std::expm1(slope);
      double ratio = std::log(h.frequency(b) / mass);
      worst = std::max(worst, ratio);
      c.series.emplace_back(0.5 * (lo + hi), ratio);
    }
    double binning = slope / bins;
    CheckResult base = check_leq(
        "inf-ratio(sup log-ratio, slope=" +
            std::to_string(static_cast<int>(slope)) + ", 1e6)",
        worst, xi + binning, timer.seconds());
    base.series_name = c.series_name;
    base.series = c.series;
    out.push_back(base);
    ++idx;
  }
  return out;
}

// Criterion 8: sensitivity bound over fuzzed adjacent dataset pairs.
inline CheckResult criterion_dp_sensitivity() {
  using namespace validation;
  Timer timer;
  Rng rng(9037);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    int d = 2 + static_cast<int>(uniform01(rng) * 3);
    std::vector<Eigen::VectorXcd> data;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int r = 0; r < 6; ++r) {
      Eigen::VectorXcd v = sample_complex_sphere(d, uniform01(rng), rng);
      a += v * v.adjoint();
      data.push_back(v);
    }
    Eigen::VectorXcd v2 = sample_complex_sphere(d, uniform01(rng), rng);
    HermitianMatrix ha(a);
    HermitianMatrix hb(a - data[0] * data[0].adjoint() + v2 * v2.adjoint());
    int k = 1 + static_cast<int>(uniform01(rng) * d);
    k = std::min(k, d);
    Eigen::MatrixXcd u = sample_haar_unitary(d, rng).mat().leftCols(k);
    ProjectionSample p(HermitianMatrix(u * u.adjoint()), k);
    worst = std::max(worst, sensitivity_check(ha, hb, p));
  }
  return check_leq("dp-sensitivity(max |<A,P>-<A',P>|, 1e4)", worst,
                   1.0 + 1e-9, timer.seconds());
}

// Criterion 9: limiting behavior of the mechanism.
inline std::vector<CheckResult> criterion_dp_limits() {
  using namespace validation;
  std::vector<CheckResult> out;
  {
    Timer timer;
    Rng rng(9041);
    HermitianMatrix a = HermitianMatrix::diagonal(vecd({2.0, 1.0, 0.5}));
    DPConfig cfg;
    cfg.epsilon = 1.0;
    cfg.k = 3;
    ProjectionSample p = dp_rank_k_projection(a, cfg, rng);
    double dev =
        (p.P.mat() - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff();
    out.push_back(check_leq("dp-limits(k=d gives identity)", dev, 0.0,
                            timer.seconds()));
  }
  {
    // eps(g1-g2) = 40 with eps*g1 large enough that the closed-form mean is
    // within 1% of g1.
    Timer timer;
    double g1 = 8.0, g2 = 7.6;
    HermitianMatrix a = HermitianMatrix::diagonal(vecd({g1, g2}));
    DPConfig cfg;
    cfg.epsilon = 100.0;
    cfg.k = 1;
    auto ps = dp_rank_k_batch(a, cfg, 20000, 9043,
                              inf_cfg(1.0 / 256.0, 100000, 1500, 9043));
    std::vector<double> inner;
    inner.reserve(ps.size());
    for (const auto& p : ps) inner.push_back(trace_inner(a, p.P));
    auto s = summarize(inner);
    out.push_back(check_leq("dp-limits(large eps, |E-g1|/g1, 2e4)",
                            std::abs(s.mean - g1) / g1, 0.01,
                            timer.seconds()));
  }
  {
    Timer timer;
    HermitianMatrix a = HermitianMatrix::diagonal(vecd({1.5, 0.7}));
    DPConfig cfg;
    cfg.epsilon = 0.01;
    cfg.k = 1;
    auto ps = dp_rank_k_batch(a, cfg, 20000, 9047,
                              inf_cfg(1.0 / 64.0, 30000, 2000, 9047));
    std::vector<double> inner;
    inner.reserve(ps.size());
    for (const auto& p : ps) inner.push_back(trace_inner(a, p.P));
    auto s = summarize(inner);
    double z = std::abs(s.mean - 0.5 * (1.5 + 0.7)) / s.stderr_mean;
    out.push_back(check_leq("dp-limits(eps->0, z vs (k/d)trA, 2e4)", z, 3.0,
                            timer.seconds()));
  }
  return out;
}

// Criterion 10: empirical eps-DP ratio of the sufficient statistic under an
// adjacent pair of diagonal inputs.
inline CheckResult criterion_dp_ratio() {
  using namespace validation;
  Timer timer;
  const double eps = 2.0;
  const double xi = eps / 2.0;
  // A' = A - v1 v1* + v2 v2* with v1 = sqrt(0.5) e1, v2 = sqrt(0.4) e2.
  HermitianMatrix a = HermitianMatrix::diagonal(vecd({1.5, 0.3}));
  HermitianMatrix a_prime = HermitianMatrix::diagonal(vecd({1.0, 0.7}));
  DPConfig cfg;
  cfg.epsilon = eps;
  cfg.k = 1;
  SamplerConfig wa = inf_cfg(1.0 / 128.0, 100000, 500, 9053);
  SamplerConfig wb = inf_cfg(1.0 / 128.0, 100000, 500, 9059);
  auto pa = dp_rank_k_batch(a, cfg, 100000, 9053, wa);
  auto pb = dp_rank_k_batch(a_prime, cfg, 100000, 9059, wb);
  std::vector<double> xa, xb;
  xa.reserve(pa.size());
  xb.reserve(pb.size());
  for (const auto& p : pa) xa.push_back(p.P.mat()(0, 0).real());
  for (const auto& p : pb) xb.push_back(p.P.mat()(0, 0).real());
  const int bins = 10;
  Histogram ha = make_histogram(xa, 0.0, 1.0, bins);
  Histogram hb = make_histogram(xb, 0.0, 1.0, bins);
  double worst = 0.0;
  for (int b = 0; b < bins; ++b) {
    double ratio = std::abs(std::log(ha.frequency(b) / hb.frequency(b)));
    worst = std::max(worst, ratio);
  }
  double slope_a = eps / 4.0 * (1.5 - 0.3);
  double slope_b = eps / 4.0 * (1.0 - 0.7);
  double binning = (slope_a + slope_b) / bins;
  return check_leq("dp-ratio(binned |log p/q|, 2x1e5)", worst,
                   eps + xi + binning, timer.seconds());
}

// Criterion 11 (library half): batches are bit-identical for equal seeds.
inline CheckResult criterion_reproducibility_library() {
  using namespace validation;
  Timer timer;
  OrbitProblem prob(vecd({1.0, 0.5, 0.0}), vecd({0.8, 0.2, 0.0}));
  SamplerConfig cfg = tv_cfg(50, 3, 9061, 3);
  auto a = sample_orbit_batch(prob, cfg, 60);
  auto b = sample_orbit_batch(prob, cfg, 60);
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, (a[i].mat() - b[i].mat()).cwiseAbs().maxCoeff());
  }
  return check_leq("reproducibility(batch bitwise equal)", dev, 0.0,
                   timer.seconds());
}

// PSRF / ESS / acceptance of a short multi-chain run on a representative
// problem, attached to suite reports.
inline Json suite_chain_diagnostics(const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& y,
                                    SamplerMode mode) {
  using namespace validation;
  GTPolytope poly = build_polytope(lambda);
  ExponentSpec spec = reduce_exponent(y, poly);
  SamplerConfig cfg = mode == SamplerMode::tv
                          ? tv_cfg(500, 20, 9901)
                          : inf_cfg(1.0 / 64.0, 20000, 400, 9901);
  const int chains = 4;
  const long kept = 250;
  std::vector<ChainTrace> traces(chains);
  double acceptance = 0.0;
  for (int c = 0; c < chains; ++c) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c)));
    WalkStats stats;
    auto samples =
        mode == SamplerMode::tv
            ? hit_and_run_chain(poly, spec, cfg, rng, kept, &stats)
            : grid_walk_chain(poly, spec, cfg, rng, kept, &stats);
    for (const auto& p : samples) {
      traces[c].push_back(poly.extract_free(p));
    }
    acceptance += stats.acceptance_rate() / chains;
  }
  ChainDiagnostics diag = run_diagnostics(traces, acceptance);
  return Json{{"acceptance_rate", diag.acceptance_rate},
              {"psrf", diag.psrf},
              {"effective_sample_size", diag.effective_sample_size},
              {"chains", chains},
              {"kept_per_chain", kept}};
}

// Named CLI validation suites.
inline ValidationReport run_suite(const std::string& suite) {
  using validation::vecd;
  ValidationReport report;
  report.suite = suite;
  if (suite == "haar") {
    for (auto& c : criterion_haar_baseline()) report.checks.push_back(c);
    report.diagnostics = suite_chain_diagnostics(
        vecd({1.0, 0.0}), vecd({0.0, 0.0}), SamplerMode::tv);
  } else if (suite == "rank-one") {
    for (auto& c : criterion_rank_one_law()) report.checks.push_back(c);
    report.diagnostics = suite_chain_diagnostics(
        vecd({1.0, 0.0}), vecd({5.0, 0.0}), SamplerMode::tv);
  } else if (suite == "moments") {
    for (auto& c : criterion_moment_partition()) report.checks.push_back(c);
    report.diagnostics = suite_chain_diagnostics(
        vecd({1.0, 0.5, 0.0}), vecd({1.0, 0.4, 0.0}), SamplerMode::tv);
  } else if (suite == "fiber") {
    report.checks.push_back(criterion_rayleigh_round_trip());
    report.checks.push_back(criterion_charpoly_identity());
  } else if (suite == "dp-sensitivity") {
    report.checks.push_back(criterion_dp_sensitivity());
  } else if (suite == "inf-ratio") {
    for (auto& c : criterion_inf_divergence()) report.checks.push_back(c);
    report.diagnostics = suite_chain_diagnostics(
        vecd({1.0, 0.0}), vecd({2.0, 0.0}), SamplerMode::inf);
  } else {
    throw DomainError("unknown validation suite: " + suite);
  }
  return report;
}

}  // namespace hciz
