#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/gt_polytope.hpp"
#include "hciz/random.hpp"

namespace hciz {

enum class SamplerMode { tv, inf };

// Knobs for the two polytope samplers. xi is the target error: total
// variation distance in tv mode, infinity divergence in inf mode.
// grid_resolution is the lattice pitch of the inf-mode walk and must be
// positive there; make_tv_config / make_inf_config fill in defaults.
struct SamplerConfig {
  SamplerMode mode = SamplerMode::tv;
  double xi = 0.1;
  long burn_in = 1000;
  long thinning = 100;
  int chains = 2;
  std::uint64_t seed = 0;
  double grid_resolution = 0.0;
  // inf mode only: estimate a full isotropy transform from a pilot uniform
  // run instead of the plain inner-ball scaling; grid_resolution is then in
  // whitened units.
  bool isotropic = false;

  void validate() const {
    if (xi <= 0.0) throw DomainError("SamplerConfig: xi must be > 0");
    if (burn_in < 1 || thinning < 1 || chains < 1) {
      throw DomainError("SamplerConfig: burn_in, thinning, chains must be >= 1");
    }
    if (mode == SamplerMode::inf && grid_resolution <= 0.0) {
      throw DomainError("SamplerConfig: grid_resolution must be > 0 in inf mode");
    }
  }
};

inline SamplerConfig make_tv_config(const GTPolytope& poly, double xi,
                                    std::uint64_t seed = 0) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::tv;
  cfg.xi = xi;
  long d = std::max(1, poly.free_dim());
  cfg.burn_in = 1000 * d * d;
  cfg.thinning = 100 * d;
  cfg.seed = seed;
  return cfg;
}

// Full-isotropy transform estimated from a pilot uniform run: free
// coordinates are walked in the whitened frame x = anchor + L y.
struct IsotropyMap {
  Eigen::MatrixXd L;
};

inline IsotropyMap estimate_isotropy(const GTPolytope& poly, Rng& rng,
                                     int pilot = 512) {
  const int d = poly.free_dim();
  Eigen::MatrixXd xs(d, pilot);
  for (int i = 0; i < pilot; ++i) {
    xs.col(i) = poly.extract_free(uniform_gt_sample(poly, rng));
  }
  Eigen::VectorXd mean = xs.rowwise().mean();
  Eigen::MatrixXd centered = xs.colwise() - mean;
  Eigen::MatrixXd cov = centered * centered.transpose() / (pilot - 1);
  cov += 1e-12 * (1.0 + cov.trace() / d) * Eigen::MatrixXd::Identity(d, d);
  return IsotropyMap{Eigen::LLT<Eigen::MatrixXd>(cov).matrixL()};
}

// Default pitch xi * r / (4 (1 + |y_delta|)); burn-in and thinning scale
// with the squared number of lattice cells across the polytope, which is
// what the lattice walk needs to decorrelate. With isotropic rounding the
// pitch and gradient are measured in the whitened frame.
inline SamplerConfig make_inf_config(const GTPolytope& poly,
                                     const ExponentSpec& spec, double xi,
                                     std::uint64_t seed = 0,
                                     bool isotropic = false) {
  SamplerConfig cfg;
  cfg.mode = SamplerMode::inf;
  cfg.xi = xi;
  cfg.seed = seed;
  cfg.isotropic = isotropic;
  long d = std::max(1, poly.free_dim());
  double r = inner_ball(poly).radius;
  double bigR = outer_radius(poly);
  double lnorm = spec.free_gradient(poly).norm();
  if (r <= 0.0) r = std::max(bigR, 1.0) * 1e-3;
  double cells;
  if (isotropic && poly.free_dim() > 0) {
    Rng pilot_rng(derive_seed(seed, 0x150));
    IsotropyMap map = estimate_isotropy(poly, pilot_rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map.L);
    double smax = svd.singularValues()[0];
    double r_w = r / std::max(smax, 1e-300);
    double l_w = (map.L.transpose() * spec.free_gradient(poly)).norm();
    cfg.grid_resolution = xi * r_w / (4.0 * (1.0 + l_w));
    // Whitened polytope has unit covariance, so a few sqrt(d) across.
    cells = std::max(1.0, 6.0 * std::sqrt(static_cast<double>(d)) /
                              cfg.grid_resolution);
  } else {
    cfg.grid_resolution = xi * r / (4.0 * (1.0 + lnorm));
    cells = std::max(1.0, 2.0 * bigR / cfg.grid_resolution);
  }
  cfg.burn_in = static_cast<long>(std::min(1e9, 2.0 * d * cells * cells));
  cfg.thinning = static_cast<long>(std::max(1.0, std::min(1e7, cells * cells / 5.0)));
  return cfg;
}

// Per-chain counters reported alongside samples.
struct WalkStats {
  long steps = 0;
  long accepted = 0;
  long chord_retries = 0;
  double acceptance_rate() const {
    return steps > 0 ? static_cast<double>(accepted) / steps : 1.0;
  }
};

namespace detail {

// Exact draw from the density proportional to exp(a * t) on [lo, hi],
// stabilized with expm1/log1p so that large |a| and tiny intervals are both
// safe.
inline double sample_chord_exponential(double lo, double hi, double a,
                                       Rng& rng) {
  double len = hi - lo;
  double u = uniform01(rng);
  if (len <= 0.0) return lo;
  double al = a * len;
  if (std::abs(al) < 1e-12) return lo + u * len;
  double t;
  if (a > 0.0) {
    t = hi + std::log1p(u * std::expm1(-al)) / a;
  } else {
    t = lo + std::log1p(u * std::expm1(al)) / a;
  }
  return std::clamp(t, lo, hi);
}

// Hit-and-run chain over the free coordinates of the polytope.
class HitAndRunWalk {
 public:
  HitAndRunWalk(const GTPolytope& poly, const ExponentSpec& spec)
      : poly_(poly),
        grad_(spec.free_gradient(poly)),
        scratch_(poly.n()),
        reach_(2.0 * outer_radius(poly) + 1.0) {}

  void set_state(const Eigen::VectorXd& x) { x_ = x; }
  const Eigen::VectorXd& state() const { return x_; }
  const WalkStats& stats() const { return stats_; }

  void step(Rng& rng) {
    const int d = static_cast<int>(x_.size());
    for (int attempt = 0; attempt < 100; ++attempt) {
      Eigen::VectorXd u = sample_real_direction(d, rng);
      double t_pos = boundary_distance(u);
      double t_neg = boundary_distance(-u);
      if (t_pos + t_neg <= 0.0) {
        ++stats_.chord_retries;
        continue;
      }
      double a = grad_.dot(u);
      double t = sample_chord_exponential(-t_neg, t_pos, a, rng);
      x_ += t * u;
      ++stats_.steps;
      ++stats_.accepted;
      return;
    }
    throw InconsistencyError("hit_and_run: failed to locate a chord");
  }

 private:
  // Largest t with x + t*u still a member, located by bisection against the
  // membership oracle to 1e-12 on the line parameter.
  double boundary_distance(const Eigen::VectorXd& u) {
    double lo = 0.0;
    double hi = reach_;
    if (!feasible(x_)) return 0.0;
    Eigen::VectorXd probe = x_ + hi * u;
    if (feasible(probe)) return hi;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      probe = x_ + mid * u;
      if (feasible(probe)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  bool feasible(const Eigen::VectorXd& x) {
    return poly_.feasible_free(x, -kMembershipTol, scratch_);
  }

  const GTPolytope& poly_;
  Eigen::VectorXd grad_;
  Eigen::VectorXd x_;
  RayleighTriangle scratch_;
  WalkStats stats_;
  double reach_;
};

// Metropolis walk on the lattice (inner center + L * pitch * Z^d)
// intersected with the polytope shrunken by one lattice cell, so that every
// cell is fully feasible. L defaults to the identity; with isotropic
// rounding it is the Cholesky factor of a pilot covariance. Emitted points
// carry uniform jitter over their cell.
class GridWalk {
 public:
  GridWalk(const GTPolytope& poly, const ExponentSpec& spec, double pitch,
           const Eigen::MatrixXd* map = nullptr)
      : poly_(poly),
        pitch_(pitch),
        scratch_(poly.n()) {
    if (pitch_ <= 0.0) throw DomainError("GridWalk: pitch must be > 0");
    const int d = poly.free_dim();
    lmap_ = map ? *map : Eigen::MatrixXd::Identity(d, d);
    grad_ = lmap_.transpose() * spec.free_gradient(poly);
    anchor_ = poly.extract_free(inner_ball(poly).center);
    // Worst change of any essential constraint under a half-pitch jitter in
    // the lattice frame; shrinking by this margin keeps whole cells inside.
    double worst = 0.0;
    for (const auto& [hi, lo] : poly.essential_pairs()) {
      Eigen::VectorXd coeff = Eigen::VectorXd::Zero(d);
      int a = poly.free_index_of(hi);
      int b = poly.free_index_of(lo);
      if (a >= 0) coeff += lmap_.row(a);
      if (b >= 0) coeff -= lmap_.row(b);
      worst = std::max(worst, coeff.lpNorm<1>());
    }
    cell_margin_ = 0.5 * pitch_ * worst;
    k_ = Eigen::VectorXi::Zero(d);
    if (!lattice_feasible(k_)) {
      throw DomainError("GridWalk: pitch too coarse for the inner ball");
    }
  }

  const WalkStats& stats() const { return stats_; }

  void step(Rng& rng) {
    const int d = static_cast<int>(k_.size());
    ++stats_.steps;
    int move = std::uniform_int_distribution<int>(0, 2 * d)(rng);
    if (move == 2 * d) return;  // lazy self-loop keeps the chain aperiodic
    int axis = move / 2;
    int dir = (move % 2 == 0) ? 1 : -1;
    Eigen::VectorXi next = k_;
    next[axis] += dir;
    if (!lattice_feasible(next)) return;
    double dlog = grad_[axis] * pitch_ * dir;
    if (dlog >= 0.0 || uniform01(rng) < std::exp(dlog)) {
      k_ = next;
      ++stats_.accepted;
    }
  }

  Eigen::VectorXd emit(Rng& rng) const {
    Eigen::VectorXd y = pitch_ * k_.cast<double>();
    for (int i = 0; i < y.size(); ++i) {
      y[i] += pitch_ * (uniform01(rng) - 0.5);
    }
    return anchor_ + lmap_ * y;
  }

 private:
  Eigen::VectorXd point(const Eigen::VectorXi& k) const {
    return anchor_ + lmap_ * (pitch_ * k.cast<double>());
  }

  bool lattice_feasible(const Eigen::VectorXi& k) {
    return poly_.feasible_free(point(k), cell_margin_, scratch_);
  }

  const GTPolytope& poly_;
  Eigen::VectorXd grad_;
  double pitch_;
  double cell_margin_ = 0.0;
  Eigen::MatrixXd lmap_;
  Eigen::VectorXd anchor_;
  Eigen::VectorXi k_;
  RayleighTriangle scratch_;
  WalkStats stats_;
};

}  // namespace detail

// One chain of the TV-mode sampler: burn in, then emit `count` triangles one
// thinning interval apart. The chord step samples the 1-D conditional
// exactly, so only between-step correlation and burn-in contribute error.
inline std::vector<RayleighTriangle> hit_and_run_chain(
    const GTPolytope& poly, const ExponentSpec& spec, const SamplerConfig& cfg,
    Rng& rng, long count, WalkStats* stats = nullptr) {
  cfg.validate();
  std::vector<RayleighTriangle> out;
  out.reserve(count);
  if (poly.free_dim() == 0) {
    for (long i = 0; i < count; ++i) out.push_back(poly.forced_template());
    return out;
  }
  detail::HitAndRunWalk walk(poly, spec);
  walk.set_state(poly.extract_free(uniform_gt_sample(poly, rng)));
  for (long i = 0; i < cfg.burn_in; ++i) walk.step(rng);
  for (long s = 0; s < count; ++s) {
    for (long i = 0; i < cfg.thinning; ++i) walk.step(rng);
    out.push_back(poly.embed(walk.state()));
  }
  if (stats) *stats = walk.stats();
  return out;
}

inline RayleighTriangle hit_and_run_sample(const GTPolytope& poly,
                                           const ExponentSpec& spec,
                                           const SamplerConfig& cfg, Rng& rng) {
  if (cfg.mode != SamplerMode::tv) {
    throw DomainError("hit_and_run_sample: config mode must be tv");
  }
  return hit_and_run_chain(poly, spec, cfg, rng, 1).front();
}

// One chain of the infinity-divergence sampler. With cfg.isotropic the
// whitening transform is estimated once from a pilot run seeded off
// cfg.seed, so equal configs keep producing identical chains.
inline std::vector<RayleighTriangle> grid_walk_chain(
    const GTPolytope& poly, const ExponentSpec& spec, const SamplerConfig& cfg,
    Rng& rng, long count, WalkStats* stats = nullptr) {
  cfg.validate();
  std::vector<RayleighTriangle> out;
  out.reserve(count);
  if (poly.free_dim() == 0) {
    for (long i = 0; i < count; ++i) out.push_back(poly.forced_template());
    return out;
  }
  std::optional<detail::GridWalk> walk;
  if (cfg.isotropic) {
    Rng pilot_rng(derive_seed(cfg.seed, 0x150));
    IsotropyMap map = estimate_isotropy(poly, pilot_rng);
    walk.emplace(poly, spec, cfg.grid_resolution, &map.L);
  } else {
    walk.emplace(poly, spec, cfg.grid_resolution);
  }
  for (long i = 0; i < cfg.burn_in; ++i) walk->step(rng);
  for (long s = 0; s < count; ++s) {
    for (long i = 0; i < cfg.thinning; ++i) walk->step(rng);
    out.push_back(poly.embed(walk->emit(rng)));
  }
  if (stats) *stats = walk->stats();
  return out;
}

inline RayleighTriangle grid_walk_sample(const GTPolytope& poly,
                                         const ExponentSpec& spec,
                                         const SamplerConfig& cfg, Rng& rng) {
  if (cfg.mode != SamplerMode::inf) {
    throw DomainError("grid_walk_sample: config mode must be inf");
  }
  return grid_walk_chain(poly, spec, cfg, rng, 1).front();
}

struct ChainDiagnostics {
  double acceptance_rate = 1.0;
  double psrf = 1.0;
  double effective_sample_size = 0.0;
};

// One chain's retained samples, one coordinate vector per sample.
using ChainTrace = std::vector<Eigen::VectorXd>;

// Gelman-Rubin potential scale reduction and a Geyer-truncated effective
// sample size, worst case over coordinates.
inline ChainDiagnostics run_diagnostics(const std::vector<ChainTrace>& chains,
                                        double acceptance_rate = 1.0) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw DomainError("run_diagnostics: need at least 2 chains");
  const long n = static_cast<long>(chains[0].size());
  for (const auto& c : chains) {
    if (static_cast<long>(c.size()) != n || n < 100) {
      throw DomainError("run_diagnostics: need >= 100 samples per chain");
    }
  }
  const int d = static_cast<int>(chains[0][0].size());
  ChainDiagnostics diag;
  diag.acceptance_rate = acceptance_rate;
  diag.psrf = 1.0;
  diag.effective_sample_size = std::numeric_limits<double>::infinity();

  for (int c = 0; c < d; ++c) {
    std::vector<double> means(m), vars(m);
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (long t = 0; t < n; ++t) s += chains[j][t][c];
      means[j] = s / n;
      double v = 0.0;
      for (long t = 0; t < n; ++t) {
        double dd = chains[j][t][c] - means[j];
        v += dd * dd;
      }
      vars[j] = v / (n - 1);
    }
    double w = 0.0;
    for (double v : vars) w += v;
    w /= m;
    double grand = 0.0;
    for (double mu : means) grand += mu;
    grand /= m;
    double b = 0.0;
    for (double mu : means) b += (mu - grand) * (mu - grand);
    b = b * n / (m - 1);
    double vhat = (n - 1.0) / n * w + b / n;
    double psrf;
    if (w <= 1e-300) {
      psrf = (b <= 1e-300) ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      psrf = std::sqrt(vhat / w);
    }
    diag.psrf = std::max(diag.psrf, psrf);

    // Effective sample size from chain-averaged autocorrelations, truncated
    // at the first negative Geyer pair.
    if (vhat <= 1e-300) continue;
    const long max_lag = std::min<long>(n - 1, 500);
    std::vector<double> rho(max_lag + 1, 0.0);
    for (long t = 1; t <= max_lag; ++t) {
      double acov = 0.0;
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (long k = 0; k + t < n; ++k) {
          s += (chains[j][k][c] - means[j]) * (chains[j][k + t][c] - means[j]);
        }
        acov += s / (n - t);
      }
      acov /= m;
      rho[t] = 1.0 - (w - acov) / vhat;
    }
    double tau = 1.0;
    for (long t = 1; t + 1 <= max_lag; t += 2) {
      double pair = rho[t] + rho[t + 1];
      if (pair < 0.0) break;
      tau += 2.0 * pair;
    }
    double ess = static_cast<double>(m) * n / tau;
    diag.effective_sample_size = std::min(diag.effective_sample_size, ess);
  }
  if (!std::isfinite(diag.effective_sample_size)) {
    diag.effective_sample_size = static_cast<double>(m) * n;
  }
  return diag;
}

}  // namespace hciz
