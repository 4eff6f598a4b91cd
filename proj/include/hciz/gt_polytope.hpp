#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/matrix.hpp"

namespace hciz {

// Absolute slack allowed on interlacing inequalities and top-row equality.
inline constexpr double kMembershipTol = 1e-10;

inline double default_equality_tol(const Eigen::VectorXd& lambda) {
  double span = lambda.size() > 0 ? lambda[0] - lambda[lambda.size() - 1] : 0.0;
  return 1e-9 * (1.0 + std::abs(span));
}

// Triangular array (R_{i,j})_{1 <= i <= j <= n}; row j holds the j largest-
// to-smallest eigenvalues of a leading j x j submatrix, the top row is row n.
// Rows are packed contiguously: row j starts at offset j(j-1)/2.
class RayleighTriangle {
 public:
  RayleighTriangle() : n_(0) {}
  explicit RayleighTriangle(int n) : n_(n), a_(packed_size(n), 0.0) {
    if (n < 1) throw DomainError("RayleighTriangle: n must be >= 1");
  }

  static int packed_size(int n) { return n * (n + 1) / 2; }
  static int offset(int row) { return row * (row - 1) / 2; }

  int size() const { return n_; }

  // 1-based indices, 1 <= i <= j <= n.
  double at(int i, int j) const { return a_[offset(j) + i - 1]; }
  double& at(int i, int j) { return a_[offset(j) + i - 1]; }

  std::span<const double> row(int j) const {
    return std::span<const double>(a_.data() + offset(j), j);
  }
  std::span<double> row(int j) {
    return std::span<double>(a_.data() + offset(j), j);
  }

  const std::vector<double>& packed() const { return a_; }
  std::vector<double>& packed() { return a_; }

  // All interlacing inequalities R_{i,j} >= R_{i,j-1} >= R_{i+1,j} hold with
  // the given slack.
  bool interlaces(double tol) const {
    for (int j = 2; j <= n_; ++j) {
      for (int i = 1; i < j; ++i) {
        if (at(i, j) - at(i, j - 1) < -tol) return false;
        if (at(i, j - 1) - at(i + 1, j) < -tol) return false;
      }
    }
    return true;
  }

 private:
  int n_;
  std::vector<double> a_;
};

// Row j of the Rayleigh map: eigenvalues of the leading j x j principal
// submatrices, each sorted non-increasing.
inline RayleighTriangle rayleigh_map(const HermitianMatrix& x) {
  const int n = x.dim();
  RayleighTriangle r(n);
  r.at(1, 1) = x.mat()(0, 0).real();
  for (int k = 2; k <= n; ++k) {
    Eigen::VectorXd vals = hermitian_eigenvalues(x.mat().topLeftCorner(k, k));
    for (int i = 1; i <= k; ++i) r.at(i, k) = vals[i - 1];
  }
  return r;
}

// Successive trace differences of the rows; equals the diagonal of any
// matrix mapping to the triangle.
inline Eigen::VectorXd type_vector(const RayleighTriangle& p) {
  const int n = p.size();
  Eigen::VectorXd t(n);
  double prev = 0.0;
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (double v : p.row(k)) s += v;
    t[k - 1] = s - prev;
    prev = s;
  }
  return t;
}

// The Gelfand-Tsetlin polytope of triangles with top row lambda. Entries
// forced by repeated lambda values are masked out; the remaining entries of
// rows 1..n-1 form the free coordinates, ordered row-major from row 1 up.
class GTPolytope {
 public:
  GTPolytope(Eigen::VectorXd lambda, double equality_tol)
      : lambda_(std::move(lambda)),
        n_(static_cast<int>(lambda_.size())),
        equality_tol_(equality_tol) {
    if (n_ < 1) throw DomainError("GTPolytope: lambda must be non-empty");
    for (int i = 0; i + 1 < n_; ++i) {
      if (lambda_[i] < lambda_[i + 1]) {
        throw DomainError("GTPolytope: lambda must be sorted non-increasing");
      }
    }
    build_mask();
    q_ = rational_denominator();
  }

  int n() const { return n_; }
  const Eigen::VectorXd& lambda() const { return lambda_; }
  double equality_tol() const { return equality_tol_; }

  // Smallest common denominator q with lambda_i = p_i / q, or 0 when no
  // denominator <= kDenominatorCap reproduces lambda.
  std::int64_t q() const { return q_; }
  static constexpr std::int64_t kDenominatorCap = 1000000;

  int free_dim() const { return static_cast<int>(free_pos_.size()); }
  bool fixed(int i, int j) const {
    return fixed_[RayleighTriangle::offset(j) + i - 1] != 0;
  }

  // Triangle with the top row and all masked entries filled in and free
  // entries zeroed; the starting point for embedding free vectors.
  const RayleighTriangle& forced_template() const { return template_; }

  // Membership: top row equals lambda and interlacing holds, both within
  // kMembershipTol.
  bool membership(const RayleighTriangle& p) const {
    if (p.size() != n_) throw DomainError("membership: triangle size mismatch");
    for (int i = 1; i <= n_; ++i) {
      if (std::abs(p.at(i, n_) - lambda_[i - 1]) > kMembershipTol) return false;
    }
    return p.interlaces(kMembershipTol);
  }

  // Interlacing test on a free-coordinate vector with an explicit margin:
  // every essential inequality (at least one free endpoint) must hold with
  // slack >= margin. Inequalities between two forced entries are equalities
  // of the affine span and are satisfied by construction. margin =
  // -kMembershipTol reproduces the membership oracle; positive margins give
  // a shrunken polytope.
  bool feasible_free(const Eigen::VectorXd& x, double margin,
                     RayleighTriangle& scratch) const {
    embed(x, scratch);
    const double* a = scratch.packed().data();
    for (const auto& [hi, lo] : essential_) {
      if (a[hi] - a[lo] < margin) return false;
    }
    return true;
  }

  void embed(const Eigen::VectorXd& x, RayleighTriangle& out) const {
    out = template_;
    for (int c = 0; c < free_dim(); ++c) out.packed()[free_pos_[c]] = x[c];
  }

  RayleighTriangle embed(const Eigen::VectorXd& x) const {
    RayleighTriangle out(n_);
    embed(x, out);
    return out;
  }

  Eigen::VectorXd extract_free(const RayleighTriangle& p) const {
    Eigen::VectorXd x(free_dim());
    for (int c = 0; c < free_dim(); ++c) x[c] = p.packed()[free_pos_[c]];
    return x;
  }

  // Packed index (row-major over the triangle) of each free coordinate and
  // the triangle row it lives in.
  const std::vector<int>& free_positions() const { return free_pos_; }
  const std::vector<int>& free_rows() const { return free_row_; }

  // Free-coordinate index of a packed position, -1 for fixed entries.
  int free_index_of(int packed) const { return packed_to_free_[packed]; }

  // Essential inequalities as (greater, smaller) packed index pairs.
  const std::vector<std::pair<int, int>>& essential_pairs() const {
    return essential_;
  }

 private:
  void build_mask() {
    fixed_.assign(RayleighTriangle::packed_size(n_), 0);
    template_ = RayleighTriangle(n_);
    for (int i = 1; i <= n_; ++i) template_.at(i, n_) = lambda_[i - 1];
    // Maximal runs of equal lambda values force P_{i,j} = lambda_p for
    // p <= i <= q + j - n.
    int p = 0;
    while (p < n_) {
      int q = p;
      while (q + 1 < n_ && lambda_[p] - lambda_[q + 1] <= equality_tol_) ++q;
      for (int j = 1; j <= n_; ++j) {
        int lo = p + 1;                  // 1-based i range
        int hi = std::min(j, q + 1 + j - n_);
        for (int i = lo; i <= hi; ++i) {
          fixed_[RayleighTriangle::offset(j) + i - 1] = 1;
          if (j < n_) template_.at(i, j) = lambda_[p];
        }
      }
      p = q + 1;
    }
    // Top row entries are always determined by lambda.
    for (int i = 1; i <= n_; ++i) {
      fixed_[RayleighTriangle::offset(n_) + i - 1] = 1;
    }
    free_pos_.clear();
    free_row_.clear();
    packed_to_free_.assign(RayleighTriangle::packed_size(n_), -1);
    for (int j = 1; j < n_; ++j) {
      for (int i = 1; i <= j; ++i) {
        int idx = RayleighTriangle::offset(j) + i - 1;
        if (!fixed_[idx]) {
          packed_to_free_[idx] = static_cast<int>(free_pos_.size());
          free_pos_.push_back(idx);
          free_row_.push_back(j);
        }
      }
    }
    essential_.clear();
    auto idx_of = [](int i, int j) { return RayleighTriangle::offset(j) + i - 1; };
    for (int j = 2; j <= n_; ++j) {
      for (int i = 1; i < j; ++i) {
        if (!fixed_[idx_of(i, j)] || !fixed_[idx_of(i, j - 1)]) {
          essential_.emplace_back(idx_of(i, j), idx_of(i, j - 1));
        }
        if (!fixed_[idx_of(i, j - 1)] || !fixed_[idx_of(i + 1, j)]) {
          essential_.emplace_back(idx_of(i, j - 1), idx_of(i + 1, j));
        }
      }
    }
  }

  // Continued-fraction reconstruction of each lambda_i as p_i/q_i, combined
  // by lcm. Returns 0 when the cap is exceeded or no good approximation
  // exists.
  std::int64_t rational_denominator() const {
    std::int64_t q = 1;
    for (int i = 0; i < n_; ++i) {
      std::int64_t qi = best_denominator(lambda_[i]);
      if (qi == 0) return 0;
      std::int64_t g = std::gcd(q, qi);
      double lcm = static_cast<double>(q) / g * static_cast<double>(qi);
      if (lcm > static_cast<double>(kDenominatorCap)) return 0;
      q = q / g * qi;
    }
    return q;
  }

  std::int64_t best_denominator(double x) const {
    double tol = equality_tol_;
    // Continued fraction expansion of x.
    double v = x;
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p_cur = static_cast<std::int64_t>(std::floor(v)), q_cur = 1;
    for (int it = 0; it < 64; ++it) {
      if (std::abs(x - static_cast<double>(p_cur) / q_cur) <= tol) {
        return q_cur;
      }
      double frac = v - std::floor(v);
      if (frac < 1e-15) break;
      v = 1.0 / frac;
      double a = std::floor(v);
      if (a > static_cast<double>(kDenominatorCap)) break;
      std::int64_t p_next = static_cast<std::int64_t>(a) * p_cur + p_prev;
      std::int64_t q_next = static_cast<std::int64_t>(a) * q_cur + q_prev;
      if (q_next > kDenominatorCap || q_next <= 0) break;
      p_prev = p_cur;
      q_prev = q_cur;
      p_cur = p_next;
      q_cur = q_next;
    }
    return std::abs(x - static_cast<double>(p_cur) / q_cur) <= tol ? q_cur : 0;
  }

  Eigen::VectorXd lambda_;
  int n_;
  double equality_tol_;
  std::int64_t q_ = 0;
  std::vector<std::uint8_t> fixed_;
  std::vector<int> free_pos_;
  std::vector<int> free_row_;
  std::vector<int> packed_to_free_;
  std::vector<std::pair<int, int>> essential_;
  RayleighTriangle template_;
};

inline GTPolytope build_polytope(const Eigen::VectorXd& lambda,
                                 double equality_tol) {
  return GTPolytope(lambda, equality_tol);
}

inline GTPolytope build_polytope(const Eigen::VectorXd& lambda) {
  return GTPolytope(lambda, default_equality_tol(lambda));
}

inline bool membership(const GTPolytope& poly, const RayleighTriangle& p) {
  return poly.membership(p);
}

// Reduced exponent of the log-linear density on the polytope. y_delta is
// constant along each row: y_delta_{i,j} = y_j - y_{j+1}. Contributions of
// the top row and of all masked entries are absorbed into const_term, so
// that <y_delta, P_free> + const_term = <y, type(P)> for members P.
class ExponentSpec {
 public:
  ExponentSpec(Eigen::VectorXd y, const GTPolytope& poly)
      : y_(std::move(y)), n_(static_cast<int>(y_.size())) {
    if (n_ != poly.n()) throw DomainError("ExponentSpec: length mismatch");
    for (int i = 0; i + 1 < n_; ++i) {
      if (y_[i] < y_[i + 1]) {
        throw DomainError("ExponentSpec: y must be sorted non-increasing");
      }
    }
    row_delta_.resize(n_ > 0 ? n_ - 1 : 0);
    for (int j = 1; j < n_; ++j) row_delta_[j - 1] = y_[j - 1] - y_[j];
    const_term_ = y_[n_ - 1] * poly.lambda().sum();
    for (int j = 1; j < n_; ++j) {
      for (int i = 1; i <= j; ++i) {
        if (poly.fixed(i, j)) {
          const_term_ += row_delta_[j - 1] * poly.forced_template().at(i, j);
        }
      }
    }
  }

  int n() const { return n_; }
  const Eigen::VectorXd& y() const { return y_; }
  double const_term() const { return const_term_; }

  // y_delta_{i,j} for 1 <= i <= j <= n-1.
  double y_delta(int i, int j) const {
    (void)i;
    return row_delta_[j - 1];
  }

  // Gradient of the log-density in the polytope's free coordinates.
  Eigen::VectorXd free_gradient(const GTPolytope& poly) const {
    Eigen::VectorXd g(poly.free_dim());
    for (int c = 0; c < poly.free_dim(); ++c) {
      g[c] = row_delta_[poly.free_rows()[c] - 1];
    }
    return g;
  }

 private:
  Eigen::VectorXd y_;
  int n_;
  std::vector<double> row_delta_;
  double const_term_ = 0.0;
};

inline ExponentSpec reduce_exponent(const Eigen::VectorXd& y,
                                    const GTPolytope& poly) {
  return ExponentSpec(y, poly);
}

inline ExponentSpec reduce_exponent(const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& lambda) {
  if (y.size() != lambda.size()) {
    throw DomainError("reduce_exponent: length mismatch");
  }
  return ExponentSpec(y, build_polytope(lambda));
}

// Unnormalized log-density <y_delta, P> over the free coordinates.
inline double log_density(const ExponentSpec& spec, const GTPolytope& poly,
                          const RayleighTriangle& p) {
  if (!poly.membership(p)) {
    throw DomainError("log_density: triangle is not a member");
  }
  return spec.free_gradient(poly).dot(poly.extract_free(p));
}

// Radius sqrt(n) * (lambda_1 - lambda_n) of a ball containing the polytope.
inline double outer_radius(const GTPolytope& poly) {
  const auto& l = poly.lambda();
  return std::sqrt(static_cast<double>(poly.n())) * (l[0] - l[poly.n() - 1]);
}

struct InnerBall {
  RayleighTriangle center;
  double radius = 0.0;
};

// Strictly interior center plus a radius such that the ball (in the free
// coordinates) stays inside the polytope. For rational lambda = p/q the
// center fills row n-j with integer multiples of 1/((j+1)q) and the radius
// is 1/(8 n^2 q); otherwise the midpoint construction is used with radius
// equal to half the realized minimum slack.
inline InnerBall inner_ball(const GTPolytope& poly) {
  const int n = poly.n();
  InnerBall ball;
  ball.center = poly.forced_template();
  if (poly.free_dim() == 0) {
    ball.radius = 0.0;
    return ball;
  }
  RayleighTriangle& c = ball.center;
  const std::int64_t q = poly.q();
  bool grid_ok = q > 0;
  if (grid_ok) {
    for (int r = n - 1; r >= 1 && grid_ok; --r) {
      double h = 1.0 / (static_cast<double>(n - r + 1) * q);
      for (int i = 1; i <= r; ++i) {
        if (poly.fixed(i, r)) continue;
        double lower = c.at(i + 1, r + 1);
        double upper = c.at(i, r + 1);
        std::int64_t lo = static_cast<std::int64_t>(std::floor(lower / h)) + 1;
        std::int64_t hi = static_cast<std::int64_t>(std::ceil(upper / h)) - 1;
        while (static_cast<double>(lo) * h <= lower) ++lo;
        while (static_cast<double>(hi) * h >= upper) --hi;
        if (lo > hi) {
          grid_ok = false;
          break;
        }
        double mid = 0.5 * (lower + upper) / h;
        std::int64_t m = std::clamp(
            static_cast<std::int64_t>(std::llround(mid)), lo, hi);
        c.at(i, r) = static_cast<double>(m) * h;
      }
    }
    if (grid_ok) {
      ball.radius = 1.0 / (8.0 * static_cast<double>(n) * n * q);
      return ball;
    }
    ball.center = poly.forced_template();
  }
  // Midpoint fallback.
  for (int r = n - 1; r >= 1; --r) {
    for (int i = 1; i <= r; ++i) {
      if (poly.fixed(i, r)) continue;
      c.at(i, r) = 0.5 * (c.at(i, r + 1) + c.at(i + 1, r + 1));
    }
  }
  double min_slack = std::numeric_limits<double>::infinity();
  for (int j = 2; j <= n; ++j) {
    for (int i = 1; i < j; ++i) {
      bool upper_free = !poly.fixed(i, j);
      bool inner_free = !poly.fixed(i, j - 1);
      bool lower_free = !poly.fixed(i + 1, j);
      if (upper_free || inner_free) {
        min_slack = std::min(min_slack, c.at(i, j) - c.at(i, j - 1));
      }
      if (inner_free || lower_free) {
        min_slack = std::min(min_slack, c.at(i, j - 1) - c.at(i + 1, j));
      }
    }
  }
  ball.radius = std::max(0.0, 0.5 * min_slack);
  return ball;
}

// Uniform sample from the polytope: Rayleigh map of a Haar conjugation of
// diag(lambda).
inline RayleighTriangle uniform_gt_sample(const GTPolytope& poly, Rng& rng) {
  const int n = poly.n();
  UnitaryMatrix u = sample_haar_unitary(n, rng);
  HermitianMatrix x = u.conjugate(HermitianMatrix::diagonal(poly.lambda()));
  return rayleigh_map(x);
}

}  // namespace hciz
