#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hciz/errors.hpp"

namespace hciz {

struct MomentSummary {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  std::size_t count = 0;
};

inline MomentSummary summarize(const std::vector<double>& xs) {
  MomentSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - s.mean) * (x - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1)) : 0.0;
  s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(xs.size()));
  return s;
}

// Survival function of the Kolmogorov distribution, Q(t) = P(K > t).
inline double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.755) {
    // Small-t series in terms of exp(-pi^2 / (8 t^2)).
    double v = M_PI * M_PI / (8.0 * t * t);
    double sum = 0.0;
    for (int k = 1; k <= 21; k += 2) sum += std::exp(-k * k * v);
    return 1.0 - std::sqrt(2.0 * M_PI) / t * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 101; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample KS test against an arbitrary CDF, with the Stephens small-n
// correction on the asymptotic p-value.
inline KsResult ks_test(std::vector<double> xs,
                        const std::function<double(double)>& cdf) {
  if (xs.empty()) throw DomainError("ks_test: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max(d, (i + 1) / n - f);
    d = std::max(d, f - i / n);
  }
  double t = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
  return KsResult{d, kolmogorov_q(t)};
}

// Two-sample KS test.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  double ne = na * nb / (na + nb);
  double t = d * (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne));
  return KsResult{d, kolmogorov_q(t)};
}

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<long> counts;
  long total = 0;

  double frequency(std::size_t bin) const {
    return total > 0 ? static_cast<double>(counts[bin]) / total : 0.0;
  }
  double bin_width() const { return (hi - lo) / counts.size(); }
};

inline Histogram make_histogram(const std::vector<double>& xs, double lo,
                                double hi, int bins) {
  if (bins < 1 || hi <= lo) throw DomainError("make_histogram: bad layout");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  for (double x : xs) {
    if (x < lo || x > hi) continue;
    int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
    ++h.counts[b];
    ++h.total;
  }
  return h;
}

}  // namespace hciz
