#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "lomem/error.hpp"
#include "lomem/sampler.hpp"

namespace lomem {

namespace {

constexpr std::size_t kMinDraws = 100;

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidInput("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double effective_sample_size(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  const double mu = mean_of(x);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mu) * (x[t + lag] - mu);
    return s / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) return static_cast<double>(n);

  // Geyer: sum paired autocovariances while positive, forcing monotone decrease.
  double tau = -gamma0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = autocov(2 * k) + autocov(2 * k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau /= gamma0;
  return static_cast<double>(n) / std::max(tau, 1e-12);
}

double kde_mode(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mu = mean_of(sorted);
  double var = 0.0;
  for (double v : sorted) var += (v - mu) * (v - mu);
  const double sd = std::sqrt(var / std::max(n - 1.0, 1.0));
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  const double bw = 0.9 * spread * std::pow(n, -0.2);
  if (!(bw > 0.0)) return quantile_sorted(sorted, 0.5);

  auto density = [&](double at) {
    double s = 0.0;
    for (double v : sorted) {
      const double z = (at - v) / bw;
      s += std::exp(-0.5 * z * z);
    }
    return s;
  };
  constexpr int kGrid = 512;
  const double lo = sorted.front() - 3.0 * bw;
  const double hi = sorted.back() + 3.0 * bw;
  const double step = (hi - lo) / (kGrid - 1);
  double best_at = lo, best = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double at = lo + step * i;
    const double f = density(at);
    if (f > best) {
      best = f;
      best_at = at;
    }
  }
  // Golden-section refinement inside the neighbouring grid cells.
  double a = best_at - step, b = best_at + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = b - g * (b - a), c2 = a + g * (b - a);
  double f1 = density(c1), f2 = density(c2);
  for (int it = 0; it < 40; ++it) {
    if (f1 > f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - g * (b - a);
      f1 = density(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + g * (b - a);
      f2 = density(c2);
    }
  }
  return 0.5 * (a + b);
}

PosteriorSummary summarize(std::span<const double> draws) {
  if (draws.size() < kMinDraws) {
    throw InvalidInput("summarize: need at least " + std::to_string(kMinDraws) + " draws, got " +
                       std::to_string(draws.size()));
  }
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  PosteriorSummary s;
  s.draws = draws.size();
  s.mean = mean_of(draws);
  s.median = quantile_sorted(sorted, 0.5);
  s.lower = quantile_sorted(sorted, 0.025);
  s.upper = quantile_sorted(sorted, 0.975);
  s.map = sorted.front() == sorted.back() ? sorted.front() : kde_mode(draws);
  s.ess = effective_sample_size(draws);
  return s;
}

PosteriorSummary summarize(const PosteriorDraws& draws) { return summarize(draws.d); }

}  // namespace lomem
