#include <cmath>
#include <numbers>
#include <string>

#include "lomem/baselines.hpp"
#include "lomem/error.hpp"

namespace lomem {

std::size_t default_bandwidth(std::size_t n) {
  if (n < 16) throw InvalidInput("default_bandwidth: n must be >= 16");
  // Small slack so exact powers (n = 32 -> 16) are not lost to rounding.
  const auto m = 1 + static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.8) + 1e-9));
  return std::min(m, n / 2);
}

LsEstimate fit_ls(const RegressionSample& s) {
  const std::size_t k = s.size();
  if (k < 3) throw InvalidInput("fit_ls: need at least 3 grid points, got " + std::to_string(k));

  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    xbar += s.regressors[i];
    ybar += s.responses[i];
  }
  xbar /= static_cast<double>(k);
  ybar /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = s.regressors[i] - xbar;
    sxx += dx * dx;
    sxy += dx * (s.responses[i] - ybar);
  }
  if (!(sxx > 1e-12 * (1.0 + xbar * xbar) * static_cast<double>(k))) {
    throw InvalidInput("fit_ls: regressor is constant");
  }

  LsEstimate e;
  e.d = sxy / sxx;
  e.c = ybar - e.d * xbar;
  e.points = k;
  e.bandwidth = s.bandwidth;
  e.trim = s.trim;
  e.pooling = s.pooling;
  if (s.pooling == 1) {
    e.se = std::sqrt(std::numbers::pi * std::numbers::pi / (24.0 * static_cast<double>(k)));
  } else {
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = s.responses[i] - e.c - e.d * s.regressors[i];
      rss += r * r;
    }
    e.se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  }
  e.lower = e.d - 1.96 * e.se;
  e.upper = e.d + 1.96 * e.se;
  return e;
}

LsEstimate estimate_ls(const TimeSeries& series, std::size_t trim, std::size_t pooling,
                       std::optional<std::size_t> bandwidth) {
  const std::size_t m = bandwidth.value_or(default_bandwidth(series.size()));
  return fit_ls(pooled_log_periodogram(periodogram(series), pooling, trim, m));
}

}  // namespace lomem
