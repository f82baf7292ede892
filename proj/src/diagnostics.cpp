#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lomem/baselines.hpp"
#include "lomem/error.hpp"

namespace lomem {

namespace {

constexpr std::size_t kMinRsLength = 64;
constexpr std::size_t kMinDfaLength = 256;
constexpr std::size_t kMinRsWindow = 16;

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<std::size_t> dyadic_windows(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t s = kMinRsWindow; s <= n / 2; s *= 2) out.push_back(s);
  return out;
}

std::size_t lo_lag(std::size_t s) {
  return static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(s) / 100.0, 0.25)));
}

// Average R/S over the non-overlapping blocks of length s. Blocks with zero
// spread are skipped; returns 0 if every block was skipped.
double mean_rescaled_range(std::span<const double> x, std::size_t s, bool corrected) {
  const std::size_t blocks = x.size() / s;
  const std::size_t q = corrected ? lo_lag(s) : 0;
  std::vector<double> dev(s);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* block = x.data() + b * s;
    double mean = 0.0;
    for (std::size_t t = 0; t < s; ++t) mean += block[t];
    mean /= static_cast<double>(s);
    double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
    for (std::size_t t = 0; t < s; ++t) {
      dev[t] = block[t] - mean;
      cum += dev[t];
      lo = std::min(lo, cum);
      hi = std::max(hi, cum);
      ss += dev[t] * dev[t];
    }
    double var = ss / static_cast<double>(s);
    for (std::size_t i = 1; i <= q && i < s; ++i) {
      double g = 0.0;
      for (std::size_t t = i; t < s; ++t) g += dev[t] * dev[t - i];
      const double w = 1.0 - static_cast<double>(i) / static_cast<double>(q + 1);
      var += 2.0 * w * g / static_cast<double>(s);
    }
    if (!(var > 0.0)) continue;
    total += (hi - lo) / std::sqrt(var);
    ++used;
  }
  return used == 0 ? 0.0 : total / static_cast<double>(used);
}

// Anis-Lloyd expected R/S of s i.i.d. normals with the Peters small-sample
// factor (s - 1/2) / s.
double anis_lloyd(std::size_t s) {
  const double sd = static_cast<double>(s);
  double sum = 0.0;
  for (std::size_t i = 1; i < s; ++i) {
    sum += std::sqrt((sd - static_cast<double>(i)) / static_cast<double>(i));
  }
  const double lead = s <= 340
                          ? std::exp(std::lgamma(0.5 * (sd - 1.0)) - std::lgamma(0.5 * sd)) /
                                std::sqrt(std::numbers::pi)
                          : 1.0 / std::sqrt(0.5 * sd * std::numbers::pi);
  return (sd - 0.5) / sd * lead * sum;
}

std::vector<double> rs_curve(const TimeSeries& series, bool corrected,
                             std::vector<std::size_t>& windows) {
  if (series.size() < kMinRsLength) throw InvalidInput("R/S analysis requires n >= 64");
  windows = dyadic_windows(series.size());
  std::vector<double> out;
  out.reserve(windows.size());
  for (std::size_t s : windows) {
    const double rs = mean_rescaled_range(series.values(), s, corrected);
    if (!(rs > 0.0)) throw DegenerateInput("R/S analysis: series is constant");
    out.push_back(rs);
  }
  return out;
}

}  // namespace

double rs_hurst(const TimeSeries& series, bool corrected) {
  std::vector<std::size_t> windows;
  const std::vector<double> rs = rs_curve(series, corrected, windows);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(windows[i])));
    ly.push_back(std::log(rs[i]));
  }
  return ols_slope(lx, ly);
}

double empirical_hurst(const TimeSeries& series) {
  std::vector<std::size_t> windows;
  const std::vector<double> rs = rs_curve(series, false, windows);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(windows[i])));
    ly.push_back(std::log(rs[i] / anis_lloyd(windows[i])));
  }
  return 0.5 + ols_slope(lx, ly);
}

Dfa2Result dfa2(const TimeSeries& series) {
  const std::size_t n = series.size();
  if (n < kMinDfaLength) throw InvalidInput("DFA2 requires n >= 256");
  const auto x = series.values();

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> profile(n);
  double cum = 0.0, scale = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    cum += x[t] - mean;
    profile[t] = cum;
    scale = std::max(scale, std::abs(cum));
  }

  constexpr std::size_t kScales = 16;
  const double lo = std::log(10.0);
  const double hi = std::log(static_cast<double>(n) / 4.0);
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < kScales; ++k) {
    const double s = std::exp(lo + (hi - lo) * static_cast<double>(k) / (kScales - 1));
    const auto si = static_cast<std::size_t>(std::lround(s));
    if (sizes.empty() || si != sizes.back()) sizes.push_back(si);
  }

  Dfa2Result out;
  std::vector<double> p1, p2;
  for (std::size_t s : sizes) {
    // Orthogonal quadratic basis on t = 0..s-1.
    const double sd = static_cast<double>(s);
    const double tbar = 0.5 * (sd - 1.0);
    const double c2 = (sd * sd - 1.0) / 12.0;  // mean of (t - tbar)^2
    p1.assign(s, 0.0);
    p2.assign(s, 0.0);
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t t = 0; t < s; ++t) {
      p1[t] = static_cast<double>(t) - tbar;
      p2[t] = p1[t] * p1[t] - c2;
      n1 += p1[t] * p1[t];
      n2 += p2[t] * p2[t];
    }
    const std::size_t windows = n / s;
    double sse = 0.0;
    for (std::size_t w = 0; w < windows; ++w) {
      const double* y = profile.data() + w * s;
      double b0 = 0.0, b1 = 0.0, b2 = 0.0;
      for (std::size_t t = 0; t < s; ++t) {
        b0 += y[t];
        b1 += y[t] * p1[t];
        b2 += y[t] * p2[t];
      }
      b0 /= sd;
      b1 /= n1;
      b2 /= n2;
      for (std::size_t t = 0; t < s; ++t) {
        const double r = y[t] - b0 - b1 * p1[t] - b2 * p2[t];
        sse += r * r;
      }
    }
    out.scales.push_back(sd);
    out.fluctuations.push_back(std::sqrt(sse / static_cast<double>(windows * s)));
  }

  const double fmax = *std::max_element(out.fluctuations.begin(), out.fluctuations.end());
  const double fmin = *std::min_element(out.fluctuations.begin(), out.fluctuations.end());
  if (!(fmin > 1e-9 * (1.0 + scale)) || !(fmax > 0.0)) {
    out.degenerate = true;
    out.alpha = 0.0;
    return out;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.scales.size(); ++i) {
    lx.push_back(std::log(out.scales[i]));
    ly.push_back(std::log(out.fluctuations[i]));
  }
  out.alpha = ols_slope(lx, ly);
  return out;
}

DiagnosticsReport diagnostics(const TimeSeries& series) {
  DiagnosticsReport r;
  r.rs_hurst = rs_hurst(series, false);
  r.corrected_rs_hurst = rs_hurst(series, true);
  r.empirical_hurst = empirical_hurst(series);
  const Dfa2Result d = dfa2(series);
  r.dfa2_slope = d.alpha;
  r.dfa2_degenerate = d.degenerate;
  return r;
}

}  // namespace lomem
