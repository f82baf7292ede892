#include "lomem/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "fftw_lock.hpp"
#include "lomem/error.hpp"

namespace lomem {

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < kMinLength) {
    throw InvalidInput("time series needs at least " + std::to_string(kMinLength) +
                       " observations, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("non-finite observation at index " + std::to_string(i));
    }
  }
}

std::vector<double> fourier_frequencies(std::size_t n) {
  if (n < TimeSeries::kMinLength) {
    throw InvalidInput("fourier_frequencies: n must be >= 4");
  }
  std::vector<double> out(n / 2);
  for (std::size_t j = 1; j <= n / 2; ++j) {
    out[j - 1] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  }
  return out;
}

Periodogram periodogram(const TimeSeries& series) {
  const std::size_t n = series.size();
  const std::size_t bins = n / 2 + 1;

  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  double abs_sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    in[t] = series[t];
    abs_sum += std::abs(series[t]);
  }
  fftw_execute(plan);

  Periodogram pg;
  pg.n = n;
  pg.frequencies = fourier_frequencies(n);
  pg.ordinates.resize(n / 2);
  const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
  // Coefficients below the transform's rounding floor are exact zeros of the
  // double sum (e.g. constant input); snap them so degeneracy is detectable.
  const double floor_abs = 1e-13 * abs_sum;
  const double zero_tol = floor_abs * floor_abs * scale;
  // The t = 1..n indexing of the definition only multiplies each coefficient
  // by a unit-modulus phase, so |X_j|^2 is unchanged.
  for (std::size_t j = 1; j <= n / 2; ++j) {
    const double re = out[j][0];
    const double im = out[j][1];
    const double value = (re * re + im * im) * scale;
    pg.ordinates[j - 1] = value <= zero_tol ? 0.0 : value;
  }

  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return pg;
}

Periodogram periodogram_direct(const TimeSeries& series) {
  const std::size_t n = series.size();
  Periodogram pg;
  pg.n = n;
  pg.frequencies = fourier_frequencies(n);
  pg.ordinates.resize(n / 2);
  for (std::size_t j = 0; j < pg.frequencies.size(); ++j) {
    const double lam = pg.frequencies[j];
    double cs = 0.0;
    double sn = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
      cs += series[t - 1] * std::cos(lam * static_cast<double>(t));
      sn += series[t - 1] * std::sin(lam * static_cast<double>(t));
    }
    pg.ordinates[j] = (cs * cs + sn * sn) / (2.0 * std::numbers::pi * static_cast<double>(n));
  }
  return pg;
}

double regressor(double lambda) {
  if (!(lambda > 0.0) || lambda > std::numbers::pi) {
    throw DomainError("regressor: frequency must lie in (0, pi], got " + std::to_string(lambda));
  }
  const double s = std::sin(0.5 * lambda);
  return -std::log(4.0 * s * s);
}

double regressor(double lambda, RegressorForm form) {
  if (form == RegressorForm::SinSquared) return regressor(lambda);
  if (!(lambda > 0.0) || lambda > std::numbers::pi) {
    throw DomainError("regressor: frequency must lie in (0, pi], got " + std::to_string(lambda));
  }
  return -2.0 * std::log(lambda);
}

RegressionSample pooled_log_periodogram(const Periodogram& pg, std::size_t pooling,
                                        std::size_t trim, std::size_t bandwidth,
                                        RegressorForm form) {
  if (pooling == 0) throw InvalidBandwidth("pooling K must be >= 1");
  if (bandwidth > pg.size()) {
    throw InvalidBandwidth("bandwidth m = " + std::to_string(bandwidth) +
                           " exceeds floor(n/2) = " + std::to_string(pg.size()));
  }
  if (trim + pooling > bandwidth) {
    throw InvalidBandwidth("empty frequency grid: ell + K = " + std::to_string(trim + pooling) +
                           " > m = " + std::to_string(bandwidth));
  }

  RegressionSample s;
  s.pooling = pooling;
  s.trim = trim;
  s.bandwidth = bandwidth;
  s.n = pg.n;
  s.form = form;
  for (std::size_t j = trim + pooling; j <= bandwidth; j += pooling) {
    double sum = 0.0;
    for (std::size_t k = j + 1 - pooling; k <= j; ++k) sum += pg.ordinate(k);
    if (!(sum > 0.0)) {
      throw DegenerateInput("pooled periodogram sum is zero at Fourier index " +
                            std::to_string(j));
    }
    s.indices.push_back(j);
    s.frequencies.push_back(pg.frequency(j));
    s.responses.push_back(std::log(sum));
    s.regressors.push_back(regressor(pg.frequency(j), form));
  }
  return s;
}

}  // namespace lomem
