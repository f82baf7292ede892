#ifndef LOMEM_SPECTRAL_HPP
#define LOMEM_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace lomem {

/// Equally spaced real observations, n >= 4, all finite.
class TimeSeries {
 public:
  static constexpr std::size_t kMinLength = 4;

  TimeSeries() = default;
  /// Throws InvalidInput if fewer than four values or any value is not finite.
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Periodogram ordinates on the Fourier grid lambda_j = 2 pi j / n, j = 1..floor(n/2).
struct Periodogram {
  std::vector<double> frequencies;
  std::vector<double> ordinates;
  std::size_t n = 0;

  std::size_t size() const noexcept { return ordinates.size(); }
  /// Frequency / ordinate at one-based Fourier index j.
  double frequency(std::size_t j) const { return frequencies.at(j - 1); }
  double ordinate(std::size_t j) const { return ordinates.at(j - 1); }
};

/// Which covariate carries the long-memory slope.
enum class RegressorForm {
  SinSquared,  ///< -log(4 sin^2(lambda/2))
  LogLambda,   ///< -2 log(lambda), the small-frequency equivalent
};

/// Pooled log-periodogram responses and their regressors on the grid
/// j = ell + K, ell + 2K, ..., <= m.
struct RegressionSample {
  std::vector<double> responses;
  std::vector<double> regressors;
  std::vector<double> frequencies;
  std::vector<std::size_t> indices;  ///< one-based Fourier indices j
  std::size_t pooling = 1;           ///< K
  std::size_t trim = 0;              ///< ell
  std::size_t bandwidth = 0;         ///< m
  std::size_t n = 0;                 ///< originating series length
  RegressorForm form = RegressorForm::SinSquared;

  std::size_t size() const noexcept { return responses.size(); }
};

/// 2 pi j / n for j = 1..floor(n/2). Throws InvalidInput for n < 4.
std::vector<double> fourier_frequencies(std::size_t n);

/// I(lambda_j) = |sum_t x_t exp(-i lambda_j t)|^2 / (2 pi n), evaluated with a
/// real FFT. No mean removal: ordinates at j >= 1 are invariant to additive
/// constants.
Periodogram periodogram(const TimeSeries& series);

/// Direct O(n^2) trigonometric double sum. Reference implementation used to
/// validate the fast path; practical only for short series.
Periodogram periodogram_direct(const TimeSeries& series);

/// -log(4 sin^2(lambda/2)). Throws DomainError unless 0 < lambda <= pi.
double regressor(double lambda);

/// Regressor in the requested form.
double regressor(double lambda, RegressorForm form);

/// y_j = log sum_{k=1..K} I(lambda_{j+k-K}) for j = ell+K, ell+2K, ..., <= m.
/// Throws InvalidBandwidth when K = 0 or the grid is empty or m > floor(n/2),
/// DegenerateInput when a pooled sum is zero.
RegressionSample pooled_log_periodogram(const Periodogram& pg, std::size_t pooling,
                                        std::size_t trim, std::size_t bandwidth,
                                        RegressorForm form = RegressorForm::SinSquared);

}  // namespace lomem

#endif  // LOMEM_SPECTRAL_HPP
